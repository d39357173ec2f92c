/*
 * Copyright (C) 2026 The arpcheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <arpcheck/contexts.h>

#include <algorithm>

namespace arpcheck {

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::Dangerous:
      return "dangerous";
    case TargetKind::Check:
      return "check";
    case TargetKind::Request:
      return "request";
    case TargetKind::Launch:
      return "launch";
  }
  return "?";
}

std::string_view to_string(EstimationMode mode) {
  return mode == EstimationMode::Over ? "over" : "under";
}

std::optional<EstimationMode> estimation_mode_from_string(std::string_view text) {
  if (text == "over") {
    return EstimationMode::Over;
  } else if (text == "under") {
    return EstimationMode::Under;
  }
  return std::nullopt;
}

std::string_view to_string(ManagementKind kind) {
  switch (kind) {
    case ManagementKind::IntraProcedure:
      return "intra-procedure";
    case ManagementKind::InterProcedure:
      return "inter-procedure";
    case ManagementKind::InterCallback:
      return "inter-callback";
    case ManagementKind::InterComponent:
      return "inter-component";
  }
  return "?";
}

namespace {

struct Target {
  SiteId site;
  TargetKind kind;
  std::string name;
};

std::vector<Target> collect_targets(const AppModel& app) {
  std::vector<Target> targets;
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        SiteId site{method.name, block.id, index};
        if (const auto* call = statement.as<CallDangerous>()) {
          targets.push_back({site, TargetKind::Dangerous, call->api});
        } else if (statement.as<CallCheck>()) {
          targets.push_back({site, TargetKind::Check, ""});
        } else if (statement.as<CallRequest>()) {
          targets.push_back({site, TargetKind::Request, ""});
        } else if (const auto* launch = statement.as<LaunchComponent>()) {
          targets.push_back({site, TargetKind::Launch, launch->component});
        }
      });
    }
  }
  return targets;
}

class Walker {
 public:
  Walker(const CallGraph& cg, int bound, ContextSet& out)
      : cg_(cg), bound_(bound), out_(out) {}

  void run(const Target& target) {
    target_ = &target;
    suffix_ = {target.site};
    walk(target.site.method);
  }

 private:
  void walk(const std::string& method) {
    for (const auto& entry : cg_.entries_of(method)) {
      CallingContext context;
      context.entry = entry;
      context.path.assign(suffix_.rbegin(), suffix_.rend());
      context.target_kind = target_->kind;
      context.target = target_->name;
      out_.contexts.push_back(std::move(context));
    }
    auto callers = cg_.callers_of(method);
    if (static_cast<int>(suffix_.size()) >= bound_) {
      if (!callers.empty()) {
        out_.diagnostics.push_back(
            "context search for " + target_->site.str() + " cut at " +
            std::to_string(bound_) + " sites in " + method);
      }
      return;
    }
    for (const auto* edge : callers) {
      if (used_.count(edge->site)) {
        continue;
      }
      used_.insert(edge->site);
      suffix_.push_back(edge->site);
      walk(edge->caller);
      suffix_.pop_back();
      used_.erase(edge->site);
    }
  }

  const CallGraph& cg_;
  int bound_;
  ContextSet& out_;
  const Target* target_ = nullptr;
  std::vector<SiteId> suffix_;
  std::set<SiteId> used_;
};

bool same_prefix_except_last(const CallingContext& a, const CallingContext& b) {
  return a.path.size() == b.path.size() &&
      std::equal(a.path.begin(), a.path.end() - 1, b.path.begin());
}

} // namespace

ContextSet extract_contexts(const CallGraph& cg, const AppModel& app, int bound) {
  ContextSet out;
  for (const auto& target : collect_targets(app)) {
    Walker(cg, std::max(bound, 1), out).run(target);
  }
  std::sort(out.contexts.begin(), out.contexts.end());
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  out.diagnostics.erase(
      std::unique(out.diagnostics.begin(), out.diagnostics.end()),
      out.diagnostics.end());
  return out;
}

std::vector<CallingContext> filter_app_only(
    const std::vector<CallingContext>& contexts,
    const AppModel& app,
    const std::string& package_id,
    EstimationMode mode) {
  if (mode == EstimationMode::Over) {
    return contexts;
  }
  std::vector<CallingContext> kept;
  for (const auto& context : contexts) {
    const auto* component = app.find_component(context.entry.component);
    if (component == nullptr) {
      continue;
    }
    const auto& package = component->package;
    if (package == package_id ||
        (package.size() > package_id.size() &&
         package.compare(0, package_id.size(), package_id) == 0 &&
         package[package_id.size()] == '.')) {
      kept.push_back(context);
    }
  }
  return kept;
}

std::optional<ManagementKind> classify(
    const CallingContext& a,
    const CallingContext& b,
    const IccGraph& icc) {
  if (a.entry == b.entry) {
    return same_prefix_except_last(a, b) ? ManagementKind::IntraProcedure
                                         : ManagementKind::InterProcedure;
  }
  if (a.entry.component == b.entry.component) {
    return ManagementKind::InterCallback;
  }
  if (icc.connects(a.entry.component, b.entry.component) ||
      icc.connects(b.entry.component, a.entry.component)) {
    return ManagementKind::InterComponent;
  }
  return std::nullopt;
}

NoRequirement::NoRequirement(const std::string& api, int level)
    : std::runtime_error(
          "API " + api + " has no permission requirement at level " +
          std::to_string(level)) {}

bool covers(const PermissionNeed& need, const std::set<std::string>& checked) {
  switch (need.kind) {
    case PermissionNeed::Kind::AnyOf:
      return std::any_of(
          need.dangerous.begin(), need.dangerous.end(),
          [&](const std::string& p) { return checked.count(p) > 0; });
    case PermissionNeed::Kind::AllOf:
      return std::includes(
          checked.begin(), checked.end(), need.dangerous.begin(),
          need.dangerous.end());
    case PermissionNeed::Kind::Free:
    case PermissionNeed::Kind::Unobtainable:
      return false;
  }
  return false;
}

std::vector<ContextMatch> best_matches(
    const CallingContext& dangerous,
    const std::vector<CallingContext>& candidates,
    const MappingStore& store,
    int level,
    const SiteResolution& resolution,
    const AppModel& app,
    const IccGraph& icc) {
  auto requirement = lookup(store, dangerous.target, level);
  if (!requirement) {
    throw NoRequirement(dangerous.target, level);
  }
  auto need = permission_need(*requirement, store.at(level));
  std::vector<ContextMatch> matches;
  for (const auto& candidate : candidates) {
    if (candidate.target_kind != TargetKind::Check) {
      continue;
    }
    auto kind = classify(dangerous, candidate, icc);
    if (!kind) {
      continue;
    }
    auto checked = resolve_site(resolution, candidate.site(), app);
    if (covers(need, checked.permissions)) {
      matches.push_back({dangerous, candidate, *kind, true});
    }
  }
  if (matches.empty()) {
    return matches;
  }
  auto closest = std::min_element(
                     matches.begin(), matches.end(),
                     [](const auto& x, const auto& y) { return x.kind < y.kind; })
                     ->kind;
  std::erase_if(matches, [&](const auto& m) { return m.kind != closest; });
  std::sort(matches.begin(), matches.end());
  return matches;
}

} // namespace arpcheck
