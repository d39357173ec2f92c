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

#include <arpcheck/detector.h>

#include <algorithm>
#include <tuple>

namespace arpcheck {

std::string_view to_string(BugKind kind) {
  return kind == BugKind::Type1 ? "type1" : "type2";
}

std::string_view to_string(Evidence evidence) {
  switch (evidence) {
    case Evidence::MissingCheck:
      return "missing_check";
    case Evidence::IncompatibleLevel:
      return "incompatible_level";
    case Evidence::PermissionChange:
      return "permission_change";
    case Evidence::UnobtainablePermission:
      return "unobtainable_permission";
  }
  return "?";
}

std::string_view to_string(Suppression suppression) {
  return suppression == Suppression::TryCatch ? "trycatch" : "handle_guard";
}

const DominatorTree& DominatorCache::of(const std::string& method) {
  auto& slot = trees_[method];
  if (!slot) {
    const auto* found = app_.find_method(method);
    if (found == nullptr) {
      throw std::out_of_range("unknown method " + method);
    }
    slot = std::make_unique<DominatorTree>(*found);
  }
  return *slot;
}

LevelSet reachable_rvs(
    const CallingContext& context,
    const AppModel& app,
    int lav,
    DominatorCache& doms) {
  auto levels = LevelSet::universe(lav);
  for (const auto& site : context.path) {
    const auto& tree = doms.of(site.method);
    if (!tree.is_reachable(site.block)) {
      return {};
    }
    for (const auto& block : app.find_method(site.method)->blocks) {
      const auto* branch = std::get_if<Branch>(&block.terminator);
      if (branch == nullptr) {
        continue;
      }
      const auto* rv = std::get_if<RvCond>(&branch->cond);
      if (rv == nullptr) {
        continue;
      }
      if (tree.edge_dominates(block.id, branch->if_true, site.block)) {
        levels &= LevelSet::satisfying(rv->op, rv->value, lav);
      } else if (tree.edge_dominates(block.id, branch->if_false, site.block)) {
        levels &= LevelSet::satisfying(rv->op, rv->value, lav).complement(lav);
      }
    }
  }
  return levels;
}

LevelSet reachable_rvs(const CallingContext& context, const AppModel& app, int lav) {
  DominatorCache doms(app);
  return reachable_rvs(context, app, lav, doms);
}

Analysis::Analysis(const AppModel& app, const Config& config)
    : app_(app),
      config_(config),
      cg_(build_call_graph(app)),
      icfg_(build_icfg(app, cg_)),
      icc_(build_icc(app, cg_)),
      resolution_(solve_reaching(app, cg_, icfg_)),
      doms_(app) {
  auto extracted = extract_contexts(cg_, app, config.path_bound);
  contexts_ = filter_app_only(
      extracted.contexts, app, app.manifest.package_id, config.estimate);
  diagnostics_ = std::move(extracted.diagnostics);
  diagnostics_.insert(
      diagnostics_.end(), resolution_.diagnostics.begin(),
      resolution_.diagnostics.end());
}

namespace {

class Verdicts {
 public:
  Verdicts(const Analysis& analysis, const MappingStore& store)
      : a_(analysis), store_(store) {}

  bool is_protected(const CallingContext& dangerous, const PermissionNeed& need) {
    if (need.kind == PermissionNeed::Kind::Free) {
      return true;
    }
    if (need.kind == PermissionNeed::Kind::Unobtainable) {
      return false;
    }
    if (need.kind == PermissionNeed::Kind::AnyOf) {
      return std::any_of(
          need.dangerous.begin(), need.dangerous.end(),
          [&](const std::string& p) { return guarded(dangerous, p); });
    }
    return std::all_of(
        need.dangerous.begin(), need.dangerous.end(),
        [&](const std::string& p) { return guarded(dangerous, p); });
  }

  std::optional<Suppression> suppression(
      const CallingContext& dangerous,
      const PermissionNeed& need,
      Evidence evidence) {
    // A removed API fails with a missing-method error, which the security
    // handler does not catch.
    if (evidence != Evidence::IncompatibleLevel) {
      for (const auto& site : dangerous.path) {
        if (site_in_trycatch(a_.app(), site)) {
          return Suppression::TryCatch;
        }
      }
    }
    if (dangerous.entry.kind == CallbackKind::OnRequestPermissionsResult &&
        !need.dangerous.empty() && handle_guarded(dangerous, need)) {
      return Suppression::HandleGuard;
    }
    return std::nullopt;
  }

  std::vector<ContextMatch> matches(const CallingContext& dangerous, int level) {
    try {
      return best_matches(
          dangerous, a_.contexts(), store_, level, a_.resolution(), a_.app(),
          a_.icc());
    } catch (const NoRequirement&) {
      return {};
    }
  }

 private:
  bool checks(const CallingContext& check, const std::string& permission) {
    if (check.target_kind != TargetKind::Check) {
      return false;
    }
    auto resolved = resolve_site(a_.resolution(), check.site(), a_.app());
    return resolved.permissions.count(permission) > 0;
  }

  // The check's positive edge dominates the target's path within the method
  // where the two paths part.
  bool synchronous(const CallingContext& check, const CallingContext& target) {
    if (check.entry != target.entry) {
      return false;
    }
    std::size_t depth = check.path.size() - 1;
    if (target.path.size() <= depth ||
        !std::equal(
            check.path.begin(), check.path.begin() + depth,
            target.path.begin())) {
      return false;
    }
    const auto& site = check.site();
    const auto& node = target.path[depth];
    if (node.method != site.method) {
      return false;
    }
    const auto* block = a_.app().find_method(site.method)->find_block(site.block);
    const auto* branch = std::get_if<Branch>(&block->terminator);
    if (branch == nullptr ||
        !std::holds_alternative<CheckResultCond>(branch->cond)) {
      return false;
    }
    // The branch reads the last top-level check of its block.
    int last_check = -1;
    int index = 0;
    for (const auto& statement : block->statements) {
      if (statement.as<CallCheck>()) {
        last_check = index;
      }
      if (const auto* region = statement.as<TryCatchSecurity>()) {
        int nested = 0;
        for_each_statement(
            BasicBlock{"", region->body, Return{}},
            [&](const Statement&, int, bool) { ++nested; });
        index += nested;
      }
      ++index;
    }
    if (last_check != site.index) {
      return false;
    }
    return a_.dominators()
        .of(site.method)
        .edge_dominates(block->id, branch->if_true, node.block);
  }

  bool guarded(const CallingContext& dangerous, const std::string& permission) {
    for (const auto& check : a_.contexts()) {
      if (!checks(check, permission)) {
        continue;
      }
      auto kind = classify(dangerous, check, a_.icc());
      if (!kind) {
        continue;
      }
      switch (*kind) {
        case ManagementKind::IntraProcedure:
        case ManagementKind::InterProcedure:
          if (synchronous(check, dangerous)) {
            return true;
          }
          break;
        case ManagementKind::InterCallback:
          if (a_.config().order.precedes(
                  check.entry.kind, dangerous.entry.kind)) {
            return true;
          }
          break;
        case ManagementKind::InterComponent:
          break;
      }
    }
    return launches_guarded(dangerous.entry.component, permission);
  }

  // Every launch of the component sits behind a check of the permission.
  bool launches_guarded(const std::string& component, const std::string& permission) {
    bool any = false;
    for (const auto& launch : a_.contexts()) {
      if (launch.target_kind != TargetKind::Launch || launch.target != component) {
        continue;
      }
      any = true;
      bool covered = std::any_of(
          a_.contexts().begin(), a_.contexts().end(), [&](const auto& check) {
            return checks(check, permission) && synchronous(check, launch);
          });
      if (!covered) {
        return false;
      }
    }
    return any;
  }

  bool handle_guarded(const CallingContext& dangerous, const PermissionNeed& need) {
    const auto& site = dangerous.path.front();
    const auto* method = a_.app().find_method(site.method);
    const auto& tree = a_.dominators().of(site.method);
    auto granted = [&](const std::string& permission) {
      for (const auto& block : method->blocks) {
        const auto* branch = std::get_if<Branch>(&block.terminator);
        if (branch == nullptr) {
          continue;
        }
        const auto* grant = std::get_if<GrantResultCond>(&branch->cond);
        if (grant != nullptr && grant->permission == permission &&
            tree.edge_dominates(block.id, branch->if_true, site.block)) {
          return true;
        }
      }
      return false;
    };
    if (need.kind == PermissionNeed::Kind::AllOf) {
      return std::all_of(need.dangerous.begin(), need.dangerous.end(), granted);
    }
    return std::any_of(need.dangerous.begin(), need.dangerous.end(), granted);
  }

  const Analysis& a_;
  const MappingStore& store_;
};

std::vector<const CallingContext*> dangerous_contexts(const Analysis& analysis) {
  std::vector<const CallingContext*> out;
  for (const auto& context : analysis.contexts()) {
    if (context.target_kind == TargetKind::Dangerous) {
      out.push_back(&context);
    }
  }
  return out;
}

} // namespace

std::vector<BugReport> detect_type1(const Analysis& analysis, const MappingStore& store) {
  Verdicts verdicts(analysis, store);
  const int target = analysis.app().manifest.target_sdk;
  const int lav = analysis.config().lav;
  std::vector<BugReport> reports;
  if (target > store.lav()) {
    return reports;
  }
  for (const auto* context : dangerous_contexts(analysis)) {
    if (!store.known(context->target)) {
      continue;
    }
    auto rvs = reachable_rvs(*context, analysis.app(), lav, analysis.dominators());
    if (!rvs.contains(target)) {
      continue;
    }
    auto requirement = lookup(store, context->target, target);
    if (!requirement) {
      continue;
    }
    auto need = permission_need(*requirement, store.at(target));
    if (need.kind != PermissionNeed::Kind::AnyOf &&
        need.kind != PermissionNeed::Kind::AllOf) {
      continue;
    }
    if (verdicts.is_protected(*context, need)) {
      continue;
    }
    BugReport report;
    report.kind = BugKind::Type1;
    report.context = *context;
    report.api = context->target;
    report.levels.insert(target);
    report.evidence = Evidence::MissingCheck;
    report.matched_checks = verdicts.matches(*context, target);
    report.suppressed_by =
        verdicts.suppression(*context, need, Evidence::MissingCheck);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<BugReport> detect_type2(const Analysis& analysis, const MappingStore& store) {
  Verdicts verdicts(analysis, store);
  const int target = analysis.app().manifest.target_sdk;
  const int lav = std::min(analysis.config().lav, store.lav());
  std::vector<BugReport> reports;
  for (const auto* context : dangerous_contexts(analysis)) {
    const auto& api = context->target;
    if (!store.known(api)) {
      continue;
    }
    auto rvs = reachable_rvs(*context, analysis.app(), lav, analysis.dominators());
    std::optional<Requirement> at_target;
    if (target <= store.lav()) {
      at_target = lookup(store, api, target);
    }
    std::map<Evidence, LevelSet> found;
    std::map<Evidence, PermissionNeed> needs;
    for (int level : rvs.without(target).to_vector()) {
      if (!store.exists(api, level)) {
        found[Evidence::IncompatibleLevel].insert(level);
        continue;
      }
      auto requirement = lookup(store, api, level);
      if (!requirement) {
        continue;
      }
      // Type-1 already covers the target's own requirement.
      if (requirement == at_target && rvs.contains(target)) {
        continue;
      }
      auto need = permission_need(*requirement, store.at(level));
      Evidence evidence;
      if (need.kind == PermissionNeed::Kind::Unobtainable) {
        evidence = Evidence::UnobtainablePermission;
      } else if (need.kind == PermissionNeed::Kind::Free) {
        continue;
      } else if (verdicts.is_protected(*context, need)) {
        continue;
      } else {
        evidence = requirement == at_target ? Evidence::MissingCheck
                                            : Evidence::PermissionChange;
      }
      found[evidence].insert(level);
      auto& merged = needs[evidence];
      merged.kind = need.kind;
      merged.dangerous.insert(need.dangerous.begin(), need.dangerous.end());
    }
    for (const auto& [evidence, levels] : found) {
      BugReport report;
      report.kind = BugKind::Type2;
      report.context = *context;
      report.api = api;
      report.levels = levels;
      report.evidence = evidence;
      report.matched_checks = verdicts.matches(*context, levels.to_vector().front());
      report.suppressed_by = verdicts.suppression(*context, needs[evidence], evidence);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

namespace {

auto report_key(const BugReport& report) {
  return std::tie(
      report.context.entry.component, report.context.entry.method,
      report.context.path, report.kind, report.evidence, report.api,
      report.context.entry.kind);
}

} // namespace

AnalysisResult analyze(
    const AppModel& app,
    const MappingStore& store,
    const Config& config) {
  Analysis analysis(app, config);
  AnalysisResult result;
  result.app = app.manifest.package_id;
  result.diagnostics = analysis.diagnostics();

  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        SiteId site{method.name, block.id, index};
        if (const auto* call = statement.as<CallDangerous>()) {
          if (!store.known(call->api)) {
            result.diagnostics.push_back(
                "unknown API " + call->api + " at " + site.str());
          }
        } else if (statement.as<CallExplain>()) {
          auto resolved = resolve_site(analysis.resolution(), site, app);
          std::string names;
          for (const auto& name : resolved.permissions) {
            names += (names.empty() ? "" : ", ") + name;
          }
          result.notes.push_back(
              "rationale shown at " + site.str() + " for {" + names + "}");
        }
        if (statement.as<CallCheck>() || statement.as<CallRequest>()) {
          if (resolve_site(analysis.resolution(), site, app).fallback) {
            result.diagnostics.push_back(
                "permission operand at " + site.str() +
                " unresolved; using every app literal");
          }
        }
      });
    }
  }

  result.reports = detect_type1(analysis, store);
  auto type2 = detect_type2(analysis, store);
  result.reports.insert(
      result.reports.end(), std::make_move_iterator(type2.begin()),
      std::make_move_iterator(type2.end()));
  std::stable_sort(
      result.reports.begin(), result.reports.end(),
      [](const BugReport& x, const BugReport& y) {
        return report_key(x) < report_key(y);
      });
  return result;
}

std::vector<BugReport> visible_reports(const AnalysisResult& result, bool verbose) {
  std::vector<BugReport> out;
  for (const auto& report : result.reports) {
    if (verbose || !report.suppressed_by) {
      out.push_back(report);
    }
  }
  return out;
}

} // namespace arpcheck
