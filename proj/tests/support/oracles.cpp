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

#include "oracles.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace arptest {

using namespace arpcheck;

std::vector<std::vector<int>> block_graph(const Method& method) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < method.blocks.size(); ++i) {
    index[method.blocks[i].id] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> successors(method.blocks.size());
  for (std::size_t i = 0; i < method.blocks.size(); ++i) {
    for (const auto& id : method.blocks[i].successors()) {
      successors[i].push_back(index.at(id));
    }
  }
  return successors;
}

std::vector<std::set<int>> fixed_point_dominators(
    const std::vector<std::vector<int>>& successors,
    int entry) {
  const int n = static_cast<int>(successors.size());
  std::vector<bool> reachable(n, false);
  std::vector<int> stack{entry};
  reachable[entry] = true;
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    for (int next : successors[node]) {
      if (!reachable[next]) {
        reachable[next] = true;
        stack.push_back(next);
      }
    }
  }
  std::vector<std::vector<int>> preds(n);
  for (int from = 0; from < n; ++from) {
    for (int to : successors[from]) {
      if (reachable[from]) {
        preds[to].push_back(from);
      }
    }
  }

  std::set<int> all;
  for (int i = 0; i < n; ++i) {
    if (reachable[i]) {
      all.insert(i);
    }
  }
  std::vector<std::set<int>> dom(n);
  for (int i = 0; i < n; ++i) {
    if (reachable[i]) {
      dom[i] = i == entry ? std::set<int>{entry} : all;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!reachable[i] || i == entry) {
        continue;
      }
      std::set<int> next = all;
      for (int p : preds[i]) {
        std::set<int> meet;
        std::set_intersection(
            next.begin(), next.end(), dom[p].begin(), dom[p].end(),
            std::inserter(meet, meet.end()));
        next = std::move(meet);
      }
      next.insert(i);
      if (next != dom[i]) {
        dom[i] = std::move(next);
        changed = true;
      }
    }
  }
  return dom;
}

namespace {

using Env = std::map<std::string, std::set<std::string>>;

std::set<std::string> values_of(const Operand& operand, const Env& env) {
  switch (operand.kind) {
    case Operand::Kind::Literal:
      return {operand.text};
    case Operand::Kind::Variable: {
      auto it = env.find(operand.text);
      return it == env.end() ? std::set<std::string>{} : it->second;
    }
    case Operand::Kind::Integer:
      break;
  }
  return {};
}

class PathWalker {
 public:
  explicit PathWalker(const AppModel& app) : app_(app) {}

  void walk_method(const Method& method, const Env& env, int depth) {
    if (depth > 32) {
      throw std::runtime_error("call depth exceeded; recursion in oracle input");
    }
    walk_block(method, method.entry_block(), env, depth, {});
  }

  std::map<SiteId, std::set<std::string>> sites;

 private:
  void record(const SiteId& site, const Operand& operand, const Env& env) {
    auto values = values_of(operand, env);
    sites[site].insert(values.begin(), values.end());
  }

  void walk_block(
      const Method& method,
      const BasicBlock& block,
      Env env,
      int depth,
      std::set<std::string> on_path) {
    if (!on_path.insert(block.id).second) {
      throw std::runtime_error("cycle in oracle input: " + method.name);
    }
    for_each_statement(block, [&](const Statement& statement, int index, bool) {
      SiteId site{method.name, block.id, index};
      if (const auto* def = statement.as<DefString>()) {
        env[def->var] = {def->literal};
      } else if (const auto* def = statement.as<DefStringFromParam>()) {
        env[def->var] = env[def->param];
      } else if (const auto* def = statement.as<DefArray>()) {
        std::set<std::string> values;
        for (const auto& element : def->elements) {
          auto more = values_of(element, env);
          values.insert(more.begin(), more.end());
        }
        env[def->var] = std::move(values);
      } else if (const auto* store = statement.as<ArrayStore>()) {
        auto more = values_of(store->source, env);
        env[store->var].insert(more.begin(), more.end());
      } else if (const auto* check = statement.as<CallCheck>()) {
        record(site, check->permission, env);
      } else if (const auto* request = statement.as<CallRequest>()) {
        record(site, request->permissions, env);
      } else if (const auto* explain = statement.as<CallExplain>()) {
        record(site, explain->permission, env);
      } else if (const auto* call = statement.as<CallMethod>()) {
        const Method* callee = app_.find_method(call->target);
        Env bound;
        for (std::size_t i = 0; i < callee->params.size(); ++i) {
          bound[callee->params[i].name] = values_of(call->args[i], env);
        }
        walk_method(*callee, bound, depth + 1);
      }
    });
    for (const auto& next : block.successors()) {
      walk_block(method, *method.find_block(next), env, depth, on_path);
    }
  }

  const AppModel& app_;
};

} // namespace

std::map<SiteId, std::set<std::string>> enumerate_site_values(
    const AppModel& app) {
  PathWalker walker(app);
  for (const auto& component : app.components) {
    for (const auto& [kind, name] : component.callbacks) {
      const Method* method = app.find_method(name);
      if (!method->params.empty()) {
        throw std::invalid_argument("oracle needs parameterless entries");
      }
      walker.walk_method(*method, {}, 0);
    }
  }
  return walker.sites;
}

namespace {

LevelSet rvs_in_method(const Method& method, const std::string& target, int lav) {
  LevelSet result;
  std::function<void(const BasicBlock&, LevelSet, std::set<std::string>)> dfs =
      [&](const BasicBlock& block, LevelSet levels, std::set<std::string> seen) {
        if (!seen.insert(block.id).second) {
          throw std::runtime_error("cycle in oracle input: " + method.name);
        }
        if (block.id == target) {
          result |= levels;
          return;
        }
        if (const auto* branch = std::get_if<Branch>(&block.terminator)) {
          LevelSet on_true = levels;
          LevelSet on_false = levels;
          if (const auto* rv = std::get_if<RvCond>(&branch->cond)) {
            // Each level decides the branch by direct evaluation.
            for (int level = kMinLevel; level <= lav; ++level) {
              if (evaluate(rv->op, level, rv->value)) {
                on_false.erase(level);
              } else {
                on_true.erase(level);
              }
            }
          }
          dfs(*method.find_block(branch->if_true), on_true, seen);
          dfs(*method.find_block(branch->if_false), on_false, seen);
        } else if (const auto* jump = std::get_if<Goto>(&block.terminator)) {
          dfs(*method.find_block(jump->target), levels, seen);
        }
      };
  dfs(method.entry_block(), LevelSet::universe(lav), {});
  return result;
}

} // namespace

LevelSet enumerate_rvs(
    const CallingContext& context,
    const AppModel& app,
    int lav) {
  LevelSet result = LevelSet::universe(lav);
  for (const auto& site : context.path) {
    result &= rvs_in_method(*app.find_method(site.method), site.block, lav);
  }
  return result;
}

namespace {

int strongest(const Requirement& requirement, const LevelMapping& mapping) {
  int best = -1;
  for (const auto& permission : requirement.permissions) {
    best = std::max(best, static_cast<int>(mapping.permissions.at(permission)));
  }
  return best;
}

} // namespace

EvolutionReport brute_force_diff(
    const LevelMapping& from,
    const LevelMapping& to) {
  std::set<std::string> apis;
  for (const auto& [api, requirement] : from.apis) {
    apis.insert(api);
  }
  for (const auto& [api, requirement] : to.apis) {
    apis.insert(api);
  }
  EvolutionReport report;
  for (const auto& api : apis) {
    auto before = from.apis.find(api);
    auto after = to.apis.find(api);
    bool in_from = before != from.apis.end();
    bool in_to = after != to.apis.end();
    if (in_from && !in_to) {
      report.deleted.insert(api);
    } else if (!in_from && in_to) {
      report.added.insert(api);
    } else if (
        before->second.mode != after->second.mode ||
        before->second.permissions != after->second.permissions) {
      int old_level = strongest(before->second, from);
      int new_level = strongest(after->second, to);
      report.changed[api] = new_level > old_level   ? ChangeKind::Restricted
                            : new_level < old_level ? ChangeKind::Relaxed
                                                    : ChangeKind::SameLevel;
    }
  }
  return report;
}

bool brute_force_evolving(const MappingStore& store, const std::string& api) {
  auto raw = [&](int level) -> const Requirement* {
    const auto& apis = store.at(level).apis;
    auto it = apis.find(api);
    return it == apis.end() ? nullptr : &it->second;
  };
  for (int level = kMinLevel; level < store.lav(); ++level) {
    const Requirement* a = raw(level);
    const Requirement* b = raw(level + 1);
    if ((a == nullptr) != (b == nullptr)) {
      return true;
    }
    if (a != nullptr && !(*a == *b)) {
      return true;
    }
  }
  return false;
}

std::set<ContextKey> forward_contexts(const AppModel& app, int bound) {
  std::set<ContextKey> found;
  using Edge = std::tuple<std::string, SiteId, std::string>;
  std::function<void(const EntryPoint&, const Method&, std::vector<SiteId>&,
                     std::set<Edge>&)>
      visit = [&](const EntryPoint& entry, const Method& method,
                  std::vector<SiteId>& path, std::set<Edge>& used) {
        for (const auto& block : method.blocks) {
          for_each_statement(block, [&](const Statement& statement, int index, bool) {
            SiteId site{method.name, block.id, index};
            std::optional<TargetKind> kind;
            if (statement.as<CallDangerous>()) {
              kind = TargetKind::Dangerous;
            } else if (statement.as<CallCheck>()) {
              kind = TargetKind::Check;
            } else if (statement.as<CallRequest>()) {
              kind = TargetKind::Request;
            } else if (statement.as<LaunchComponent>()) {
              kind = TargetKind::Launch;
            }
            if (kind && static_cast<int>(path.size()) + 1 <= bound) {
              auto full = path;
              full.push_back(site);
              found.emplace(entry, std::move(full), *kind);
            }
            const auto* call = statement.as<CallMethod>();
            if (call == nullptr || static_cast<int>(path.size()) + 1 >= bound) {
              return;
            }
            Edge edge{method.name, site, call->target};
            if (!used.insert(edge).second) {
              return;
            }
            path.push_back(site);
            visit(entry, *app.find_method(call->target), path, used);
            path.pop_back();
            used.erase(edge);
          });
        }
      };
  for (const auto& component : app.components) {
    for (const auto& [kind, name] : component.callbacks) {
      EntryPoint entry{component.name, kind, name};
      std::vector<SiteId> path;
      std::set<Edge> used;
      visit(entry, *app.find_method(name), path, used);
    }
  }
  return found;
}

std::set<CallEdge> scan_call_edges(const AppModel& app) {
  std::set<CallEdge> edges;
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        if (const auto* call = statement.as<CallMethod>()) {
          edges.insert({method.name, SiteId{method.name, block.id, index}, call->target});
        }
      });
    }
  }
  return edges;
}

std::vector<IccEdge> scan_launches(const AppModel& app) {
  auto edges = scan_call_edges(app);
  std::map<std::string, std::set<std::string>> reached_by;
  for (const auto& component : app.components) {
    std::vector<std::string> stack;
    std::set<std::string> seen;
    for (const auto& [kind, name] : component.callbacks) {
      if (seen.insert(name).second) {
        stack.push_back(name);
      }
    }
    while (!stack.empty()) {
      auto method = stack.back();
      stack.pop_back();
      reached_by[method].insert(component.name);
      for (const auto& edge : edges) {
        if (edge.caller == method && seen.insert(edge.callee).second) {
          stack.push_back(edge.callee);
        }
      }
    }
  }
  std::vector<IccEdge> launches;
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        if (const auto* launch = statement.as<LaunchComponent>()) {
          launches.push_back(
              {SiteId{method.name, block.id, index}, launch->component,
               reached_by[method.name]});
        }
      });
    }
  }
  std::sort(launches.begin(), launches.end(), [](const auto& a, const auto& b) {
    return a.site < b.site;
  });
  return launches;
}

} // namespace arptest
