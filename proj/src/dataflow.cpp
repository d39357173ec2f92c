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

#include <arpcheck/dataflow.h>

#include <deque>
#include <stdexcept>

namespace arpcheck {

bool ValueSet::join(const ValueSet& other) {
  if (top) {
    return false;
  }
  if (other.top) {
    top = true;
    values.clear();
    return true;
  }
  auto before = values.size();
  values.insert(other.values.begin(), other.values.end());
  return values.size() != before;
}

std::string ValueSet::str() const {
  if (top) {
    return "T";
  }
  std::string out = "{";
  bool first = true;
  for (const auto& value : values) {
    out += (first ? "" : ", ") + value;
    first = false;
  }
  return out + "}";
}

namespace {

ValueSet eval(const Operand& operand, const Facts& facts) {
  switch (operand.kind) {
    case Operand::Kind::Literal:
      return ValueSet::of(operand.text);
    case Operand::Kind::Variable: {
      auto found = facts.find(operand.text);
      return found == facts.end() ? ValueSet{} : found->second;
    }
    case Operand::Kind::Integer:
      return {};
  }
  return {};
}

Facts transfer(const Statement& statement, Facts facts) {
  if (const auto* def = statement.as<DefString>()) {
    facts[def->var] = ValueSet::of(def->literal);
  } else if (const auto* def = statement.as<DefStringFromParam>()) {
    facts[def->var] = eval(Operand::variable(def->param), facts);
  } else if (const auto* def = statement.as<DefArray>()) {
    ValueSet value;
    for (const auto& element : def->elements) {
      value.join(eval(element, facts));
    }
    facts[def->var] = std::move(value);
  } else if (const auto* store = statement.as<ArrayStore>()) {
    // Weak update: the array keeps its earlier elements.
    facts[store->var].join(eval(store->source, facts));
  }
  return facts;
}

bool carries_strings(ParamType type) {
  return type == ParamType::String || type == ParamType::StringArray;
}

class Solver {
 public:
  Solver(const AppModel& app, const CallGraph& cg, const Icfg& icfg)
      : app_(app), cg_(cg), icfg_(icfg) {}

  SiteResolution run(long max_iterations) {
    const auto& nodes = icfg_.nodes();
    in_.assign(nodes.size(), {});
    out_.assign(nodes.size(), {});
    live_ = cg_.reachable_methods();

    std::vector<std::string> names;
    for (const auto& method : app_.methods) {
      names.push_back(method.name);
    }
    long rank = 0;
    rank_.assign(nodes.size(), 0);
    reachable_.assign(nodes.size(), false);
    long variables = 0;
    for (const auto& scc : call_graph_sccs(cg_, names)) {
      for (const auto& name : scc) {
        for (int node : reachable_nodes(name)) {
          reachable_[node] = true;
        }
        for (int node : icfg_.method_order(name)) {
          rank_[node] = rank++;
        }
        variables += count_variables(*app_.find_method(name));
        seed_method(name);
      }
    }

    if (max_iterations <= 0) {
      auto literals = static_cast<long>(string_literals(app_).size());
      max_iterations = static_cast<long>(nodes.size()) *
              (variables + 1) * (literals + 2) +
          static_cast<long>(nodes.size());
    }

    for (int node = 0; node < static_cast<int>(nodes.size()); ++node) {
      if (reachable_[node]) {
        worklist_.insert({rank_[node], node});
      }
    }
    SiteResolution result;
    while (!worklist_.empty()) {
      if (result.iterations >= max_iterations) {
        result.diagnostics.push_back(
            "string dataflow stopped after " + std::to_string(max_iterations) +
            " node visits without reaching a fixed point");
        break;
      }
      auto [unused, node] = *worklist_.begin();
      worklist_.erase(worklist_.begin());
      ++result.iterations;
      visit(node);
    }
    collect(result);
    return result;
  }

 private:
  std::vector<int> reachable_nodes(const std::string& method) const {
    std::vector<int> out;
    std::set<int> seen;
    std::deque<int> queue{icfg_.entry_of(method)};
    seen.insert(queue.front());
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      out.push_back(node);
      for (int id : icfg_.out_edges(node)) {
        const auto& edge = icfg_.edges()[id];
        if (edge.kind != IcfgEdgeKind::Normal &&
            edge.kind != IcfgEdgeKind::CallToReturn) {
          continue;
        }
        if (seen.insert(edge.to).second) {
          queue.push_back(edge.to);
        }
      }
    }
    return out;
  }

  static long count_variables(const Method& method) {
    std::set<std::string> vars;
    for (const auto& param : method.params) {
      vars.insert(param.name);
    }
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int, bool) {
        if (const auto* def = statement.as<DefString>()) {
          vars.insert(def->var);
        } else if (const auto* def = statement.as<DefStringFromParam>()) {
          vars.insert(def->var);
        } else if (const auto* def = statement.as<DefArray>()) {
          vars.insert(def->var);
        } else if (const auto* store = statement.as<ArrayStore>()) {
          vars.insert(store->var);
        }
      });
    }
    return static_cast<long>(vars.size());
  }

  // Parameters start unknown unless some live call site can bind them.
  void seed_method(const std::string& name) {
    const auto& method = *app_.find_method(name);
    bool bound = !cg_.entries_of(name).empty();
    bool has_live_caller = false;
    for (const auto* edge : cg_.callers_of(name)) {
      auto node = icfg_.node_of(edge->site);
      if (live_.count(edge->caller) && node && is_reachable_site(*node)) {
        has_live_caller = true;
      }
    }
    auto& seed = seeds_[name];
    for (const auto& param : method.params) {
      if (bound || !has_live_caller || !carries_strings(param.type)) {
        seed[param.name] = ValueSet::unknown();
      } else {
        seed[param.name] = ValueSet{};
      }
    }
  }

  // Call sites are checked before their method is ranked, so reachability
  // of the caller's nodes is computed on demand.
  bool is_reachable_site(int node) {
    const auto& method = icfg_.nodes()[node].method;
    auto found = reachable_sets_.find(method);
    if (found == reachable_sets_.end()) {
      auto nodes = reachable_nodes(method);
      found = reachable_sets_
                  .emplace(method, std::set<int>(nodes.begin(), nodes.end()))
                  .first;
    }
    return found->second.count(node) > 0;
  }

  void visit(int node) {
    const auto& info = icfg_.nodes()[node];
    Facts in;
    if (info.kind == IcfgNode::Kind::Entry) {
      in = seeds_.at(info.method);
    } else {
      for (int id : icfg_.in_edges(node)) {
        const auto& edge = icfg_.edges()[id];
        if (edge.kind != IcfgEdgeKind::Normal &&
            edge.kind != IcfgEdgeKind::CallToReturn) {
          continue;
        }
        for (const auto& [var, value] : out_[edge.from]) {
          in[var].join(value);
        }
      }
    }
    const Statement* statement = nullptr;
    if (info.kind == IcfgNode::Kind::Statement) {
      statement = statement_at(app_, {info.method, info.block, info.index});
    }
    Facts out = statement ? transfer(*statement, in) : in;
    in_[node] = std::move(in);
    if (statement != nullptr) {
      if (const auto* call = statement->as<CallMethod>()) {
        bind_arguments(info.method, *call, in_[node]);
      }
    }
    if (out == out_[node]) {
      return;
    }
    out_[node] = std::move(out);
    for (int id : icfg_.out_edges(node)) {
      const auto& edge = icfg_.edges()[id];
      if (edge.kind == IcfgEdgeKind::Normal ||
          edge.kind == IcfgEdgeKind::CallToReturn) {
        worklist_.insert({rank_[edge.to], edge.to});
      }
    }
  }

  void bind_arguments(
      const std::string& caller,
      const CallMethod& call,
      const Facts& in) {
    if (!live_.count(caller)) {
      return;
    }
    const auto* callee = app_.find_method(call.target);
    auto& seed = seeds_.at(call.target);
    bool changed = false;
    for (std::size_t i = 0; i < callee->params.size() && i < call.args.size();
         ++i) {
      const auto& param = callee->params[i];
      if (carries_strings(param.type)) {
        changed |= seed[param.name].join(eval(call.args[i], in));
      }
    }
    if (changed) {
      int entry = icfg_.entry_of(call.target);
      worklist_.insert({rank_[entry], entry});
    }
  }

  void collect(SiteResolution& result) const {
    for (const auto& method : app_.methods) {
      for (const auto& block : method.blocks) {
        for_each_statement(block, [&](const Statement& statement, int index, bool) {
          const Operand* operand = nullptr;
          if (const auto* check = statement.as<CallCheck>()) {
            operand = &check->permission;
          } else if (const auto* request = statement.as<CallRequest>()) {
            operand = &request->permissions;
          } else if (const auto* explain = statement.as<CallExplain>()) {
            operand = &explain->permission;
          }
          if (operand == nullptr) {
            return;
          }
          SiteId site{method.name, block.id, index};
          int node = *icfg_.node_of(site);
          result.sites[site] = eval(*operand, in_[node]);
        });
      }
    }
  }

  const AppModel& app_;
  const CallGraph& cg_;
  const Icfg& icfg_;
  std::set<std::string> live_;
  std::map<std::string, Facts> seeds_;
  std::map<std::string, std::set<int>> reachable_sets_;
  std::vector<Facts> in_;
  std::vector<Facts> out_;
  std::vector<long> rank_;
  std::vector<bool> reachable_;
  std::set<std::pair<long, int>> worklist_;
};

} // namespace

SiteResolution solve_reaching(
    const AppModel& app,
    const CallGraph& cg,
    const Icfg& icfg,
    long max_iterations) {
  return Solver(app, cg, icfg).run(max_iterations);
}

std::set<std::string> string_literals(const AppModel& app) {
  std::set<std::string> out;
  auto add = [&](const Operand& operand) {
    if (operand.kind == Operand::Kind::Literal) {
      out.insert(operand.text);
    }
  };
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int, bool) {
        std::visit(
            [&](const auto& node) {
              using T = std::decay_t<decltype(node)>;
              if constexpr (std::is_same_v<T, DefString>) {
                out.insert(node.literal);
              } else if constexpr (std::is_same_v<T, DefArray>) {
                for (const auto& element : node.elements) {
                  add(element);
                }
              } else if constexpr (std::is_same_v<T, ArrayStore>) {
                add(node.source);
              } else if constexpr (
                  std::is_same_v<T, CallMethod> ||
                  std::is_same_v<T, CallDangerous>) {
                for (const auto& arg : node.args) {
                  add(arg);
                }
              } else if constexpr (
                  std::is_same_v<T, CallCheck> ||
                  std::is_same_v<T, CallExplain>) {
                add(node.permission);
              } else if constexpr (std::is_same_v<T, CallRequest>) {
                add(node.permissions);
              }
            },
            statement.node);
      });
    }
  }
  return out;
}

ResolvedPermissions resolve_site(
    const SiteResolution& resolution,
    const SiteId& site,
    const AppModel& app) {
  auto found = resolution.sites.find(site);
  if (found == resolution.sites.end()) {
    throw std::out_of_range("no resolution for site " + site.str());
  }
  if (found->second.unresolved()) {
    return {string_literals(app), true};
  }
  return {found->second.values, false};
}

} // namespace arpcheck
