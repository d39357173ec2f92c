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

#include <arpcheck/graphs.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace arpcheck {

std::string EntryPoint::str() const {
  return component + "." + std::string(to_string(kind)) + "=" + method;
}

CallGraph::CallGraph(std::vector<CallEdge> edges, std::vector<EntryPoint> entries)
    : edges_(std::move(edges)), entries_(std::move(entries)) {
  std::sort(edges_.begin(), edges_.end());
  std::sort(entries_.begin(), entries_.end());
}

std::vector<const CallEdge*> CallGraph::callers_of(
    const std::string& method) const {
  std::vector<const CallEdge*> out;
  for (const auto& edge : edges_) {
    if (edge.callee == method) {
      out.push_back(&edge);
    }
  }
  return out;
}

std::vector<const CallEdge*> CallGraph::callees_of(
    const std::string& method) const {
  std::vector<const CallEdge*> out;
  for (const auto& edge : edges_) {
    if (edge.caller == method) {
      out.push_back(&edge);
    }
  }
  return out;
}

std::vector<EntryPoint> CallGraph::entries_of(const std::string& method) const {
  std::vector<EntryPoint> out;
  for (const auto& entry : entries_) {
    if (entry.method == method) {
      out.push_back(entry);
    }
  }
  return out;
}

std::set<std::string> CallGraph::reachable_methods() const {
  std::set<std::string> seen;
  std::deque<std::string> queue;
  for (const auto& entry : entries_) {
    if (seen.insert(entry.method).second) {
      queue.push_back(entry.method);
    }
  }
  while (!queue.empty()) {
    auto method = queue.front();
    queue.pop_front();
    for (const auto* edge : callees_of(method)) {
      if (seen.insert(edge->callee).second) {
        queue.push_back(edge->callee);
      }
    }
  }
  return seen;
}

CallGraph build_call_graph(const AppModel& app) {
  std::vector<CallEdge> edges;
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        if (const auto* call = statement.as<CallMethod>()) {
          edges.push_back({method.name, {method.name, block.id, index}, call->target});
        }
      });
    }
  }
  std::vector<EntryPoint> entries;
  for (const auto& component : app.components) {
    for (const auto& [kind, method] : component.callbacks) {
      entries.push_back({component.name, kind, method});
    }
  }
  return CallGraph(std::move(edges), std::move(entries));
}

std::vector<std::vector<std::string>> call_graph_sccs(
    const CallGraph& cg,
    const std::vector<std::string>& methods) {
  std::map<std::string, int> index;
  std::map<std::string, int> low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> sccs;
  int counter = 0;
  std::set<std::string> wanted(methods.begin(), methods.end());

  std::function<void(const std::string&)> connect = [&](const std::string& m) {
    index[m] = low[m] = counter++;
    stack.push_back(m);
    on_stack.insert(m);
    for (const auto* edge : cg.callees_of(m)) {
      const auto& next = edge->callee;
      if (!wanted.count(next)) {
        continue;
      }
      if (!index.count(next)) {
        connect(next);
        low[m] = std::min(low[m], low[next]);
      } else if (on_stack.count(next)) {
        low[m] = std::min(low[m], index[next]);
      }
    }
    if (low[m] == index[m]) {
      std::vector<std::string> scc;
      std::string top;
      do {
        top = stack.back();
        stack.pop_back();
        on_stack.erase(top);
        scc.push_back(top);
      } while (top != m);
      std::sort(scc.begin(), scc.end());
      sccs.push_back(std::move(scc));
    }
  };
  for (const auto& method : methods) {
    if (!index.count(method)) {
      connect(method);
    }
  }
  // Tarjan emits callees first.
  std::reverse(sccs.begin(), sccs.end());
  return sccs;
}

int Icfg::add_node(IcfgNode node) {
  nodes_.push_back(std::move(node));
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void Icfg::add_edge(int from, int to, IcfgEdgeKind kind) {
  edges_.push_back({from, to, kind});
  int id = static_cast<int>(edges_.size()) - 1;
  out_[from].push_back(id);
  in_[to].push_back(id);
}

int Icfg::entry_of(const std::string& method) const {
  return bounds_.at(method).first;
}

int Icfg::exit_of(const std::string& method) const {
  return bounds_.at(method).second;
}

std::optional<int> Icfg::node_of(const SiteId& site) const {
  auto found = sites_.find(site);
  if (found == sites_.end()) {
    return std::nullopt;
  }
  return found->second;
}

std::vector<int> Icfg::method_order(const std::string& method) const {
  int entry = entry_of(method);
  std::vector<int> post;
  std::set<int> seen{entry};
  // Iterative DFS over intra-procedural edges.
  std::vector<std::pair<int, std::size_t>> stack{{entry, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto& outs = out_[node];
    if (next < outs.size()) {
      const auto& edge = edges_[outs[next++]];
      if (edge.kind == IcfgEdgeKind::Call || edge.kind == IcfgEdgeKind::Return) {
        continue;
      }
      if (seen.insert(edge.to).second) {
        stack.push_back({edge.to, 0});
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  for (int node = 0; node < static_cast<int>(nodes_.size()); ++node) {
    if (nodes_[node].method == method && !seen.count(node)) {
      post.push_back(node);
    }
  }
  return post;
}

Icfg build_icfg(const AppModel& app, const CallGraph& cg) {
  (void)cg;
  Icfg icfg;
  std::map<std::pair<std::string, std::string>, int> block_heads;
  std::vector<std::pair<int, std::string>> call_sites;
  std::map<int, int> return_sites;

  for (const auto& method : app.methods) {
    int entry = icfg.add_node({IcfgNode::Kind::Entry, method.name, "", -1});
    int exit = icfg.add_node({IcfgNode::Kind::Exit, method.name, "", -1});
    icfg.bounds_[method.name] = {entry, exit};

    std::vector<std::pair<int, const BasicBlock*>> terminators;
    for (const auto& block : method.blocks) {
      std::vector<int> chain;
      std::vector<const CallMethod*> calls;
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        int node = icfg.add_node(
            {IcfgNode::Kind::Statement, method.name, block.id, index});
        icfg.sites_[{method.name, block.id, index}] = node;
        chain.push_back(node);
        calls.push_back(statement.as<CallMethod>());
      });
      int term = icfg.add_node(
          {IcfgNode::Kind::Terminator, method.name, block.id, -1});
      chain.push_back(term);
      block_heads[{method.name, block.id}] = chain.front();
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (calls[i] != nullptr) {
          icfg.add_edge(chain[i], chain[i + 1], IcfgEdgeKind::CallToReturn);
          call_sites.emplace_back(chain[i], calls[i]->target);
          return_sites[chain[i]] = chain[i + 1];
        } else {
          icfg.add_edge(chain[i], chain[i + 1], IcfgEdgeKind::Normal);
        }
      }
      terminators.emplace_back(term, &block);
    }
    icfg.add_edge(
        entry, block_heads.at({method.name, method.entry_block().id}),
        IcfgEdgeKind::Normal);
    for (const auto& [term, block] : terminators) {
      auto successors = block->successors();
      if (successors.empty()) {
        icfg.add_edge(term, exit, IcfgEdgeKind::Normal);
      }
      std::set<std::string> linked;
      for (const auto& successor : successors) {
        if (linked.insert(successor).second) {
          icfg.add_edge(
              term, block_heads.at({method.name, successor}),
              IcfgEdgeKind::Normal);
        }
      }
    }
  }
  for (const auto& [site, callee] : call_sites) {
    icfg.add_edge(site, icfg.entry_of(callee), IcfgEdgeKind::Call);
    icfg.add_edge(icfg.exit_of(callee), return_sites.at(site), IcfgEdgeKind::Return);
  }
  return icfg;
}

bool IccGraph::connects(const std::string& from, const std::string& to) const {
  for (const auto& edge : edges_) {
    if (edge.target == to && edge.sources.count(from)) {
      return true;
    }
  }
  return false;
}

std::vector<const IccEdge*> IccGraph::launches_of(
    const std::string& target) const {
  std::vector<const IccEdge*> out;
  for (const auto& edge : edges_) {
    if (edge.target == target) {
      out.push_back(&edge);
    }
  }
  return out;
}

IccGraph build_icc(const AppModel& app, const CallGraph& cg) {
  std::map<std::string, std::set<std::string>> reached_by;
  for (const auto& entry : cg.entries()) {
    std::set<std::string> seen{entry.method};
    std::deque<std::string> queue{entry.method};
    while (!queue.empty()) {
      auto method = queue.front();
      queue.pop_front();
      reached_by[method].insert(entry.component);
      for (const auto* edge : cg.callees_of(method)) {
        if (seen.insert(edge->callee).second) {
          queue.push_back(edge->callee);
        }
      }
    }
  }
  std::vector<IccEdge> edges;
  for (const auto& method : app.methods) {
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int index, bool) {
        if (const auto* launch = statement.as<LaunchComponent>()) {
          edges.push_back(
              {{method.name, block.id, index}, launch->component,
               reached_by[method.name]});
        }
      });
    }
  }
  return IccGraph(std::move(edges));
}

namespace {

std::size_t slot(CallbackKind kind) {
  return static_cast<std::size_t>(kind);
}

} // namespace

CallbackOrder::CallbackOrder() = default;

CallbackOrder CallbackOrder::defaults() {
  CallbackOrder order;
  order.add(CallbackKind::OnCreate, CallbackKind::OnStart);
  order.add(CallbackKind::OnStart, CallbackKind::OnResume);
  order.add(CallbackKind::OnResume, CallbackKind::OnClick);
  order.add(CallbackKind::OnResume, CallbackKind::Run);
  order.add(CallbackKind::OnCreate, CallbackKind::OnRequestPermissionsResult);
  return order;
}

void CallbackOrder::add(CallbackKind a, CallbackKind b) {
  if (a == b || precedes(b, a)) {
    throw std::invalid_argument(
        "callback order " + std::string(to_string(a)) + " < " +
        std::string(to_string(b)) + " creates a cycle");
  }
  // Everything at or before a now precedes everything at or after b.
  for (std::size_t x = 0; x < kKinds; ++x) {
    if (x != slot(a) && !before_[x][slot(a)]) {
      continue;
    }
    for (std::size_t y = 0; y < kKinds; ++y) {
      if (y == slot(b) || before_[slot(b)][y]) {
        before_[x][y] = true;
      }
    }
  }
}

bool CallbackOrder::precedes(CallbackKind a, CallbackKind b) const {
  return before_[slot(a)][slot(b)];
}

std::vector<std::pair<CallbackKind, CallbackKind>> CallbackOrder::pairs() const {
  std::vector<std::pair<CallbackKind, CallbackKind>> out;
  for (auto a : kAllCallbackKinds) {
    for (auto b : kAllCallbackKinds) {
      if (precedes(a, b)) {
        out.emplace_back(a, b);
      }
    }
  }
  return out;
}

bool callback_precedes(
    CallbackKind a,
    CallbackKind b,
    const CallbackOrder& order) {
  return order.precedes(a, b);
}

namespace {

std::string dot_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + "\"";
}

} // namespace

std::string graphs_to_dot(
    const AppModel& app,
    const CallGraph& cg,
    const IccGraph& icc) {
  std::ostringstream out;
  out << "digraph " << dot_quote(app.manifest.package_id) << " {\n";
  for (const auto& component : app.components) {
    out << "  " << dot_quote("component:" + component.name)
        << " [shape=box, label=" << dot_quote(component.name) << "];\n";
  }
  for (const auto& method : app.methods) {
    out << "  " << dot_quote(method.name) << ";\n";
  }
  for (const auto& entry : cg.entries()) {
    out << "  " << dot_quote("component:" + entry.component) << " -> "
        << dot_quote(entry.method) << " [label="
        << dot_quote(std::string(to_string(entry.kind))) << "];\n";
  }
  for (const auto& edge : cg.edges()) {
    out << "  " << dot_quote(edge.caller) << " -> " << dot_quote(edge.callee)
        << " [label=" << dot_quote(edge.site.str()) << "];\n";
  }
  for (const auto& edge : icc.edges()) {
    out << "  " << dot_quote(edge.site.method) << " -> "
        << dot_quote("component:" + edge.target)
        << " [style=dashed, label=" << dot_quote("launch " + edge.site.str())
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace arpcheck
