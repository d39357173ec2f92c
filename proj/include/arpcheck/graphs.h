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

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <arpcheck/air.h>

namespace arpcheck {

/// A callback binding through which the framework enters the app.
struct EntryPoint {
  std::string component;
  CallbackKind kind = CallbackKind::OnCreate;
  std::string method;

  std::string str() const;
  auto operator<=>(const EntryPoint&) const = default;
};

struct CallEdge {
  std::string caller;
  SiteId site;
  std::string callee;

  auto operator<=>(const CallEdge&) const = default;
};

class CallGraph {
 public:
  CallGraph(std::vector<CallEdge> edges, std::vector<EntryPoint> entries);

  const std::vector<CallEdge>& edges() const {
    return edges_;
  }
  const std::vector<EntryPoint>& entries() const {
    return entries_;
  }
  /// Edges whose callee is `method`, in site order.
  std::vector<const CallEdge*> callers_of(const std::string& method) const;
  std::vector<const CallEdge*> callees_of(const std::string& method) const;
  std::vector<EntryPoint> entries_of(const std::string& method) const;
  /// Methods reachable from any entry, entries included.
  std::set<std::string> reachable_methods() const;

 private:
  std::vector<CallEdge> edges_;
  std::vector<EntryPoint> entries_;
};

CallGraph build_call_graph(const AppModel& app);

/// Strongly connected components of the call graph over `methods`, callers
/// before callees (reverse topological order of the condensation).
std::vector<std::vector<std::string>> call_graph_sccs(
    const CallGraph& cg,
    const std::vector<std::string>& methods);

struct IcfgNode {
  enum class Kind { Entry, Statement, Terminator, Exit };

  Kind kind = Kind::Statement;
  std::string method;
  std::string block;
  /// Statement index within the block; -1 for the other kinds.
  int index = -1;
};

enum class IcfgEdgeKind { Normal, Call, Return, CallToReturn };

struct IcfgEdge {
  int from = 0;
  int to = 0;
  IcfgEdgeKind kind = IcfgEdgeKind::Normal;
};

/// Per-method CFGs at statement granularity, joined at CallMethod sites.
/// Dangerous, CHECK and REQUEST calls are leaves.
class Icfg {
 public:
  const std::vector<IcfgNode>& nodes() const {
    return nodes_;
  }
  const std::vector<IcfgEdge>& edges() const {
    return edges_;
  }
  const std::vector<int>& out_edges(int node) const {
    return out_[node];
  }
  const std::vector<int>& in_edges(int node) const {
    return in_[node];
  }
  int entry_of(const std::string& method) const;
  int exit_of(const std::string& method) const;
  std::optional<int> node_of(const SiteId& site) const;
  /// Nodes of `method` in reverse post-order from its entry; unreachable
  /// nodes are appended at the end.
  std::vector<int> method_order(const std::string& method) const;

 private:
  friend Icfg build_icfg(const AppModel& app, const CallGraph& cg);

  int add_node(IcfgNode node);
  void add_edge(int from, int to, IcfgEdgeKind kind);

  std::vector<IcfgNode> nodes_;
  std::vector<IcfgEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::map<std::string, std::pair<int, int>> bounds_;
  std::map<SiteId, int> sites_;
};

Icfg build_icfg(const AppModel& app, const CallGraph& cg);

/// One LaunchComponent statement. `sources` are the components whose
/// entries reach the launching method; empty when nothing reaches it.
struct IccEdge {
  SiteId site;
  std::string target;
  std::set<std::string> sources;

  bool operator==(const IccEdge&) const = default;
};

class IccGraph {
 public:
  explicit IccGraph(std::vector<IccEdge> edges) : edges_(std::move(edges)) {}

  const std::vector<IccEdge>& edges() const {
    return edges_;
  }
  bool connects(const std::string& from, const std::string& to) const;
  std::vector<const IccEdge*> launches_of(const std::string& target) const;

 private:
  std::vector<IccEdge> edges_;
};

IccGraph build_icc(const AppModel& app, const CallGraph& cg);

/// Strict partial order over callback kinds: a ≺ b when a must complete
/// before b can first run.
class CallbackOrder {
 public:
  /// onCreate ≺ onStart ≺ onResume ≺ {onClick, run}; onCreate ≺
  /// onRequestPermissionsResult.
  static CallbackOrder defaults();

  /// Empty order; nothing precedes anything.
  CallbackOrder();

  /// Adds a ≺ b and closes transitively. Throws std::invalid_argument when
  /// the pair would create a cycle.
  void add(CallbackKind a, CallbackKind b);
  bool precedes(CallbackKind a, CallbackKind b) const;
  std::vector<std::pair<CallbackKind, CallbackKind>> pairs() const;

 private:
  static constexpr std::size_t kKinds = std::size(kAllCallbackKinds);
  std::array<std::array<bool, kKinds>, kKinds> before_{};
};

bool callback_precedes(
    CallbackKind a,
    CallbackKind b,
    const CallbackOrder& order = CallbackOrder::defaults());

/// Immediate dominators of a graph given as successor lists. Unreachable
/// nodes get -1, the entry maps to itself.
std::vector<int> immediate_dominators(
    const std::vector<std::vector<int>>& successors,
    int entry);

/// Dominance over the basic blocks of one method.
class DominatorTree {
 public:
  explicit DominatorTree(const Method& method);

  const std::string& entry() const {
    return ids_.front();
  }
  bool is_reachable(const std::string& block) const;
  /// Immediate dominator; nullopt for the entry and unreachable blocks.
  std::optional<std::string> idom(const std::string& block) const;
  /// Reflexive. False when either block is unreachable.
  bool dominates(const std::string& a, const std::string& b) const;
  /// All dominators of `block`, itself included; empty when unreachable.
  std::set<std::string> dominators_of(const std::string& block) const;

  /// True when every path from the entry to `target` traverses the CFG edge
  /// from -> to. Requires `to` to be a successor of `from` along a single
  /// edge; a branch whose two targets coincide never qualifies.
  bool edge_dominates(
      const std::string& from,
      const std::string& to,
      const std::string& target) const;

 private:
  int index_of(const std::string& block) const;

  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> preds_;
  std::vector<int> idom_;
  std::vector<int> depth_;
};

/// Graphviz rendering of the call graph and ICC links.
std::string graphs_to_dot(
    const AppModel& app,
    const CallGraph& cg,
    const IccGraph& icc);

} // namespace arpcheck
