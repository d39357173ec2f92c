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

#include <gtest/gtest.h>

#include <algorithm>

#include <arpcheck/graphs.h>

#include "../support/fixtures.h"
#include "../support/generators.h"
#include "../support/oracles.h"

using namespace arpcheck;

namespace {

AppModel app_of(const std::string& methods, const std::string& components =
                                                  "activity Main {\n  onCreate = main\n}\n") {
  return parse_app("app com.example.g targetSdk 28\n" + components + methods);
}

Method method_of(const std::string& text) {
  auto app = app_of(text);
  return app.methods.front();
}

} // namespace

TEST(CallGraph, LinearChain) {
  auto app = app_of(
      "method main() {\n  block entry:\n    call helper()\n    return\n}\n"
      "method helper() {\n  block entry:\n    call helper2()\n    return\n}\n"
      "method helper2() {\n  block entry:\n    return\n}\n");
  auto cg = build_call_graph(app);
  EXPECT_EQ(cg.edges().size(), 2u);
  ASSERT_EQ(cg.entries().size(), 1u);
  EXPECT_EQ(cg.entries()[0].str(), "Main.onCreate=main");
  EXPECT_EQ(cg.reachable_methods(), (std::set<std::string>{"main", "helper", "helper2"}));
  ASSERT_EQ(cg.callers_of("helper2").size(), 1u);
  EXPECT_EQ(cg.callers_of("helper2")[0]->caller, "helper");
}

TEST(CallGraph, RecursionTerminates) {
  auto app = app_of(
      "method main() {\n  block entry:\n    call main()\n    return\n}\n");
  auto cg = build_call_graph(app);
  ASSERT_EQ(cg.edges().size(), 1u);
  EXPECT_EQ(cg.edges()[0].caller, "main");
  EXPECT_EQ(cg.edges()[0].callee, "main");
}

TEST(CallGraph, EdgesAndEntriesMatchAStatementScan) {
  arptest::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto app = arptest::random_call_app(rng, 8);
    auto cg = build_call_graph(app);
    std::set<CallEdge> edges(cg.edges().begin(), cg.edges().end());
    EXPECT_EQ(edges.size(), cg.edges().size());
    EXPECT_EQ(edges, arptest::scan_call_edges(app));
    std::set<EntryPoint> entries(cg.entries().begin(), cg.entries().end());
    std::set<EntryPoint> expected;
    for (const auto& component : app.components) {
      for (const auto& [kind, method] : component.callbacks) {
        expected.insert({component.name, kind, method});
      }
    }
    EXPECT_EQ(entries, expected);
  }
}

TEST(CallGraph, SccsListCallersFirst) {
  arptest::Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    auto app = arptest::random_call_app(rng, 8);
    auto cg = build_call_graph(app);
    std::vector<std::string> names;
    for (const auto& method : app.methods) {
      names.push_back(method.name);
    }
    auto sccs = call_graph_sccs(cg, names);
    std::map<std::string, std::size_t> position;
    std::size_t covered = 0;
    for (std::size_t k = 0; k < sccs.size(); ++k) {
      for (const auto& name : sccs[k]) {
        position[name] = k;
        ++covered;
      }
    }
    ASSERT_EQ(covered, names.size());
    for (const auto& edge : cg.edges()) {
      EXPECT_LE(position.at(edge.caller), position.at(edge.callee));
    }
  }
}

TEST(Icfg, CallSitesGetCallReturnAndBypassEdges) {
  arptest::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    auto app = arptest::random_call_app(rng, 6);
    auto cg = build_call_graph(app);
    auto icfg = build_icfg(app, cg);
    for (const auto& edge : arptest::scan_call_edges(app)) {
      auto node = icfg.node_of(edge.site);
      ASSERT_TRUE(node);
      int calls = 0;
      int bypass = 0;
      for (int e : icfg.out_edges(*node)) {
        const auto& out = icfg.edges()[e];
        if (out.kind == IcfgEdgeKind::Call) {
          ++calls;
          EXPECT_EQ(out.to, icfg.entry_of(edge.callee));
        }
        bypass += out.kind == IcfgEdgeKind::CallToReturn ? 1 : 0;
      }
      EXPECT_EQ(calls, 1);
      EXPECT_EQ(bypass, 1);
      int returns = 0;
      for (int e : icfg.out_edges(icfg.exit_of(edge.callee))) {
        returns += icfg.edges()[e].kind == IcfgEdgeKind::Return ? 1 : 0;
      }
      EXPECT_GE(returns, 1);
    }
    // API calls are leaves.
    for (const auto& method : app.methods) {
      for (const auto& block : method.blocks) {
        for_each_statement(block, [&](const Statement& statement, int index, bool) {
          if (statement.as<CallMethod>()) {
            return;
          }
          auto node = icfg.node_of({method.name, block.id, index});
          ASSERT_TRUE(node);
          for (int e : icfg.out_edges(*node)) {
            EXPECT_EQ(icfg.edges()[e].kind, IcfgEdgeKind::Normal);
          }
        });
      }
    }
  }
}

TEST(Icc, InterComponentFixtureHasOneLaunch) {
  auto app = arptest::load_app("corpus/apps/unchecked_launch_buggy.air");
  auto icc = build_icc(app, build_call_graph(app));
  ASSERT_EQ(icc.edges().size(), 1u);
  EXPECT_EQ(icc.edges()[0].target, "com.example.mlmanager.SettingsActivity");
  EXPECT_EQ(icc.edges()[0].sources,
            (std::set<std::string>{"com.example.mlmanager.MainActivity"}));
  EXPECT_TRUE(icc.connects("com.example.mlmanager.MainActivity",
                           "com.example.mlmanager.SettingsActivity"));
  EXPECT_FALSE(icc.connects("com.example.mlmanager.SettingsActivity",
                            "com.example.mlmanager.MainActivity"));
  EXPECT_EQ(icc.launches_of("com.example.mlmanager.SettingsActivity").size(), 1u);
}

TEST(Icc, NoLaunchesNoEdges) {
  auto app = arptest::load_app("corpus/apps/sync_check_buggy.air");
  EXPECT_TRUE(build_icc(app, build_call_graph(app)).edges().empty());
}

TEST(Icc, EdgesMatchAStatementScan) {
  arptest::Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    auto app = arptest::random_call_app(rng, 8);
    auto icc = build_icc(app, build_call_graph(app));
    auto edges = icc.edges();
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.site < b.site; });
    EXPECT_EQ(edges, arptest::scan_launches(app));
  }
}

TEST(Dominators, StraightLine) {
  DominatorTree tree(method_of(
      "method main() {\n  block a:\n    goto b\n  block b:\n    goto c\n"
      "  block c:\n    return\n}\n"));
  EXPECT_EQ(tree.idom("c"), "b");
  EXPECT_EQ(tree.idom("b"), "a");
  EXPECT_FALSE(tree.idom("a"));
}

TEST(Dominators, Diamond) {
  DominatorTree tree(method_of(
      "method main() {\n  block a:\n    branch sdk >= 26 b c\n  block b:\n    goto d\n"
      "  block c:\n    goto d\n  block d:\n    return\n}\n"));
  EXPECT_EQ(tree.idom("d"), "a");
  EXPECT_FALSE(tree.dominates("b", "d"));
  EXPECT_TRUE(tree.dominates("a", "d"));
  EXPECT_TRUE(tree.edge_dominates("a", "b", "b"));
  EXPECT_FALSE(tree.edge_dominates("a", "b", "d"));
}

TEST(Dominators, UnreachableBlocksAreExcluded) {
  DominatorTree tree(method_of(
      "method main() {\n  block a:\n    return\n  block lost:\n    goto a\n}\n"));
  EXPECT_FALSE(tree.is_reachable("lost"));
  EXPECT_TRUE(tree.dominators_of("lost").empty());
  EXPECT_FALSE(tree.dominates("lost", "a"));
  EXPECT_FALSE(tree.idom("lost"));
}

TEST(Dominators, EdgeDominanceNeedsASingleEdge) {
  DominatorTree tree(method_of(
      "method main() {\n  block a:\n    branch sdk >= 26 b b\n  block b:\n    return\n}\n"));
  EXPECT_FALSE(tree.edge_dominates("a", "b", "b"));
}

TEST(Dominators, EdgeIntoALoopHeader) {
  // h is reached from a and from its own back edge; the a -> h edge still
  // dominates everything after h.
  DominatorTree tree(method_of(
      "method main() {\n  block a:\n    branch sdk >= 26 h out\n"
      "  block h:\n    branch sdk >= 27 h body\n  block body:\n    return\n"
      "  block out:\n    return\n}\n"));
  EXPECT_TRUE(tree.edge_dominates("a", "h", "body"));
  EXPECT_FALSE(tree.edge_dominates("h", "h", "body"));
}

TEST(Dominators, MatchFixedPointOnRandomGraphs) {
  arptest::Rng rng(25);
  for (int g = 0; g < 500; ++g) {
    auto successors = arptest::random_cfg(rng, 12);
    DominatorTree tree(arptest::method_from_cfg("m", successors));
    auto expected = arptest::fixed_point_dominators(successors, 0);
    for (std::size_t n = 0; n < successors.size(); ++n) {
      std::set<std::string> want;
      for (int d : expected[n]) {
        want.insert("b" + std::to_string(d));
      }
      ASSERT_EQ(tree.dominators_of("b" + std::to_string(n)), want) << "graph " << g;
    }
  }
}

TEST(Dominators, ImmediateDominatorsOnWideGraphs) {
  arptest::Rng rng(26);
  for (int g = 0; g < 300; ++g) {
    int n = rng.uniform(1, 12);
    std::vector<std::vector<int>> successors(n);
    for (auto& out : successors) {
      int degree = rng.uniform(0, 4);
      for (int k = 0; k < degree; ++k) {
        out.push_back(rng.uniform(0, n - 1));
      }
    }
    auto idom = immediate_dominators(successors, 0);
    auto expected = arptest::fixed_point_dominators(successors, 0);
    for (int v = 0; v < n; ++v) {
      if (expected[v].empty()) {
        EXPECT_EQ(idom[v], -1);
        continue;
      }
      // Walking the idom chain visits exactly the dominators.
      std::set<int> chain{v};
      for (int u = v; u != 0; u = idom[u]) {
        chain.insert(idom[u]);
      }
      EXPECT_EQ(chain, expected[v]) << "graph " << g << " node " << v;
    }
  }
}

TEST(Dominators, RelationIsAPartialOrderAndIdomIsClosest) {
  arptest::Rng rng(27);
  for (int g = 0; g < 200; ++g) {
    auto successors = arptest::random_cfg(rng, 10);
    auto method = arptest::method_from_cfg("m", successors);
    DominatorTree tree(method);
    std::vector<std::string> ids;
    for (const auto& block : method.blocks) {
      if (tree.is_reachable(block.id)) {
        ids.push_back(block.id);
      }
    }
    for (const auto& a : ids) {
      EXPECT_TRUE(tree.dominates(a, a));
      for (const auto& b : ids) {
        if (a != b && tree.dominates(a, b)) {
          EXPECT_FALSE(tree.dominates(b, a));
        }
        for (const auto& c : ids) {
          if (tree.dominates(a, b) && tree.dominates(b, c)) {
            EXPECT_TRUE(tree.dominates(a, c));
          }
        }
      }
      auto parent = tree.idom(a);
      if (!parent) {
        EXPECT_EQ(a, tree.entry());
        continue;
      }
      EXPECT_TRUE(tree.dominates(*parent, a));
      for (const auto& d : tree.dominators_of(a)) {
        if (d != a && d != *parent) {
          EXPECT_TRUE(tree.dominates(d, *parent));
        }
      }
    }
  }
}

TEST(CallbackOrder, DefaultTable) {
  EXPECT_TRUE(callback_precedes(CallbackKind::OnCreate, CallbackKind::OnClick));
  EXPECT_TRUE(callback_precedes(CallbackKind::OnResume, CallbackKind::OnClick));
  EXPECT_TRUE(callback_precedes(CallbackKind::OnStart, CallbackKind::Run));
  EXPECT_TRUE(callback_precedes(CallbackKind::OnCreate,
                                CallbackKind::OnRequestPermissionsResult));
  EXPECT_FALSE(callback_precedes(CallbackKind::OnClick, CallbackKind::OnCreate));
  EXPECT_FALSE(callback_precedes(CallbackKind::OnPause, CallbackKind::OnClick));
  EXPECT_FALSE(callback_precedes(CallbackKind::OnResume,
                                 CallbackKind::OnRequestPermissionsResult));
}

TEST(CallbackOrder, IsAStrictPartialOrder) {
  auto order = CallbackOrder::defaults();
  for (auto a : kAllCallbackKinds) {
    EXPECT_FALSE(order.precedes(a, a));
    for (auto b : kAllCallbackKinds) {
      if (order.precedes(a, b)) {
        EXPECT_FALSE(order.precedes(b, a));
      }
      for (auto c : kAllCallbackKinds) {
        if (order.precedes(a, b) && order.precedes(b, c)) {
          EXPECT_TRUE(order.precedes(a, c));
        }
      }
    }
  }
}

TEST(CallbackOrder, CustomTablesCloseAndRejectCycles) {
  CallbackOrder order;
  EXPECT_FALSE(order.precedes(CallbackKind::OnPause, CallbackKind::OnClick));
  order.add(CallbackKind::OnPause, CallbackKind::OnStop);
  order.add(CallbackKind::OnStop, CallbackKind::OnClick);
  EXPECT_TRUE(callback_precedes(CallbackKind::OnPause, CallbackKind::OnClick, order));
  EXPECT_THROW(order.add(CallbackKind::OnClick, CallbackKind::OnPause), std::invalid_argument);
  EXPECT_THROW(order.add(CallbackKind::OnStop, CallbackKind::OnStop), std::invalid_argument);
}

TEST(GraphsDot, MentionsMethodsAndLaunches) {
  auto app = arptest::load_app("corpus/apps/unchecked_launch_buggy.air");
  auto cg = build_call_graph(app);
  auto dot = graphs_to_dot(app, cg, build_icc(app, cg));
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("deleteModels"), std::string::npos);
  EXPECT_NE(dot.find("SettingsActivity"), std::string::npos);
}
