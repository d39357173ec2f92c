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
#include <stdexcept>

namespace arpcheck {

std::vector<int> immediate_dominators(
    const std::vector<std::vector<int>>& successors,
    int entry) {
  const int n = static_cast<int>(successors.size());
  std::vector<int> idom(n, -1);
  if (entry < 0 || entry >= n) {
    return idom;
  }

  // Post-order numbering by iterative DFS.
  std::vector<int> order;
  std::vector<int> number(n, -1);
  std::vector<bool> seen(n, false);
  std::vector<std::pair<int, std::size_t>> stack{{entry, 0}};
  seen[entry] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < successors[node].size()) {
      int succ = successors[node][next++];
      if (!seen[succ]) {
        seen[succ] = true;
        stack.push_back({succ, 0});
      }
    } else {
      number[node] = static_cast<int>(order.size());
      order.push_back(node);
      stack.pop_back();
    }
  }

  std::vector<std::vector<int>> preds(n);
  for (int node = 0; node < n; ++node) {
    if (!seen[node]) {
      continue;
    }
    for (int succ : successors[node]) {
      preds[succ].push_back(node);
    }
  }

  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (number[a] < number[b]) {
        a = idom[a];
      }
      while (number[b] < number[a]) {
        b = idom[b];
      }
    }
    return a;
  };

  idom[entry] = entry;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int node = *it;
      if (node == entry) {
        continue;
      }
      int candidate = -1;
      for (int pred : preds[node]) {
        if (idom[pred] == -1) {
          continue;
        }
        candidate = candidate == -1 ? pred : intersect(pred, candidate);
      }
      if (candidate != idom[node]) {
        idom[node] = candidate;
        changed = true;
      }
    }
  }
  return idom;
}

DominatorTree::DominatorTree(const Method& method) {
  if (method.blocks.empty()) {
    throw std::invalid_argument("method '" + method.name + "' has no blocks");
  }
  for (const auto& block : method.blocks) {
    index_[block.id] = static_cast<int>(ids_.size());
    ids_.push_back(block.id);
  }
  std::vector<std::vector<int>> successors(ids_.size());
  preds_.resize(ids_.size());
  for (const auto& block : method.blocks) {
    int from = index_.at(block.id);
    for (const auto& succ : block.successors()) {
      int to = index_.at(succ);
      successors[from].push_back(to);
      preds_[to].push_back(from);
    }
  }
  idom_ = immediate_dominators(successors, 0);
  depth_.assign(ids_.size(), -1);
  // Blocks are not in dominance order, so resolve depths lazily.
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::vector<int> chain;
    int node = static_cast<int>(i);
    while (node != -1 && depth_[node] == -1 && idom_[node] != -1) {
      chain.push_back(node);
      if (idom_[node] == node) {
        depth_[node] = 0;
        chain.pop_back();
        break;
      }
      node = idom_[node];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth_[*it] = depth_[idom_[*it]] + 1;
    }
  }
}

int DominatorTree::index_of(const std::string& block) const {
  auto found = index_.find(block);
  return found == index_.end() ? -1 : found->second;
}

bool DominatorTree::is_reachable(const std::string& block) const {
  int node = index_of(block);
  return node != -1 && idom_[node] != -1;
}

std::optional<std::string> DominatorTree::idom(const std::string& block) const {
  int node = index_of(block);
  if (node <= 0 || idom_[node] == -1) {
    return std::nullopt;
  }
  return ids_[idom_[node]];
}

bool DominatorTree::dominates(const std::string& a, const std::string& b) const {
  int x = index_of(a);
  int y = index_of(b);
  if (x == -1 || y == -1 || idom_[x] == -1 || idom_[y] == -1) {
    return false;
  }
  while (depth_[y] > depth_[x]) {
    y = idom_[y];
  }
  return x == y;
}

std::set<std::string> DominatorTree::dominators_of(
    const std::string& block) const {
  std::set<std::string> out;
  int node = index_of(block);
  if (node == -1 || idom_[node] == -1) {
    return out;
  }
  while (true) {
    out.insert(ids_[node]);
    if (idom_[node] == node) {
      break;
    }
    node = idom_[node];
  }
  return out;
}

bool DominatorTree::edge_dominates(
    const std::string& from,
    const std::string& to,
    const std::string& target) const {
  int source = index_of(from);
  int head = index_of(to);
  if (source == -1 || head <= 0 || !is_reachable(from) ||
      !dominates(to, target)) {
    return false;
  }
  int via_source = 0;
  for (int pred : preds_[head]) {
    if (pred == source) {
      ++via_source;
    } else if (idom_[pred] != -1 && !dominates(to, ids_[pred])) {
      // A second way into `to` that does not loop back through it.
      return false;
    }
  }
  return via_source == 1;
}

} // namespace arpcheck
