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

#include "fixtures.h"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include <arpcheck/bench.h>

#ifndef ARPCHECK_SOURCE_DIR
#error "ARPCHECK_SOURCE_DIR must be defined"
#endif

namespace arptest {

using namespace arpcheck;

std::string source_path(const std::string& relative) {
  return (std::filesystem::path(ARPCHECK_SOURCE_DIR) / relative).string();
}

const MappingStore& corpus_store() {
  static const MappingStore store =
      load_mapping_store(source_path("corpus/mappings"));
  return store;
}

AppModel load_app(const std::string& relative) {
  return parse_app(read_file(source_path(relative)));
}

std::vector<CorpusPair> corpus_pairs() {
  auto manifest = load_manifest(source_path("corpus/manifest.json"));
  const auto root = std::filesystem::path(ARPCHECK_SOURCE_DIR);
  std::vector<CorpusPair> pairs;
  for (const auto& entry : manifest.entries) {
    pairs.push_back(
        {entry.name,
         std::filesystem::relative(entry.buggy_path, root).string(),
         std::filesystem::relative(entry.patched_path, root).string(),
         entry.expected});
  }
  return pairs;
}

Guard Guard::check(std::string permission) {
  Guard guard;
  guard.is_check = true;
  guard.permission = std::move(permission);
  return guard;
}

Guard Guard::sdk(CmpOp op, int value) {
  Guard guard;
  guard.is_check = false;
  guard.cond = RvCond{op, value};
  return guard;
}

namespace {

/// Top-level position of the statement with pre-order index `index`.
std::size_t top_level_position(const BasicBlock& block, int index) {
  int seen = 0;
  for (std::size_t i = 0; i < block.statements.size(); ++i) {
    if (seen == index) {
      return i;
    }
    int size = 0;
    BasicBlock one;
    one.statements = {block.statements[i]};
    for_each_statement(one, [&](const Statement&, int, bool) { ++size; });
    seen += size;
  }
  throw std::invalid_argument("site is not a top-level statement");
}

std::string fresh_id(const Method& method, const std::string& base) {
  std::string id = base;
  for (int n = 1; method.find_block(id) != nullptr; ++n) {
    id = base + std::to_string(n);
  }
  return id;
}

} // namespace

AppModel guard_site(
    const AppModel& app,
    const SiteId& site,
    const std::vector<Guard>& guards) {
  AppModel out = app;
  auto method_it = std::find_if(out.methods.begin(), out.methods.end(),
                                [&](const Method& m) { return m.name == site.method; });
  if (method_it == out.methods.end()) {
    throw std::invalid_argument("no method " + site.method);
  }
  Method& method = *method_it;
  auto block_it = std::find_if(method.blocks.begin(), method.blocks.end(),
                               [&](const BasicBlock& b) { return b.id == site.block; });
  if (block_it == method.blocks.end() || guards.empty()) {
    throw std::invalid_argument("bad site or no guards");
  }
  const std::size_t position = top_level_position(*block_it, site.index);

  BasicBlock head;
  head.id = block_it->id;
  head.statements.assign(block_it->statements.begin(),
                         block_it->statements.begin() + position);
  BasicBlock tail;
  tail.id = fresh_id(method, site.block + "_guarded");
  tail.statements.assign(block_it->statements.begin() + position,
                         block_it->statements.end());
  tail.terminator = block_it->terminator;

  bool tail_needs_check =
      std::holds_alternative<Branch>(tail.terminator) &&
      std::holds_alternative<CheckResultCond>(std::get<Branch>(tail.terminator).cond) &&
      std::none_of(tail.statements.begin(), tail.statements.end(),
                   [](const Statement& s) { return s.as<CallCheck>() != nullptr; });
  if (tail_needs_check) {
    throw std::invalid_argument("site sits between a check and its branch");
  }

  BasicBlock deny;
  deny.id = fresh_id(method, site.block + "_denied");
  deny.terminator = Return{};

  std::vector<BasicBlock> chain{std::move(head)};
  for (std::size_t i = 0; i < guards.size(); ++i) {
    const Guard& guard = guards[i];
    std::string next = i + 1 == guards.size()
        ? tail.id
        : fresh_id(method, site.block + "_guard" + std::to_string(i + 1));
    BasicBlock& current = chain.back();
    if (guard.is_check) {
      current.statements.push_back({CallCheck{Operand::literal(guard.permission)}});
      current.terminator = Branch{CheckResultCond{}, next, deny.id};
    } else {
      current.terminator = Branch{guard.cond, next, deny.id};
    }
    if (i + 1 < guards.size()) {
      BasicBlock link;
      link.id = next;
      chain.push_back(std::move(link));
    }
  }

  std::size_t at = block_it - method.blocks.begin();
  method.blocks.erase(method.blocks.begin() + at);
  method.blocks.insert(method.blocks.begin() + at, chain.begin(), chain.end());
  method.blocks.push_back(std::move(tail));
  method.blocks.push_back(std::move(deny));
  return out;
}

std::vector<Guard> guards_for(
    const BugReport& report,
    const AppModel& app,
    const MappingStore& store) {
  std::vector<Guard> guards;
  if (report.kind == BugKind::Type2) {
    for (int level : report.levels.to_vector()) {
      guards.push_back(Guard::sdk(CmpOp::Ne, level));
    }
    return guards;
  }
  const int target = app.manifest.target_sdk;
  auto requirement = lookup(store, report.api, target);
  if (!requirement) {
    throw std::logic_error("type-1 report without a requirement: " + report.api);
  }
  auto need = permission_need(*requirement, store.at(target));
  if (need.kind == PermissionNeed::Kind::AnyOf) {
    guards.push_back(Guard::check(*need.dangerous.begin()));
  } else {
    for (const auto& permission : need.dangerous) {
      guards.push_back(Guard::check(permission));
    }
  }
  return guards;
}

SuppressionRun suppress_all(
    const AppModel& app,
    const MappingStore& store,
    BugKind kind) {
  SuppressionRun run;
  AppModel current = app;
  auto count_of = [&](const AnalysisResult& result, const BugReport** first) {
    int count = 0;
    for (const auto& report : result.reports) {
      if (report.kind == kind && !report.suppressed_by) {
        if (count == 0 && first != nullptr) {
          *first = &report;
        }
        ++count;
      }
    }
    return count;
  };
  for (int step = 0; step < 16; ++step) {
    auto errors = validate_app(current, kDefaultLav);
    if (!errors.empty()) {
      run.detail = "transformed app is invalid: " + errors.front().str();
      return run;
    }
    auto result = analyze(current, store);
    const BugReport* first = nullptr;
    int count = count_of(result, &first);
    if (!run.counts.empty() && count >= run.counts.back()) {
      run.detail = "guarding did not lower the report count";
      run.counts.push_back(count);
      return run;
    }
    run.counts.push_back(count);
    if (count == 0) {
      run.cleared = true;
      return run;
    }
    current = guard_site(current, first->context.site(), guards_for(*first, current, store));
  }
  run.detail = "too many steps";
  return run;
}

} // namespace arptest
