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

// Corpus access and the guard-inserting fixture transformer.

#include <string>
#include <vector>

#include <arpcheck/air.h>
#include <arpcheck/detector.h>
#include <arpcheck/permspec.h>

namespace arptest {

/// Root of the source tree, baked in at build time.
std::string source_path(const std::string& relative);

/// The curated mapping store of the corpus.
const arpcheck::MappingStore& corpus_store();

arpcheck::AppModel load_app(const std::string& relative);

struct CorpusPair {
  std::string name;
  std::string buggy;
  std::string patched;
  arpcheck::BugKind expected;
};

/// Pairs listed in the corpus manifest, paths relative to the source root.
std::vector<CorpusPair> corpus_pairs();

/// A test placed in front of a statement: either a CHECK of `permission`
/// followed by a check_granted branch, or an sdk branch.
struct Guard {
  bool is_check = true;
  std::string permission;
  arpcheck::RvCond cond;

  static Guard check(std::string permission);
  static Guard sdk(arpcheck::CmpOp op, int value);
};

/// Splits the block holding `site` so that the site and everything after it
/// run only through the true edge of every guard, in order. False edges
/// return. The site must be a top-level statement of its block.
arpcheck::AppModel guard_site(
    const arpcheck::AppModel& app,
    const arpcheck::SiteId& site,
    const std::vector<Guard>& guards);

/// Guards that remove `report`: checks of the permissions the target level
/// requires for Type-1, sdk exclusions of the flagged levels for Type-2.
std::vector<Guard> guards_for(
    const arpcheck::BugReport& report,
    const arpcheck::AppModel& app,
    const arpcheck::MappingStore& store);

struct SuppressionRun {
  bool cleared = false;
  /// Reports of the kind before each transformation step.
  std::vector<int> counts;
  std::string detail;
};

/// Guards flagged sites one at a time until no visible report of `kind`
/// remains. Stops early when a step fails to lower the count.
SuppressionRun suppress_all(
    const arpcheck::AppModel& app,
    const arpcheck::MappingStore& store,
    arpcheck::BugKind kind);

} // namespace arptest
