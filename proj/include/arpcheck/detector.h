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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <arpcheck/air.h>
#include <arpcheck/config.h>
#include <arpcheck/contexts.h>
#include <arpcheck/dataflow.h>
#include <arpcheck/graphs.h>
#include <arpcheck/levels.h>
#include <arpcheck/permspec.h>

namespace arpcheck {

/// Dominator trees built on first use.
class DominatorCache {
 public:
  explicit DominatorCache(const AppModel& app) : app_(app) {}

  const DominatorTree& of(const std::string& method);

 private:
  const AppModel& app_;
  std::map<std::string, std::unique_ptr<DominatorTree>> trees_;
};

/// Levels on which the context's target site can execute, given the
/// runtime-version branches whose single outgoing edge dominates each site
/// of the path within its method. Empty when a site is unreachable.
LevelSet reachable_rvs(
    const CallingContext& context,
    const AppModel& app,
    int lav,
    DominatorCache& doms);
LevelSet reachable_rvs(const CallingContext& context, const AppModel& app, int lav);

enum class BugKind { Type1, Type2 };

enum class Evidence {
  MissingCheck,
  IncompatibleLevel,
  PermissionChange,
  UnobtainablePermission,
};

enum class Suppression { TryCatch, HandleGuard };

std::string_view to_string(BugKind kind);
std::string_view to_string(Evidence evidence);
std::string_view to_string(Suppression suppression);

struct BugReport {
  BugKind kind = BugKind::Type1;
  CallingContext context;
  std::string api;
  LevelSet levels;
  Evidence evidence = Evidence::MissingCheck;
  std::vector<ContextMatch> matched_checks;
  std::optional<Suppression> suppressed_by;
};

/// Everything the detectors need about one app.
class Analysis {
 public:
  Analysis(const AppModel& app, const Config& config);

  Analysis(const Analysis&) = delete;
  Analysis& operator=(const Analysis&) = delete;

  const AppModel& app() const {
    return app_;
  }
  const Config& config() const {
    return config_;
  }
  const CallGraph& call_graph() const {
    return cg_;
  }
  const Icfg& icfg() const {
    return icfg_;
  }
  const IccGraph& icc() const {
    return icc_;
  }
  const SiteResolution& resolution() const {
    return resolution_;
  }
  /// Contexts kept by the estimation mode, sorted.
  const std::vector<CallingContext>& contexts() const {
    return contexts_;
  }
  const std::vector<std::string>& diagnostics() const {
    return diagnostics_;
  }
  DominatorCache& dominators() const {
    return doms_;
  }

 private:
  const AppModel& app_;
  Config config_;
  CallGraph cg_;
  Icfg icfg_;
  IccGraph icc_;
  SiteResolution resolution_;
  std::vector<CallingContext> contexts_;
  std::vector<std::string> diagnostics_;
  mutable DominatorCache doms_;
};

/// Missing checks on the target SDK level.
std::vector<BugReport> detect_type1(
    const Analysis& analysis,
    const MappingStore& store);

/// Permission mismatches on the other reachable runtime versions.
std::vector<BugReport> detect_type2(
    const Analysis& analysis,
    const MappingStore& store);

struct AnalysisResult {
  std::string app;
  /// Suppressed reports included; see visible_reports.
  std::vector<BugReport> reports;
  /// Informational notes, e.g. rationale (EXPLAIN) calls.
  std::vector<std::string> notes;
  std::vector<std::string> diagnostics;
};

/// Runs every stage; reports come sorted by component, entry method, path,
/// kind and evidence.
AnalysisResult analyze(
    const AppModel& app,
    const MappingStore& store,
    const Config& config = {});

/// Unsuppressed reports, plus suppressed ones when `verbose`.
std::vector<BugReport> visible_reports(const AnalysisResult& result, bool verbose);

} // namespace arpcheck
