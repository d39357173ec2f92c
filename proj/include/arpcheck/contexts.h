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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <arpcheck/air.h>
#include <arpcheck/dataflow.h>
#include <arpcheck/graphs.h>
#include <arpcheck/permspec.h>

namespace arpcheck {

inline constexpr int kDefaultPathBound = 16;

enum class TargetKind { Dangerous, Check, Request, Launch };

std::string_view to_string(TargetKind kind);

/// A call-graph path from an entry callback to a target statement. Every
/// site but the last is a CallMethod whose callee holds the next site.
struct CallingContext {
  EntryPoint entry;
  std::vector<SiteId> path;
  TargetKind target_kind = TargetKind::Dangerous;
  /// API signature for Dangerous, component name for Launch, else empty.
  std::string target;

  const SiteId& site() const {
    return path.back();
  }
  auto operator<=>(const CallingContext&) const = default;
};

struct ContextSet {
  std::vector<CallingContext> contexts;
  /// Paths cut at the length bound before reaching an entry.
  std::vector<std::string> diagnostics;
};

/// Every call-graph path, at most `bound` sites long and never repeating a
/// call edge, from an entry to a dangerous, CHECK, REQUEST or launch site.
ContextSet extract_contexts(
    const CallGraph& cg,
    const AppModel& app,
    int bound = kDefaultPathBound);

enum class EstimationMode { Over, Under };

std::string_view to_string(EstimationMode mode);
std::optional<EstimationMode> estimation_mode_from_string(std::string_view text);

/// Under-estimation keeps contexts whose entry component lives in
/// `package_id` or one of its sub-packages; over-estimation keeps all.
std::vector<CallingContext> filter_app_only(
    const std::vector<CallingContext>& contexts,
    const AppModel& app,
    const std::string& package_id,
    EstimationMode mode);

enum class ManagementKind {
  IntraProcedure,
  InterProcedure,
  InterCallback,
  InterComponent,
};

std::string_view to_string(ManagementKind kind);

/// How a check context relates to a dangerous one. Symmetric in its
/// arguments.
std::optional<ManagementKind> classify(
    const CallingContext& a,
    const CallingContext& b,
    const IccGraph& icc);

struct ContextMatch {
  CallingContext dangerous;
  CallingContext check;
  ManagementKind kind = ManagementKind::IntraProcedure;
  bool permissions_satisfied = false;

  auto operator<=>(const ContextMatch&) const = default;
};

class NoRequirement : public std::runtime_error {
 public:
  NoRequirement(const std::string& api, int level);
};

/// True when a check naming `checked` covers the need on its own.
bool covers(const PermissionNeed& need, const std::set<std::string>& checked);

/// Satisfying CHECK candidates of the closest management kind. Throws
/// NoRequirement when the API has no requirement at `level`.
std::vector<ContextMatch> best_matches(
    const CallingContext& dangerous,
    const std::vector<CallingContext>& candidates,
    const MappingStore& store,
    int level,
    const SiteResolution& resolution,
    const AppModel& app,
    const IccGraph& icc);

} // namespace arpcheck
