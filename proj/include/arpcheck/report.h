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

#include <string>
#include <string_view>

#include <arpcheck/dataflow.h>
#include <arpcheck/detector.h>
#include <arpcheck/permspec.h>

namespace arpcheck {

/// Findings as JSON with sorted keys:
/// {"app", "findings": [{"kind", "api", "component", "entry", "path",
/// "levels", "evidence", "suppressed_by", "matched_checks"}]}.
std::string report_to_json(const AnalysisResult& result, bool verbose);

/// Human-readable findings, notes and diagnostics.
std::string report_to_text(const AnalysisResult& result, bool verbose);

/// Parses report JSON and serializes it again. Throws std::invalid_argument
/// on malformed input or a schema mismatch.
std::string normalize_report_json(std::string_view text);

std::string evolution_to_json(const EvolutionReport& report, int from, int to);
std::string evolution_to_text(const EvolutionReport& report, int from, int to);

/// Per-site resolved permission sets.
std::string sites_to_json(const SiteResolution& resolution, const AppModel& app);
std::string contexts_to_json(const std::vector<CallingContext>& contexts);

} // namespace arpcheck
