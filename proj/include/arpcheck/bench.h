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
#include <string>
#include <vector>

#include <arpcheck/config.h>
#include <arpcheck/detector.h>
#include <arpcheck/permspec.h>

namespace arpcheck {

struct Metrics {
  int tp = 0;
  int tn = 0;
  int fp = 0;
  int fn = 0;

  /// tp / (tp + fp); nullopt when undefined.
  std::optional<double> precision() const;
  /// tp / (tp + fn).
  std::optional<double> recall() const;
  /// Harmonic mean of precision and recall.
  std::optional<double> f1() const;

  Metrics& operator+=(const Metrics& other);
  bool operator==(const Metrics&) const = default;
};

/// "89.66", or "N/A" when undefined.
std::string format_percent(std::optional<double> ratio);

struct CorpusEntry {
  std::string name;
  std::string buggy_path;
  std::string patched_path;
  BugKind expected = BugKind::Type1;
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
};

/// Manifest JSON: {"entries": [{"name", "buggy", "patched", "expected":
/// "type1"|"type2"}]}. Relative paths resolve against the manifest's
/// directory. Throws std::invalid_argument.
CorpusManifest load_manifest(const std::string& path);

struct EntryOutcome {
  std::string name;
  BugKind expected = BugKind::Type1;
  bool buggy_flagged = false;
  bool patched_flagged = false;
  /// Set when either version failed to parse or analyze.
  std::optional<std::string> failure;
};

struct BenchResult {
  Metrics type1;
  Metrics type2;
  int failed_type1 = 0;
  int failed_type2 = 0;
  std::vector<EntryOutcome> outcomes;
};

/// Buggy versions count as TP only when a finding of the expected kind
/// appears (any kind when `lenient`). Any finding on a patched version
/// counts as FP for the expected kind.
BenchResult run_bench(
    const CorpusManifest& manifest,
    const MappingStore& store,
    const Config& config,
    bool lenient = false);

/// Table with one column per bug type and rows TP, TN, FP, FN, Failed,
/// P (%), R (%), F1 (%).
std::string format_bench_table(const BenchResult& result);

} // namespace arpcheck
