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

#include <arpcheck/bench.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

namespace arpcheck {

std::optional<double> Metrics::precision() const {
  if (tp + fp == 0) {
    return std::nullopt;
  }
  return static_cast<double>(tp) / (tp + fp);
}

std::optional<double> Metrics::recall() const {
  if (tp + fn == 0) {
    return std::nullopt;
  }
  return static_cast<double>(tp) / (tp + fn);
}

std::optional<double> Metrics::f1() const {
  auto p = precision();
  auto r = recall();
  if (!p || !r || *p + *r == 0.0) {
    return std::nullopt;
  }
  return 2.0 * *p * *r / (*p + *r);
}

Metrics& Metrics::operator+=(const Metrics& other) {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

std::string format_percent(std::optional<double> ratio) {
  if (!ratio) {
    return "N/A";
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", *ratio * 100.0);
  return buffer;
}

CorpusManifest load_manifest(const std::string& path) {
  namespace fs = std::filesystem;
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& error) {
    throw std::invalid_argument("manifest " + path + ": " + error.what());
  } catch (const std::runtime_error& error) {
    throw std::invalid_argument(error.what());
  }
  auto base = fs::path(path).parent_path();
  CorpusManifest manifest;
  std::set<std::string> names;
  try {
    const auto& entries = root.at("entries");
    if (!entries.is_array()) {
      throw std::invalid_argument("manifest " + path + ": 'entries' must be an array");
    }
    for (const auto& item : entries) {
      CorpusEntry entry;
      entry.name = item.at("name").get<std::string>();
      entry.buggy_path = (base / item.at("buggy").get<std::string>()).string();
      entry.patched_path = (base / item.at("patched").get<std::string>()).string();
      auto expected = item.at("expected").get<std::string>();
      if (expected == "type1") {
        entry.expected = BugKind::Type1;
      } else if (expected == "type2") {
        entry.expected = BugKind::Type2;
      } else {
        throw std::invalid_argument(
            "manifest entry " + entry.name + ": unknown kind '" + expected + "'");
      }
      if (!names.insert(entry.name).second) {
        throw std::invalid_argument("manifest: duplicate entry " + entry.name);
      }
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& error) {
    throw std::invalid_argument("manifest " + path + ": " + error.what());
  }
  return manifest;
}

namespace {

bool flagged(
    const std::string& path,
    const MappingStore& store,
    const Config& config,
    std::optional<BugKind> kind) {
  auto app = parse_app(read_file(path), config.lav);
  auto result = analyze(app, store, config);
  for (const auto& report : visible_reports(result, false)) {
    if (!kind || report.kind == *kind) {
      return true;
    }
  }
  return false;
}

} // namespace

BenchResult run_bench(
    const CorpusManifest& manifest,
    const MappingStore& store,
    const Config& config,
    bool lenient) {
  BenchResult result;
  for (const auto& entry : manifest.entries) {
    EntryOutcome outcome;
    outcome.name = entry.name;
    outcome.expected = entry.expected;
    try {
      std::optional<BugKind> wanted;
      if (!lenient) {
        wanted = entry.expected;
      }
      outcome.buggy_flagged = flagged(entry.buggy_path, store, config, wanted);
      outcome.patched_flagged =
          flagged(entry.patched_path, store, config, std::nullopt);
    } catch (const std::exception& error) {
      outcome.failure = error.what();
    }
    auto& metrics = entry.expected == BugKind::Type1 ? result.type1 : result.type2;
    if (outcome.failure) {
      ++(entry.expected == BugKind::Type1 ? result.failed_type1
                                          : result.failed_type2);
    } else {
      ++(outcome.buggy_flagged ? metrics.tp : metrics.fn);
      ++(outcome.patched_flagged ? metrics.fp : metrics.tn);
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

std::string format_bench_table(const BenchResult& result) {
  std::ostringstream out;
  char line[96];
  auto row = [&](const char* label, const std::string& a, const std::string& b) {
    std::snprintf(line, sizeof(line), "%-8s %10s %10s\n", label, a.c_str(), b.c_str());
    out << line;
  };
  row("", "Type-1", "Type-2");
  row("TP", std::to_string(result.type1.tp), std::to_string(result.type2.tp));
  row("TN", std::to_string(result.type1.tn), std::to_string(result.type2.tn));
  row("FP", std::to_string(result.type1.fp), std::to_string(result.type2.fp));
  row("FN", std::to_string(result.type1.fn), std::to_string(result.type2.fn));
  row("Failed", std::to_string(result.failed_type1),
      std::to_string(result.failed_type2));
  row("P (%)", format_percent(result.type1.precision()),
      format_percent(result.type2.precision()));
  row("R (%)", format_percent(result.type1.recall()),
      format_percent(result.type2.recall()));
  row("F1 (%)", format_percent(result.type1.f1()),
      format_percent(result.type2.f1()));
  return out.str();
}

} // namespace arpcheck
