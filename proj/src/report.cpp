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

#include <arpcheck/report.h>

#include <sstream>

#include <json.hpp>

namespace arpcheck {

using nlohmann::json;

namespace {

json path_json(const std::vector<SiteId>& path) {
  json out = json::array();
  for (const auto& site : path) {
    out.push_back(site.str());
  }
  return out;
}

json finding_json(const BugReport& report) {
  json matches = json::array();
  for (const auto& match : report.matched_checks) {
    matches.push_back({
        {"kind", std::string(to_string(match.kind))},
        {"component", match.check.entry.component},
        {"entry", std::string(to_string(match.check.entry.kind))},
        {"path", path_json(match.check.path)},
    });
  }
  return {
      {"kind", std::string(to_string(report.kind))},
      {"api", report.api},
      {"component", report.context.entry.component},
      {"entry", std::string(to_string(report.context.entry.kind))},
      {"path", path_json(report.context.path)},
      {"levels", report.levels.to_vector()},
      {"evidence", std::string(to_string(report.evidence))},
      {"suppressed_by",
       report.suppressed_by ? json(std::string(to_string(*report.suppressed_by)))
                            : json(nullptr)},
      {"matched_checks", matches},
  };
}

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw std::invalid_argument("report JSON: " + what);
  }
}

void check_schema(const json& root) {
  require(root.is_object(), "top level must be an object");
  require(root.size() == 2, "expected exactly 'app' and 'findings'");
  require(root.contains("app") && root["app"].is_string(), "'app' must be a string");
  require(
      root.contains("findings") && root["findings"].is_array(),
      "'findings' must be an array");
  for (const auto& finding : root["findings"]) {
    require(finding.is_object(), "finding must be an object");
    for (const char* key : {"kind", "api", "component", "entry", "evidence"}) {
      require(
          finding.contains(key) && finding[key].is_string(),
          std::string("finding field '") + key + "' must be a string");
    }
    require(finding["kind"] == "type1" || finding["kind"] == "type2", "bad kind");
    for (const char* key : {"path", "levels", "matched_checks"}) {
      require(
          finding.contains(key) && finding[key].is_array(),
          std::string("finding field '") + key + "' must be an array");
    }
    for (const auto& level : finding["levels"]) {
      require(level.is_number_integer(), "levels must be integers");
    }
    require(
        finding.contains("suppressed_by") &&
            (finding["suppressed_by"].is_null() ||
             finding["suppressed_by"].is_string()),
        "'suppressed_by' must be a string or null");
  }
}

} // namespace

std::string report_to_json(const AnalysisResult& result, bool verbose) {
  json findings = json::array();
  for (const auto& report : visible_reports(result, verbose)) {
    findings.push_back(finding_json(report));
  }
  json root = {{"app", result.app}, {"findings", findings}};
  return root.dump(2) + "\n";
}

std::string normalize_report_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw std::invalid_argument(std::string("report JSON: ") + error.what());
  }
  check_schema(root);
  return root.dump(2) + "\n";
}

std::string report_to_text(const AnalysisResult& result, bool verbose) {
  std::ostringstream out;
  auto reports = visible_reports(result, verbose);
  out << result.app << ": " << reports.size() << " finding"
      << (reports.size() == 1 ? "" : "s") << "\n";
  for (const auto& report : reports) {
    out << "  [" << to_string(report.kind) << "] " << report.api << "\n"
        << "    evidence: " << to_string(report.evidence) << " on levels "
        << report.levels.str() << "\n"
        << "    entry: " << report.context.entry.str() << "\n"
        << "    path:";
    for (const auto& site : report.context.path) {
      out << " " << site.str();
    }
    out << "\n";
    if (report.suppressed_by) {
      out << "    suppressed by: " << to_string(*report.suppressed_by) << "\n";
    }
    for (const auto& match : report.matched_checks) {
      out << "    nearest check (" << to_string(match.kind)
          << "): " << match.check.site().str() << "\n";
    }
  }
  if (verbose) {
    for (const auto& note : result.notes) {
      out << "  note: " << note << "\n";
    }
  }
  for (const auto& diagnostic : result.diagnostics) {
    out << "  warning: " << diagnostic << "\n";
  }
  return out.str();
}

std::string evolution_to_json(const EvolutionReport& report, int from, int to) {
  json changed = json::object();
  for (const auto& [api, kind] : report.changed) {
    changed[api] = std::string(to_string(kind));
  }
  json root = {
      {"from", from},
      {"to", to},
      {"added", report.added},
      {"deleted", report.deleted},
      {"changed", changed},
  };
  return root.dump(2) + "\n";
}

std::string evolution_to_text(const EvolutionReport& report, int from, int to) {
  std::ostringstream out;
  out << "API level " << from << " -> " << to << ": " << report.added.size()
      << " added, " << report.deleted.size() << " deleted, "
      << report.changed.size() << " changed\n";
  for (const auto& api : report.added) {
    out << "  + " << api << "\n";
  }
  for (const auto& api : report.deleted) {
    out << "  - " << api << "\n";
  }
  for (const auto& [api, kind] : report.changed) {
    out << "  ~ " << api << " [" << to_string(kind) << "]\n";
  }
  return out.str();
}

std::string sites_to_json(const SiteResolution& resolution, const AppModel& app) {
  json out = json::array();
  for (const auto& [site, value] : resolution.sites) {
    auto resolved = resolve_site(resolution, site, app);
    out.push_back({
        {"site", site.str()},
        {"permissions", resolved.permissions},
        {"fallback", resolved.fallback},
    });
  }
  return out.dump(2) + "\n";
}

std::string contexts_to_json(const std::vector<CallingContext>& contexts) {
  json out = json::array();
  for (const auto& context : contexts) {
    out.push_back({
        {"entry", context.entry.str()},
        {"path", path_json(context.path)},
        {"target", context.target},
        {"kind", std::string(to_string(context.target_kind))},
    });
  }
  return out.dump(2) + "\n";
}

} // namespace arpcheck
