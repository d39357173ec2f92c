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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <arpcheck/air.h>
#include <arpcheck/bench.h>
#include <arpcheck/config.h>
#include <arpcheck/detector.h>
#include <arpcheck/permspec.h>
#include <arpcheck/report.h>

namespace py = pybind11;
using namespace arpcheck;

namespace {

Config config_from(const std::string& text) {
  return text.empty() ? Config{} : parse_config(text);
}

std::string analyze_text(
    const std::string& app_text,
    const std::string& mappings,
    const std::string& config_text,
    bool verbose) {
  auto config = config_from(config_text);
  auto store = load_mapping_store(mappings, config.lav);
  auto app = parse_app(app_text, config.lav);
  return report_to_json(analyze(app, store, config), verbose || config.verbose);
}

std::vector<int> rvs_of_site(
    const std::string& app_text,
    const std::string& site_text,
    int lav) {
  auto app = parse_app(app_text, lav);
  auto site = SiteId::parse(site_text);
  if (!site) {
    throw std::invalid_argument("bad site id '" + site_text + "'");
  }
  // Union over every context that ends at the site.
  auto cg = build_call_graph(app);
  LevelSet levels;
  for (const auto& context : extract_contexts(cg, app).contexts) {
    if (context.site() == *site) {
      levels |= reachable_rvs(context, app, lav);
    }
  }
  return levels.to_vector();
}

} // namespace

PYBIND11_MODULE(_arpcheck, m) {
  m.doc() = "Runtime permission misuse checker for AIR app models";

  py::register_exception<AirError>(m, "AirError", PyExc_ValueError);
  py::register_exception<MappingError>(m, "MappingError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "format_app",
      [](const std::string& text, int lav) {
        return pretty_print(parse_app(text, lav));
      },
      py::arg("text"), py::arg("lav") = kDefaultLav,
      "Parse AIR source and return its canonical text.");
  m.def(
      "analyze", &analyze_text, py::arg("app_text"), py::arg("mappings"),
      py::arg("config_text") = "", py::arg("verbose") = false,
      "Analyze AIR source; returns report JSON.");
  m.def(
      "diff_levels",
      [](const std::string& mappings, int from, int to) {
        auto levels = load_level_files(mappings);
        for (int level : {from, to}) {
          if (!levels.count(level)) {
            throw MappingError("no mapping file for level " + std::to_string(level));
          }
        }
        return evolution_to_json(
            diff_mappings(levels.at(from), levels.at(to)), from, to);
      },
      py::arg("mappings"), py::arg("from_level"), py::arg("to_level"));
  m.def(
      "parse_stubs",
      [](const std::string& text, int level) {
        return level_to_json(parse_stubs(text, level));
      },
      py::arg("text"), py::arg("level"));
  m.def(
      "metrics",
      [](int tp, int tn, int fp, int fn) {
        Metrics metrics{tp, tn, fp, fn};
        return py::make_tuple(metrics.precision(), metrics.recall(), metrics.f1());
      },
      py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"),
      "(precision, recall, f1); None where undefined.");
  m.def(
      "reachable_rvs", &rvs_of_site, py::arg("app_text"), py::arg("site"),
      py::arg("lav") = kDefaultLav,
      "Levels on which a site can run, over all contexts reaching it.");
}
