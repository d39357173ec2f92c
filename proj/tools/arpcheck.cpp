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

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <arpcheck/air.h>
#include <arpcheck/bench.h>
#include <arpcheck/config.h>
#include <arpcheck/detector.h>
#include <arpcheck/permspec.h>
#include <arpcheck/report.h>

using namespace arpcheck;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

Config resolve_config(const std::string& path) {
  if (!path.empty()) {
    return load_config(path);
  }
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return Config{};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << text;
}

struct AnalyzeArgs {
  std::string app;
  std::string mappings;
  std::string config;
  std::string estimate;
  std::string dot;
  std::string dump_sites;
  std::string dump_contexts;
  bool json = false;
  bool verbose = false;
};

int run_analyze(const AnalyzeArgs& args) {
  auto config = resolve_config(args.config);
  if (!args.estimate.empty()) {
    config.estimate = *estimation_mode_from_string(args.estimate);
  }
  config.verbose = config.verbose || args.verbose;
  auto store = load_mapping_store(args.mappings, config.lav);
  auto app = parse_app(read_file(args.app), config.lav);

  if (!args.dot.empty() || !args.dump_sites.empty() || !args.dump_contexts.empty()) {
    Analysis analysis(app, config);
    if (!args.dot.empty()) {
      write_file(
          args.dot,
          graphs_to_dot(app, analysis.call_graph(), analysis.icc()));
    }
    if (!args.dump_sites.empty()) {
      write_file(args.dump_sites, sites_to_json(analysis.resolution(), app));
    }
    if (!args.dump_contexts.empty()) {
      write_file(args.dump_contexts, contexts_to_json(analysis.contexts()));
    }
  }

  auto result = analyze(app, store, config);
  if (args.json) {
    std::cout << report_to_json(result, config.verbose);
  } else {
    std::cout << report_to_text(result, config.verbose);
  }
  return visible_reports(result, false).empty() ? kExitClean : kExitFindings;
}

int run_bench_cmd(
    const std::string& manifest_path,
    const std::string& mappings,
    const std::string& config_path,
    bool lenient) {
  auto config = resolve_config(config_path);
  auto store = load_mapping_store(mappings, config.lav);
  auto manifest = load_manifest(manifest_path);
  auto result = run_bench(manifest, store, config, lenient);
  for (const auto& outcome : result.outcomes) {
    std::cout << outcome.name << " (" << to_string(outcome.expected) << "): ";
    if (outcome.failure) {
      std::cout << "failed: " << *outcome.failure << "\n";
      continue;
    }
    std::cout << "buggy " << (outcome.buggy_flagged ? "flagged" : "missed")
              << ", patched " << (outcome.patched_flagged ? "flagged" : "clean")
              << "\n";
  }
  std::cout << "\n" << format_bench_table(result);
  return kExitClean;
}

int run_diff(const std::string& dir, int from, int to, bool json) {
  auto levels = load_level_files(dir);
  for (int level : {from, to}) {
    if (!levels.count(level)) {
      throw MappingError(
          "no mapping file for level " + std::to_string(level) + " in " + dir);
    }
  }
  auto report = diff_mappings(levels.at(from), levels.at(to));
  std::cout << (json ? evolution_to_json(report, from, to)
                     : evolution_to_text(report, from, to));
  return kExitClean;
}

int run_extract(const std::string& stubs, int level, const std::string& out) {
  auto mapping = parse_stubs(read_file(stubs), level);
  write_file(out, level_to_json(mapping));
  std::cout << "wrote " << mapping.apis.size() << " mapped and "
            << mapping.unprotected.size() << " unprotected APIs to " << out
            << "\n";
  return kExitClean;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Runtime permission misuse checker for AIR app models"};
  cli.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = cli.add_subcommand("analyze", "Analyze one AIR app");
  analyze_cmd->add_option("app", analyze_args.app, "AIR file")->required();
  analyze_cmd->add_option("--mappings", analyze_args.mappings, "Mapping directory")
      ->required();
  analyze_cmd->add_flag("--json", analyze_args.json, "Emit JSON");
  analyze_cmd->add_flag(
      "--verbose", analyze_args.verbose, "Include suppressed findings and notes");
  analyze_cmd->add_option("--estimate", analyze_args.estimate, "over or under")
      ->check(CLI::IsMember({"over", "under"}));
  analyze_cmd->add_option("--config", analyze_args.config, "Config file");
  analyze_cmd->add_option("--dot", analyze_args.dot, "Write graphs as Graphviz");
  analyze_cmd->add_option(
      "--dump-sites", analyze_args.dump_sites, "Write resolved permission sites");
  analyze_cmd->add_option(
      "--dump-contexts", analyze_args.dump_contexts, "Write calling contexts");

  std::string bench_manifest;
  std::string bench_mappings;
  std::string bench_config;
  bool lenient = false;
  auto* bench_cmd = cli.add_subcommand(
      "bench",
      "Score a labeled corpus. A buggy version is a TP only with a finding of "
      "the expected type; any finding on a patched version is an FP.");
  bench_cmd->add_option("manifest", bench_manifest, "Corpus manifest")->required();
  bench_cmd->add_option("--mappings", bench_mappings, "Mapping directory")
      ->required();
  bench_cmd->add_option("--config", bench_config, "Config file");
  bench_cmd->add_flag(
      "--lenient", lenient, "Count findings of either type on buggy versions");

  std::string diff_dir;
  int diff_from = 0;
  int diff_to = 0;
  bool diff_json = false;
  auto* diff_cmd = cli.add_subcommand(
      "diff-mappings", "Compare the mappings of two API levels");
  diff_cmd->add_option("dir", diff_dir, "Mapping directory")->required();
  diff_cmd->add_option("from", diff_from, "Older level")->required();
  diff_cmd->add_option("to", diff_to, "Newer level")->required();
  diff_cmd->add_flag("--json", diff_json, "Emit JSON");

  std::string stubs_path;
  std::string stubs_out;
  int stubs_level = 0;
  auto* stubs_cmd = cli.add_subcommand(
      "extract-stubs", "Build a mapping file from annotated stubs");
  stubs_cmd->add_option("stubs", stubs_path, "Stub file")->required();
  stubs_cmd->add_option("--level", stubs_level, "API level")->required();
  stubs_cmd->add_option("--out", stubs_out, "Output JSON")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitError;
  }

  try {
    if (*analyze_cmd) {
      return run_analyze(analyze_args);
    }
    if (*bench_cmd) {
      return run_bench_cmd(bench_manifest, bench_mappings, bench_config, lenient);
    }
    if (*diff_cmd) {
      return run_diff(diff_dir, diff_from, diff_to, diff_json);
    }
    if (*stubs_cmd) {
      return run_extract(stubs_path, stubs_level, stubs_out);
    }
  } catch (const AirError& error) {
    for (const auto& diagnostic : error.diagnostics()) {
      std::cerr << "error: " << diagnostic.str() << "\n";
    }
    return kExitError;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
