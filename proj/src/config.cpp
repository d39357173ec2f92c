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

#include <arpcheck/config.h>

#include <charconv>
#include <sstream>

namespace arpcheck {

namespace {

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

int parse_int(const std::string& value, int line) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(
        "config line " + std::to_string(line) + ": '" + value +
        "' is not an integer");
  }
  return out;
}

CallbackKind parse_callback(const std::string& text, int line) {
  auto kind = callback_kind_from_string(text);
  if (!kind) {
    throw ConfigError(
        "config line " + std::to_string(line) + ": unknown callback '" + text +
        "'");
  }
  return *kind;
}

} // namespace

Config parse_config(std::string_view text) {
  Config config;
  bool custom_order = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    auto content = trim(std::string_view(raw).substr(0, hash));
    if (content.empty()) {
      continue;
    }
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(
          "config line " + std::to_string(line) + ": expected 'key = value'");
    }
    auto key = trim(std::string_view(content).substr(0, eq));
    auto value = trim(std::string_view(content).substr(eq + 1));
    if (key == "lav") {
      config.lav = parse_int(value, line);
      if (config.lav < kMinLevel || config.lav > 63) {
        throw ConfigError(
            "config line " + std::to_string(line) + ": lav out of range");
      }
    } else if (key == "path_bound") {
      config.path_bound = parse_int(value, line);
      if (config.path_bound < 1) {
        throw ConfigError(
            "config line " + std::to_string(line) + ": path_bound must be >= 1");
      }
    } else if (key == "estimate") {
      auto mode = estimation_mode_from_string(value);
      if (!mode) {
        throw ConfigError(
            "config line " + std::to_string(line) +
            ": estimate must be 'over' or 'under'");
      }
      config.estimate = *mode;
    } else if (key == "verbose") {
      if (value != "true" && value != "false") {
        throw ConfigError(
            "config line " + std::to_string(line) +
            ": verbose must be 'true' or 'false'");
      }
      config.verbose = value == "true";
    } else if (key == "precede") {
      auto lt = value.find('<');
      if (lt == std::string::npos) {
        throw ConfigError(
            "config line " + std::to_string(line) + ": expected 'A < B'");
      }
      if (!custom_order) {
        config.order = CallbackOrder();
        custom_order = true;
      }
      auto a = parse_callback(trim(std::string_view(value).substr(0, lt)), line);
      auto b = parse_callback(trim(std::string_view(value).substr(lt + 1)), line);
      try {
        config.order.add(a, b);
      } catch (const std::invalid_argument& error) {
        throw ConfigError(
            "config line " + std::to_string(line) + ": " + error.what());
      }
    } else {
      throw ConfigError(
          "config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

Config load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& error) {
    throw ConfigError(error.what());
  }
  return parse_config(text);
}

std::string config_to_string(const Config& config) {
  std::ostringstream out;
  out << "lav = " << config.lav << "\n"
      << "path_bound = " << config.path_bound << "\n"
      << "estimate = " << to_string(config.estimate) << "\n"
      << "verbose = " << (config.verbose ? "true" : "false") << "\n";
  for (const auto& [a, b] : config.order.pairs()) {
    out << "precede = " << to_string(a) << " < " << to_string(b) << "\n";
  }
  return out.str();
}

} // namespace arpcheck
