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

#include <stdexcept>
#include <string>
#include <string_view>

#include <arpcheck/contexts.h>
#include <arpcheck/graphs.h>

namespace arpcheck {

/// Environment variable naming a config file.
inline constexpr const char* kConfigEnv = "ARPCHECK_CONFIG";

/// Analysis parameters.
///
/// File format, one `key = value` per line, `#` comments:
///
///   lav = 30
///   path_bound = 16
///   estimate = over        # or under
///   verbose = false
///   precede = onCreate < onStart
///
/// Any `precede` line replaces the default callback order with the listed
/// pairs (closed transitively).
struct Config {
  int lav = kDefaultLav;
  int path_bound = kDefaultPathBound;
  EstimationMode estimate = EstimationMode::Over;
  bool verbose = false;
  CallbackOrder order = CallbackOrder::defaults();
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Config parse_config(std::string_view text);
Config load_config(const std::string& path);
std::string config_to_string(const Config& config);

} // namespace arpcheck
