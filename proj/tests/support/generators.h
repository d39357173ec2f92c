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

// Seeded random inputs for the property and oracle tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <arpcheck/air.h>
#include <arpcheck/permspec.h>

namespace arptest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  bool chance(double p) {
    return std::bernoulli_distribution(p)(engine_);
  }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform(0, static_cast<int>(items.size()) - 1)];
  }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string> kPermissionPool = {
    "CAMERA", "RECORD_AUDIO", "READ_SMS", "SEND_SMS", "READ_CONTACTS"};

inline constexpr const char* kCameraApi = "android.hardware.Camera.open()";

/// Arbitrary digraph with out-degree at most two; node 0 is the entry.
/// Cycles, self loops and unreachable nodes all occur.
std::vector<std::vector<int>> random_cfg(Rng& rng, int max_nodes);

/// A method whose blocks b0..bN follow `successors`: no successor returns,
/// one jumps, two branch on an sdk test.
arpcheck::Method method_from_cfg(
    const std::string& name,
    const std::vector<std::vector<int>>& successors);

/// Acyclic string-flow program. Its entry `main` defines, redefines,
/// stores and checks string and array variables; with `wrapper` it also
/// passes them to a helper that checks its parameters.
arpcheck::AppModel random_flow_app(Rng& rng, bool wrapper);

/// Structured program whose dangerous call sits under nested and
/// sequential sdk guards, with rejoining diamonds around it. Diamonds never
/// return early. With `two_methods` the guards are split between a caller
/// and the helper holding the dangerous call.
arpcheck::AppModel random_guarded_app(Rng& rng, int lav, bool two_methods);

/// Up to `max_methods` parameterless methods calling each other (recursion
/// included) and holding dangerous, CHECK, REQUEST and launch sites, bound
/// to a few components.
arpcheck::AppModel random_call_app(Rng& rng, int max_methods);

/// Mapping of one level over a small pool of APIs and permissions.
arpcheck::LevelMapping random_level(Rng& rng, int level);

/// A copy of `base` at `level` with a few APIs added, removed or remapped.
arpcheck::LevelMapping mutate_level(
    Rng& rng,
    const arpcheck::LevelMapping& base,
    int level);

/// Levels kMinLevel..lav, each derived from the previous one.
arpcheck::MappingStore random_store(Rng& rng, int lav);

/// API names used by random_level.
std::vector<std::string> api_pool();

} // namespace arptest
