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

#include <cstdint>
#include <string>
#include <vector>

#include <arpcheck/air.h>

namespace arpcheck {

/// Set of API levels, stored as a bitmask. Levels must be below 64.
class LevelSet {
 public:
  static constexpr int kMaxLevel = 63;

  LevelSet() = default;

  /// Every level in [lo, hi]; empty when lo > hi.
  static LevelSet range(int lo, int hi);
  /// The analysis universe [kMinLevel, lav].
  static LevelSet universe(int lav) {
    return range(kMinLevel, lav);
  }
  /// Levels in [kMinLevel, lav] satisfying `level op value`.
  static LevelSet satisfying(CmpOp op, int value, int lav);

  bool contains(int level) const;
  void insert(int level);
  void erase(int level);
  bool empty() const {
    return bits_ == 0;
  }
  int size() const;

  LevelSet operator&(LevelSet other) const {
    return LevelSet(bits_ & other.bits_);
  }
  LevelSet operator|(LevelSet other) const {
    return LevelSet(bits_ | other.bits_);
  }
  LevelSet& operator&=(LevelSet other) {
    bits_ &= other.bits_;
    return *this;
  }
  LevelSet& operator|=(LevelSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  /// Complement within [kMinLevel, lav].
  LevelSet complement(int lav) const;
  LevelSet without(int level) const;

  std::vector<int> to_vector() const;
  std::string str() const;
  std::uint64_t bits() const {
    return bits_;
  }

  bool operator==(const LevelSet&) const = default;

 private:
  explicit LevelSet(std::uint64_t bits) : bits_(bits) {}

  std::uint64_t bits_ = 0;
};

} // namespace arpcheck
