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

#include <arpcheck/levels.h>

#include <bit>
#include <stdexcept>

namespace arpcheck {

namespace {

void check_level(int level) {
  if (level < 0 || level > LevelSet::kMaxLevel) {
    throw std::out_of_range("API level " + std::to_string(level));
  }
}

} // namespace

LevelSet LevelSet::range(int lo, int hi) {
  LevelSet set;
  for (int level = lo; level <= hi; ++level) {
    set.insert(level);
  }
  return set;
}

LevelSet LevelSet::satisfying(CmpOp op, int value, int lav) {
  LevelSet set;
  for (int level = kMinLevel; level <= lav; ++level) {
    if (evaluate(op, level, value)) {
      set.insert(level);
    }
  }
  return set;
}

bool LevelSet::contains(int level) const {
  return level >= 0 && level <= kMaxLevel && ((bits_ >> level) & 1U) != 0;
}

void LevelSet::insert(int level) {
  check_level(level);
  bits_ |= std::uint64_t{1} << level;
}

void LevelSet::erase(int level) {
  check_level(level);
  bits_ &= ~(std::uint64_t{1} << level);
}

int LevelSet::size() const {
  return std::popcount(bits_);
}

LevelSet LevelSet::complement(int lav) const {
  return LevelSet(universe(lav).bits_ & ~bits_);
}

LevelSet LevelSet::without(int level) const {
  LevelSet copy = *this;
  copy.erase(level);
  return copy;
}

std::vector<int> LevelSet::to_vector() const {
  std::vector<int> levels;
  for (int level = 0; level <= kMaxLevel; ++level) {
    if (contains(level)) {
      levels.push_back(level);
    }
  }
  return levels;
}

std::string LevelSet::str() const {
  std::string out = "{";
  bool first = true;
  for (int level : to_vector()) {
    out += (first ? "" : ", ") + std::to_string(level);
    first = false;
  }
  return out + "}";
}

} // namespace arpcheck
