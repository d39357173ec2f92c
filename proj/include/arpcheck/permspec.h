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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <arpcheck/air.h>

namespace arpcheck {

/// Normal < Dangerous < Signature. signatureOrSystem folds into Signature.
enum class ProtectionLevel { Normal = 0, Dangerous = 1, Signature = 2 };

std::string_view to_string(ProtectionLevel level);
std::optional<ProtectionLevel> protection_level_from_string(
    std::string_view text);

enum class RequirementMode { AnyOf, AllOf };

std::string_view to_string(RequirementMode mode);

struct Requirement {
  RequirementMode mode = RequirementMode::AnyOf;
  std::set<std::string> permissions;

  bool operator==(const Requirement&) const = default;
};

/// API-to-permission mapping of one API level.
///
/// `unprotected` lists framework APIs known to exist at this level without
/// any permission requirement. They are never part of `apis`.
struct LevelMapping {
  int level = kMinLevel;
  std::map<std::string, ProtectionLevel> permissions;
  std::map<std::string, Requirement> apis;
  std::set<std::string> unprotected;

  std::optional<ProtectionLevel> protection(const std::string& permission) const;
  bool operator==(const LevelMapping&) const = default;
};

class MappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a requirement names a permission that has no declared
/// protection level at that API level.
class UnknownPermission : public MappingError {
 public:
  UnknownPermission(std::string permission, int level);

  const std::string& permission() const {
    return permission_;
  }

 private:
  std::string permission_;
};

/// Checks the per-level invariants: every permission used by a requirement
/// has a level, requirements are non-empty, and no API is both mapped and
/// unprotected. Throws MappingError.
void validate_level(const LevelMapping& mapping);

LevelMapping level_from_json(std::string_view text);
std::string level_to_json(const LevelMapping& mapping);

/// Reads every `*.json` file of `dir` and indexes the mappings by level.
std::map<int, LevelMapping> load_level_files(const std::string& dir);

/// Per-level mappings covering every level from kMinLevel to lav.
class MappingStore {
 public:
  /// Throws MappingError when a level in [kMinLevel, lav] is missing.
  MappingStore(std::map<int, LevelMapping> levels, int lav = kDefaultLav);

  int lav() const {
    return lav_;
  }
  const LevelMapping& at(int level) const;

  /// True when the API exists at `level`, with or without a requirement.
  bool exists(const std::string& api, int level) const;
  /// True when any level knows the API.
  bool known(const std::string& api) const;
  std::set<std::string> all_apis() const;

 private:
  std::map<int, LevelMapping> levels_;
  int lav_;
};

MappingStore load_mapping_store(const std::string& dir, int lav = kDefaultLav);

/// The requirement of `api` at `level`; nullopt when the API carries no
/// permission mapping there (absent, not yet added, or unprotected).
std::optional<Requirement> lookup(
    const MappingStore& store,
    const std::string& api,
    int level);

enum class ChangeKind { Restricted, Relaxed, SameLevel };

std::string_view to_string(ChangeKind kind);

struct EvolutionReport {
  std::set<std::string> added;
  std::set<std::string> deleted;
  std::map<std::string, ChangeKind> changed;

  bool empty() const {
    return added.empty() && deleted.empty() && changed.empty();
  }
  bool operator==(const EvolutionReport&) const = default;
};

/// Highest protection level among the requirement's permissions.
ProtectionLevel max_protection(
    const Requirement& requirement,
    const LevelMapping& mapping);

/// Compares two level mappings. Works in either direction.
EvolutionReport diff_mappings(const LevelMapping& from, const LevelMapping& to);

/// Requires kMinLevel <= from < to <= lav; throws std::invalid_argument.
EvolutionReport diff_levels(const MappingStore& store, int from, int to);

/// True iff the API's mapping differs between two consecutive levels.
bool is_evolving(const MappingStore& store, const std::string& api);

/// What a requirement asks of the app at runtime.
struct PermissionNeed {
  enum class Kind {
    /// Satisfied by an install-time (normal) permission.
    Free,
    /// Needs a signature permission general apps cannot hold.
    Unobtainable,
    /// One of `dangerous` must be granted.
    AnyOf,
    /// Every permission in `dangerous` must be granted.
    AllOf,
  };

  Kind kind = Kind::Free;
  std::set<std::string> dangerous;
};

PermissionNeed permission_need(
    const Requirement& requirement,
    const LevelMapping& mapping);

class StubSyntaxError : public MappingError {
 public:
  StubSyntaxError(int line, const std::string& message);

  int line() const {
    return line_;
  }

 private:
  int line_;
};

/// Extracts the mapping slice of one API level from framework stub text.
/// Methods with `@RequiresPermission` or Javadoc permission links get a
/// requirement; other declared methods are recorded as unprotected.
LevelMapping parse_stubs(std::string_view text, int level);

} // namespace arpcheck
