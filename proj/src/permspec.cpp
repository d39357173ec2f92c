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

#include <arpcheck/permspec.h>

#include <algorithm>
#include <filesystem>

#include <json.hpp>

namespace arpcheck {

using nlohmann::json;

std::string_view to_string(ProtectionLevel level) {
  switch (level) {
    case ProtectionLevel::Normal:
      return "normal";
    case ProtectionLevel::Dangerous:
      return "dangerous";
    case ProtectionLevel::Signature:
      return "signature";
  }
  return "?";
}

std::optional<ProtectionLevel> protection_level_from_string(
    std::string_view text) {
  if (text == "normal") {
    return ProtectionLevel::Normal;
  } else if (text == "dangerous") {
    return ProtectionLevel::Dangerous;
  } else if (text == "signature" || text == "signatureOrSystem") {
    return ProtectionLevel::Signature;
  }
  return std::nullopt;
}

std::string_view to_string(RequirementMode mode) {
  return mode == RequirementMode::AnyOf ? "anyOf" : "allOf";
}

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Restricted:
      return "restricted";
    case ChangeKind::Relaxed:
      return "relaxed";
    case ChangeKind::SameLevel:
      return "same-level";
  }
  return "?";
}

std::optional<ProtectionLevel> LevelMapping::protection(
    const std::string& permission) const {
  auto found = permissions.find(permission);
  if (found == permissions.end()) {
    return std::nullopt;
  }
  return found->second;
}

UnknownPermission::UnknownPermission(std::string permission, int level)
    : MappingError(
          "permission '" + permission + "' has no protection level at API " +
          std::to_string(level)),
      permission_(std::move(permission)) {}

void validate_level(const LevelMapping& mapping) {
  if (mapping.level < kMinLevel) {
    throw MappingError(
        "mapping level " + std::to_string(mapping.level) + " below " +
        std::to_string(kMinLevel));
  }
  for (const auto& [name, level] : mapping.permissions) {
    if (name.empty()) {
      throw MappingError("empty permission name");
    }
    (void)level;
  }
  for (const auto& [api, requirement] : mapping.apis) {
    if (requirement.permissions.empty()) {
      throw MappingError("API '" + api + "' has an empty requirement");
    }
    for (const auto& permission : requirement.permissions) {
      if (!mapping.permissions.count(permission)) {
        throw UnknownPermission(permission, mapping.level);
      }
    }
    if (mapping.unprotected.count(api)) {
      throw MappingError(
          "API '" + api + "' is both mapped and unprotected at level " +
          std::to_string(mapping.level));
    }
  }
}

LevelMapping level_from_json(std::string_view text) {
  LevelMapping mapping;
  try {
    auto root = json::parse(text);
    mapping.level = root.at("level").get<int>();
    for (const auto& [name, level] : root.at("permissions").items()) {
      auto parsed = protection_level_from_string(level.get<std::string>());
      if (!parsed) {
        throw MappingError(
            "unknown protection level '" + level.get<std::string>() +
            "' for " + name);
      }
      mapping.permissions.emplace(name, *parsed);
    }
    for (const auto& [api, entry] : root.at("apis").items()) {
      Requirement requirement;
      auto mode = entry.at("mode").get<std::string>();
      if (mode == "anyOf") {
        requirement.mode = RequirementMode::AnyOf;
      } else if (mode == "allOf") {
        requirement.mode = RequirementMode::AllOf;
      } else {
        throw MappingError("unknown requirement mode '" + mode + "' for " + api);
      }
      for (const auto& permission : entry.at("perms")) {
        if (!requirement.permissions.insert(permission.get<std::string>())
                 .second) {
          throw MappingError("duplicate permission in requirement of " + api);
        }
      }
      mapping.apis.emplace(api, std::move(requirement));
    }
    if (root.contains("unprotected")) {
      for (const auto& api : root.at("unprotected")) {
        mapping.unprotected.insert(api.get<std::string>());
      }
    }
  } catch (const json::exception& error) {
    throw MappingError(std::string("malformed mapping file: ") + error.what());
  }
  validate_level(mapping);
  return mapping;
}

std::string level_to_json(const LevelMapping& mapping) {
  json root;
  root["level"] = mapping.level;
  root["permissions"] = json::object();
  for (const auto& [name, level] : mapping.permissions) {
    root["permissions"][name] = std::string(to_string(level));
  }
  root["apis"] = json::object();
  for (const auto& [api, requirement] : mapping.apis) {
    root["apis"][api] = {
        {"mode", std::string(to_string(requirement.mode))},
        {"perms", requirement.permissions},
    };
  }
  if (!mapping.unprotected.empty()) {
    root["unprotected"] = mapping.unprotected;
  }
  return root.dump(2) + "\n";
}

std::map<int, LevelMapping> load_level_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code error;
  if (!fs::is_directory(dir, error)) {
    throw MappingError("mapping directory '" + dir + "' not found");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::map<int, LevelMapping> levels;
  for (const auto& file : files) {
    auto mapping = level_from_json(read_file(file.string()));
    int level = mapping.level;
    if (!levels.emplace(level, std::move(mapping)).second) {
      throw MappingError(
          "level " + std::to_string(level) + " defined twice in '" + dir + "'");
    }
  }
  return levels;
}

MappingStore::MappingStore(std::map<int, LevelMapping> levels, int lav)
    : lav_(lav) {
  if (lav < kMinLevel || lav > 63) {
    throw MappingError("LAV " + std::to_string(lav) + " out of range");
  }
  for (int level = kMinLevel; level <= lav; ++level) {
    auto found = levels.find(level);
    if (found == levels.end()) {
      throw MappingError("no mapping for API level " + std::to_string(level));
    }
    validate_level(found->second);
    levels_.emplace(level, std::move(found->second));
  }
}

const LevelMapping& MappingStore::at(int level) const {
  auto found = levels_.find(level);
  if (found == levels_.end()) {
    throw std::out_of_range("API level " + std::to_string(level));
  }
  return found->second;
}

bool MappingStore::exists(const std::string& api, int level) const {
  const auto& mapping = at(level);
  return mapping.apis.count(api) > 0 || mapping.unprotected.count(api) > 0;
}

bool MappingStore::known(const std::string& api) const {
  for (const auto& [level, mapping] : levels_) {
    if (mapping.apis.count(api) || mapping.unprotected.count(api)) {
      return true;
    }
  }
  return false;
}

std::set<std::string> MappingStore::all_apis() const {
  std::set<std::string> apis;
  for (const auto& [level, mapping] : levels_) {
    for (const auto& [api, requirement] : mapping.apis) {
      apis.insert(api);
    }
    apis.insert(mapping.unprotected.begin(), mapping.unprotected.end());
  }
  return apis;
}

MappingStore load_mapping_store(const std::string& dir, int lav) {
  return MappingStore(load_level_files(dir), lav);
}

std::optional<Requirement> lookup(
    const MappingStore& store,
    const std::string& api,
    int level) {
  const auto& apis = store.at(level).apis;
  auto found = apis.find(api);
  if (found == apis.end()) {
    return std::nullopt;
  }
  return found->second;
}

ProtectionLevel max_protection(
    const Requirement& requirement,
    const LevelMapping& mapping) {
  auto highest = ProtectionLevel::Normal;
  for (const auto& permission : requirement.permissions) {
    auto level = mapping.protection(permission);
    if (!level) {
      throw UnknownPermission(permission, mapping.level);
    }
    highest = std::max(highest, *level);
  }
  return highest;
}

EvolutionReport diff_mappings(const LevelMapping& from, const LevelMapping& to) {
  EvolutionReport report;
  for (const auto& [api, requirement] : from.apis) {
    auto found = to.apis.find(api);
    if (found == to.apis.end()) {
      report.deleted.insert(api);
      continue;
    }
    if (found->second == requirement) {
      continue;
    }
    auto before = max_protection(requirement, from);
    auto after = max_protection(found->second, to);
    if (after > before) {
      report.changed.emplace(api, ChangeKind::Restricted);
    } else if (after < before) {
      report.changed.emplace(api, ChangeKind::Relaxed);
    } else {
      report.changed.emplace(api, ChangeKind::SameLevel);
    }
  }
  for (const auto& [api, requirement] : to.apis) {
    if (!from.apis.count(api)) {
      report.added.insert(api);
    }
  }
  return report;
}

EvolutionReport diff_levels(const MappingStore& store, int from, int to) {
  if (from < kMinLevel || to > store.lav() || from >= to) {
    throw std::invalid_argument(
        "diff requires " + std::to_string(kMinLevel) + " <= from < to <= " +
        std::to_string(store.lav()) + ", got " + std::to_string(from) +
        " -> " + std::to_string(to));
  }
  return diff_mappings(store.at(from), store.at(to));
}

bool is_evolving(const MappingStore& store, const std::string& api) {
  for (int level = kMinLevel; level < store.lav(); ++level) {
    if (lookup(store, api, level) != lookup(store, api, level + 1)) {
      return true;
    }
  }
  return false;
}

PermissionNeed permission_need(
    const Requirement& requirement,
    const LevelMapping& mapping) {
  PermissionNeed need;
  bool any_normal = false;
  bool any_signature = false;
  for (const auto& permission : requirement.permissions) {
    auto level = mapping.protection(permission);
    if (!level) {
      throw UnknownPermission(permission, mapping.level);
    }
    switch (*level) {
      case ProtectionLevel::Normal:
        any_normal = true;
        break;
      case ProtectionLevel::Dangerous:
        need.dangerous.insert(permission);
        break;
      case ProtectionLevel::Signature:
        any_signature = true;
        break;
    }
  }
  if (requirement.mode == RequirementMode::AnyOf) {
    if (any_normal) {
      need.kind = PermissionNeed::Kind::Free;
      need.dangerous.clear();
    } else if (!need.dangerous.empty()) {
      need.kind = PermissionNeed::Kind::AnyOf;
    } else {
      need.kind = PermissionNeed::Kind::Unobtainable;
    }
  } else {
    if (any_signature) {
      need.kind = PermissionNeed::Kind::Unobtainable;
      need.dangerous.clear();
    } else if (need.dangerous.empty()) {
      need.kind = PermissionNeed::Kind::Free;
    } else {
      need.kind = PermissionNeed::Kind::AllOf;
    }
  }
  return need;
}

} // namespace arpcheck
