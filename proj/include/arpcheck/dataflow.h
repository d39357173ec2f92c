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
#include <set>
#include <string>
#include <vector>

#include <arpcheck/air.h>
#include <arpcheck/graphs.h>

namespace arpcheck {

/// String values a variable may hold. `top` means unknown and absorbs
/// every join.
struct ValueSet {
  bool top = false;
  std::set<std::string> values;

  static ValueSet unknown() {
    return ValueSet{true, {}};
  }
  static ValueSet of(std::string literal) {
    return ValueSet{false, {std::move(literal)}};
  }

  /// Returns true when the join changed this set.
  bool join(const ValueSet& other);
  /// No usable value: unknown, or no definition reaches.
  bool unresolved() const {
    return top || values.empty();
  }
  std::string str() const;

  bool operator==(const ValueSet&) const = default;
};

/// Variable facts at one program point.
using Facts = std::map<std::string, ValueSet>;

/// Values reaching the permission operand of every CHECK, REQUEST and
/// EXPLAIN call.
struct SiteResolution {
  std::map<SiteId, ValueSet> sites;
  std::vector<std::string> diagnostics;
  long iterations = 0;
};

/// Forward may-analysis of string and string-array variables over the ICFG.
/// `max_iterations` of 0 derives the cap from the lattice height.
SiteResolution solve_reaching(
    const AppModel& app,
    const CallGraph& cg,
    const Icfg& icfg,
    long max_iterations = 0);

struct ResolvedPermissions {
  std::set<std::string> permissions;
  /// Set when the site was unresolved and the app-wide literal set was used.
  bool fallback = false;

  bool operator==(const ResolvedPermissions&) const = default;
};

/// The permissions a site may name. Unresolved sites fall back to every
/// string literal of the app. Throws std::out_of_range for unknown sites.
ResolvedPermissions resolve_site(
    const SiteResolution& resolution,
    const SiteId& site,
    const AppModel& app);

/// Every string literal appearing in a statement of the app.
std::set<std::string> string_literals(const AppModel& app);

} // namespace arpcheck
