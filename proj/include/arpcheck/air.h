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

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arpcheck {

/// First API level with runtime permissions; the bottom of every level set.
inline constexpr int kMinLevel = 23;
/// Default latest Android version in the analysis universe.
inline constexpr int kDefaultLav = 30;

enum class ComponentKind { Activity, Service, Receiver };

enum class CallbackKind {
  OnCreate,
  OnStart,
  OnResume,
  OnPause,
  OnStop,
  OnDestroy,
  OnClick,
  OnRequestPermissionsResult,
  Run,
};

inline constexpr CallbackKind kAllCallbackKinds[] = {
    CallbackKind::OnCreate,
    CallbackKind::OnStart,
    CallbackKind::OnResume,
    CallbackKind::OnPause,
    CallbackKind::OnStop,
    CallbackKind::OnDestroy,
    CallbackKind::OnClick,
    CallbackKind::OnRequestPermissionsResult,
    CallbackKind::Run,
};

enum class ParamType { String, StringArray, Int, Opaque };

std::string_view to_string(ComponentKind kind);
std::string_view to_string(CallbackKind kind);
std::string_view to_string(ParamType type);
std::optional<ComponentKind> component_kind_from_string(std::string_view text);
std::optional<CallbackKind> callback_kind_from_string(std::string_view text);
std::optional<ParamType> param_type_from_string(std::string_view text);

/// Whether a component of `component` kind may bind a `callback`.
bool callback_allowed(ComponentKind component, CallbackKind callback);

/// A value flowing into a statement: a string literal, a variable, or an
/// integer constant (only meaningful for int/opaque parameters).
struct Operand {
  enum class Kind { Literal, Variable, Integer };

  Kind kind = Kind::Literal;
  std::string text;
  int value = 0;

  static Operand literal(std::string text);
  static Operand variable(std::string name);
  static Operand integer(int value);

  bool operator==(const Operand&) const = default;
};

struct Statement;

struct DefString {
  std::string var;
  std::string literal;
  bool operator==(const DefString&) const = default;
};

struct DefStringFromParam {
  std::string var;
  std::string param;
  bool operator==(const DefStringFromParam&) const = default;
};

struct DefArray {
  std::string var;
  std::vector<Operand> elements;
  bool operator==(const DefArray&) const = default;
};

struct ArrayStore {
  std::string var;
  int index = 0;
  Operand source;
  bool operator==(const ArrayStore&) const = default;
};

struct CallMethod {
  std::string target;
  std::vector<Operand> args;
  bool operator==(const CallMethod&) const = default;
};

struct CallDangerous {
  std::string api;
  std::vector<Operand> args;
  bool operator==(const CallDangerous&) const = default;
};

/// CHECK API call. Its result is consumed by a `check_granted` branch that
/// terminates the same block.
struct CallCheck {
  Operand permission;
  bool operator==(const CallCheck&) const = default;
};

struct CallRequest {
  Operand permissions;
  int request_code = 0;
  bool operator==(const CallRequest&) const = default;
};

struct CallExplain {
  Operand permission;
  bool operator==(const CallExplain&) const = default;
};

struct LaunchComponent {
  std::string component;
  bool operator==(const LaunchComponent&) const = default;
};

struct TryCatchSecurity {
  std::vector<Statement> body;
  friend bool operator==(const TryCatchSecurity& a, const TryCatchSecurity& b);
};

struct Statement {
  using Node = std::variant<
      DefString,
      DefStringFromParam,
      DefArray,
      ArrayStore,
      CallMethod,
      CallDangerous,
      CallCheck,
      CallRequest,
      CallExplain,
      LaunchComponent,
      TryCatchSecurity>;

  Node node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  bool operator==(const Statement&) const = default;
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

std::string_view to_string(CmpOp op);
std::optional<CmpOp> cmp_op_from_string(std::string_view text);
bool evaluate(CmpOp op, int lhs, int rhs);

/// Comparison of the runtime SDK level against a constant.
struct RvCond {
  CmpOp op = CmpOp::Ge;
  int value = kMinLevel;
  bool operator==(const RvCond&) const = default;
};

/// Positive/negative outcome of the CHECK call that precedes the branch.
struct CheckResultCond {
  bool operator==(const CheckResultCond&) const = default;
};

/// HANDLE callback test that `permission` was granted.
struct GrantResultCond {
  std::string permission;
  bool operator==(const GrantResultCond&) const = default;
};

using Condition = std::variant<RvCond, CheckResultCond, GrantResultCond>;

struct Goto {
  std::string target;
  bool operator==(const Goto&) const = default;
};

struct Branch {
  Condition cond;
  std::string if_true;
  std::string if_false;
  bool operator==(const Branch&) const = default;
};

struct Return {
  bool operator==(const Return&) const = default;
};

using Terminator = std::variant<Goto, Branch, Return>;

struct BasicBlock {
  std::string id;
  std::vector<Statement> statements;
  Terminator terminator = Return{};

  std::vector<std::string> successors() const;
  bool operator==(const BasicBlock&) const = default;
};

struct Param {
  std::string name;
  ParamType type = ParamType::String;
  bool operator==(const Param&) const = default;
};

/// The first block is the method's entry.
struct Method {
  std::string name;
  std::vector<Param> params;
  std::vector<BasicBlock> blocks;

  const BasicBlock& entry_block() const {
    return blocks.front();
  }
  const BasicBlock* find_block(std::string_view id) const;
  const Param* find_param(std::string_view name) const;

  bool operator==(const Method&) const = default;
};

struct Component {
  std::string name;
  ComponentKind kind = ComponentKind::Activity;
  std::string package;
  std::map<CallbackKind, std::string> callbacks;

  bool operator==(const Component&) const = default;
};

struct Manifest {
  std::string package_id;
  int target_sdk = kMinLevel;
  std::set<std::string> declared_permissions;

  bool operator==(const Manifest&) const = default;
};

struct AppModel {
  Manifest manifest;
  std::vector<Component> components;
  std::vector<Method> methods;

  const Method* find_method(std::string_view name) const;
  const Component* find_component(std::string_view name) const;

  bool operator==(const AppModel&) const = default;
};

/// Position of a statement: method, block, and pre-order index of the
/// statement within the block (nested try/catch bodies included).
struct SiteId {
  std::string method;
  std::string block;
  int index = 0;

  std::string str() const;
  static std::optional<SiteId> parse(std::string_view text);

  auto operator<=>(const SiteId&) const = default;
};

/// Visits every statement of `block` in pre-order with its site index and
/// whether it lies inside a `trycatch_security` region.
void for_each_statement(
    const BasicBlock& block,
    const std::function<void(const Statement&, int index, bool in_trycatch)>&
        visit);

/// Looks up a statement by site; nullptr when the site does not exist.
const Statement* statement_at(const AppModel& app, const SiteId& site);
bool site_in_trycatch(const AppModel& app, const SiteId& site);

/// Number of parameters in a framework API signature `a.b.C.m(T1,T2)`.
std::optional<int> api_arity(std::string_view api);

enum class DiagnosticKind { Syntax, Resolution, Invariant };

struct AirDiagnostic {
  DiagnosticKind kind = DiagnosticKind::Syntax;
  int line = 0;
  int column = 0;
  std::string message;

  std::string str() const;
};

class AirError : public std::runtime_error {
 public:
  explicit AirError(std::vector<AirDiagnostic> diagnostics);

  const std::vector<AirDiagnostic>& diagnostics() const {
    return diagnostics_;
  }
  bool has(DiagnosticKind kind) const;

 private:
  std::vector<AirDiagnostic> diagnostics_;
};

/// Parses and validates AIR source. Throws AirError carrying every
/// diagnostic found (a syntax error stops parsing at the first one).
AppModel parse_app(std::string_view text, int lav = kDefaultLav);

/// Validates an already-constructed model; returns the diagnostics found.
std::vector<AirDiagnostic> validate_app(const AppModel& app, int lav);

/// Canonical AIR text for `app`. Reparses to an equal model.
std::string pretty_print(const AppModel& app);

std::string read_file(const std::string& path);

} // namespace arpcheck
