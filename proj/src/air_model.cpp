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

#include <arpcheck/air.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace arpcheck {

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Activity:
      return "activity";
    case ComponentKind::Service:
      return "service";
    case ComponentKind::Receiver:
      return "receiver";
  }
  return "?";
}

std::string_view to_string(CallbackKind kind) {
  switch (kind) {
    case CallbackKind::OnCreate:
      return "onCreate";
    case CallbackKind::OnStart:
      return "onStart";
    case CallbackKind::OnResume:
      return "onResume";
    case CallbackKind::OnPause:
      return "onPause";
    case CallbackKind::OnStop:
      return "onStop";
    case CallbackKind::OnDestroy:
      return "onDestroy";
    case CallbackKind::OnClick:
      return "onClick";
    case CallbackKind::OnRequestPermissionsResult:
      return "onRequestPermissionsResult";
    case CallbackKind::Run:
      return "run";
  }
  return "?";
}

std::string_view to_string(ParamType type) {
  switch (type) {
    case ParamType::String:
      return "string";
    case ParamType::StringArray:
      return "string_array";
    case ParamType::Int:
      return "int";
    case ParamType::Opaque:
      return "opaque";
  }
  return "?";
}

std::optional<ComponentKind> component_kind_from_string(std::string_view text) {
  for (auto kind :
       {ComponentKind::Activity, ComponentKind::Service, ComponentKind::Receiver}) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  return std::nullopt;
}

std::optional<CallbackKind> callback_kind_from_string(std::string_view text) {
  for (auto kind : kAllCallbackKinds) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  return std::nullopt;
}

std::optional<ParamType> param_type_from_string(std::string_view text) {
  for (auto type :
       {ParamType::String,
        ParamType::StringArray,
        ParamType::Int,
        ParamType::Opaque}) {
    if (to_string(type) == text) {
      return type;
    }
  }
  return std::nullopt;
}

bool callback_allowed(ComponentKind component, CallbackKind callback) {
  switch (component) {
    case ComponentKind::Activity:
      return true;
    case ComponentKind::Service:
      return callback == CallbackKind::OnCreate ||
          callback == CallbackKind::OnStart ||
          callback == CallbackKind::OnDestroy || callback == CallbackKind::Run;
    case ComponentKind::Receiver:
      // onCreate stands in for onReceive.
      return callback == CallbackKind::OnCreate || callback == CallbackKind::Run;
  }
  return false;
}

Operand Operand::literal(std::string text) {
  return Operand{Kind::Literal, std::move(text), 0};
}

Operand Operand::variable(std::string name) {
  return Operand{Kind::Variable, std::move(name), 0};
}

Operand Operand::integer(int value) {
  return Operand{Kind::Integer, {}, value};
}

bool operator==(const TryCatchSecurity& a, const TryCatchSecurity& b) {
  return a.body == b.body;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Eq:
      return "==";
    case CmpOp::Ne:
      return "!=";
  }
  return "?";
}

std::optional<CmpOp> cmp_op_from_string(std::string_view text) {
  for (auto op :
       {CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne}) {
    if (to_string(op) == text) {
      return op;
    }
  }
  return std::nullopt;
}

bool evaluate(CmpOp op, int lhs, int rhs) {
  switch (op) {
    case CmpOp::Lt:
      return lhs < rhs;
    case CmpOp::Le:
      return lhs <= rhs;
    case CmpOp::Gt:
      return lhs > rhs;
    case CmpOp::Ge:
      return lhs >= rhs;
    case CmpOp::Eq:
      return lhs == rhs;
    case CmpOp::Ne:
      return lhs != rhs;
  }
  return false;
}

std::vector<std::string> BasicBlock::successors() const {
  if (const auto* jump = std::get_if<Goto>(&terminator)) {
    return {jump->target};
  }
  if (const auto* branch = std::get_if<Branch>(&terminator)) {
    return {branch->if_true, branch->if_false};
  }
  return {};
}

const BasicBlock* Method::find_block(std::string_view id) const {
  for (const auto& block : blocks) {
    if (block.id == id) {
      return &block;
    }
  }
  return nullptr;
}

const Param* Method::find_param(std::string_view name) const {
  for (const auto& param : params) {
    if (param.name == name) {
      return &param;
    }
  }
  return nullptr;
}

const Method* AppModel::find_method(std::string_view name) const {
  for (const auto& method : methods) {
    if (method.name == name) {
      return &method;
    }
  }
  return nullptr;
}

const Component* AppModel::find_component(std::string_view name) const {
  for (const auto& component : components) {
    if (component.name == name) {
      return &component;
    }
  }
  return nullptr;
}

std::string SiteId::str() const {
  return method + ":" + block + ":" + std::to_string(index);
}

std::optional<SiteId> SiteId::parse(std::string_view text) {
  auto first = text.find(':');
  auto last = text.rfind(':');
  if (first == std::string_view::npos || first == last) {
    return std::nullopt;
  }
  SiteId site;
  site.method = std::string(text.substr(0, first));
  site.block = std::string(text.substr(first + 1, last - first - 1));
  auto digits = text.substr(last + 1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), site.index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return site;
}

namespace {

void visit_statements(
    const std::vector<Statement>& statements,
    bool in_trycatch,
    int& next_index,
    const std::function<void(const Statement&, int, bool)>& visit) {
  for (const auto& statement : statements) {
    visit(statement, next_index++, in_trycatch);
    if (const auto* region = statement.as<TryCatchSecurity>()) {
      visit_statements(region->body, true, next_index, visit);
    }
  }
}

} // namespace

void for_each_statement(
    const BasicBlock& block,
    const std::function<void(const Statement&, int, bool)>& visit) {
  int next_index = 0;
  visit_statements(block.statements, false, next_index, visit);
}

namespace {

std::pair<const Statement*, bool> locate(
    const AppModel& app,
    const SiteId& site) {
  const auto* method = app.find_method(site.method);
  if (method == nullptr) {
    return {nullptr, false};
  }
  const auto* block = method->find_block(site.block);
  if (block == nullptr) {
    return {nullptr, false};
  }
  std::pair<const Statement*, bool> found{nullptr, false};
  for_each_statement(
      *block, [&](const Statement& statement, int index, bool in_trycatch) {
        if (index == site.index) {
          found = {&statement, in_trycatch};
        }
      });
  return found;
}

} // namespace

const Statement* statement_at(const AppModel& app, const SiteId& site) {
  return locate(app, site).first;
}

bool site_in_trycatch(const AppModel& app, const SiteId& site) {
  return locate(app, site).second;
}

std::optional<int> api_arity(std::string_view api) {
  auto open = api.find('(');
  if (open == std::string_view::npos || api.back() != ')') {
    return std::nullopt;
  }
  auto inside = api.substr(open + 1, api.size() - open - 2);
  if (inside.find_first_not_of(" \t") == std::string_view::npos) {
    return 0;
  }
  return static_cast<int>(std::count(inside.begin(), inside.end(), ',')) + 1;
}

std::string AirDiagnostic::str() const {
  std::string prefix;
  switch (kind) {
    case DiagnosticKind::Syntax:
      prefix = "syntax error";
      break;
    case DiagnosticKind::Resolution:
      prefix = "resolution error";
      break;
    case DiagnosticKind::Invariant:
      prefix = "invariant error";
      break;
  }
  if (line > 0) {
    return prefix + " at " + std::to_string(line) + ":" +
        std::to_string(column) + ": " + message;
  }
  return prefix + ": " + message;
}

namespace {

std::string join_diagnostics(const std::vector<AirDiagnostic>& diagnostics) {
  std::string joined;
  for (const auto& diagnostic : diagnostics) {
    if (!joined.empty()) {
      joined += "\n";
    }
    joined += diagnostic.str();
  }
  return joined;
}

} // namespace

AirError::AirError(std::vector<AirDiagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

bool AirError::has(DiagnosticKind kind) const {
  return std::any_of(
      diagnostics_.begin(), diagnostics_.end(), [&](const auto& diagnostic) {
        return diagnostic.kind == kind;
      });
}

namespace {

class Validator {
 public:
  Validator(const AppModel& app, int lav) : app_(app), lav_(lav) {}

  std::vector<AirDiagnostic> run() {
    check_manifest();
    check_components();
    check_methods();
    return std::move(diagnostics_);
  }

 private:
  void report(DiagnosticKind kind, std::string message) {
    diagnostics_.push_back(AirDiagnostic{kind, 0, 0, std::move(message)});
  }

  void check_manifest() {
    const auto& manifest = app_.manifest;
    if (manifest.package_id.empty()) {
      report(DiagnosticKind::Invariant, "empty package id");
    }
    if (manifest.target_sdk < kMinLevel || manifest.target_sdk > lav_) {
      report(
          DiagnosticKind::Invariant,
          "targetSdk " + std::to_string(manifest.target_sdk) +
              " outside [" + std::to_string(kMinLevel) + ", " +
              std::to_string(lav_) + "]");
    }
    for (const auto& permission : manifest.declared_permissions) {
      if (permission.empty()) {
        report(DiagnosticKind::Invariant, "empty permission name");
      }
    }
  }

  void check_components() {
    std::unordered_set<std::string> names;
    for (const auto& component : app_.components) {
      if (!names.insert(component.name).second) {
        report(
            DiagnosticKind::Invariant,
            "duplicate component '" + component.name + "'");
      }
      for (const auto& [kind, method] : component.callbacks) {
        if (!callback_allowed(component.kind, kind)) {
          report(
              DiagnosticKind::Invariant,
              std::string(to_string(kind)) + " is not a valid callback for " +
                  std::string(to_string(component.kind)) + " '" +
                  component.name + "'");
        }
        if (app_.find_method(method) == nullptr) {
          report(
              DiagnosticKind::Resolution,
              "callback " + component.name + "." +
                  std::string(to_string(kind)) + " binds unknown method '" +
                  method + "'");
        }
        if (kind == CallbackKind::OnRequestPermissionsResult) {
          handle_methods_.insert(method);
        }
      }
    }
  }

  void check_methods() {
    std::unordered_set<std::string> names;
    for (const auto& method : app_.methods) {
      if (!names.insert(method.name).second) {
        report(
            DiagnosticKind::Invariant, "duplicate method '" + method.name + "'");
      }
      check_method(method);
    }
  }

  void check_method(const Method& method) {
    if (method.blocks.empty()) {
      report(
          DiagnosticKind::Invariant,
          "method '" + method.name + "' has no blocks");
      return;
    }
    std::unordered_set<std::string> params;
    for (const auto& param : method.params) {
      if (!params.insert(param.name).second) {
        report(
            DiagnosticKind::Invariant,
            "duplicate parameter '" + param.name + "' in " + method.name);
      }
    }
    std::unordered_set<std::string> block_ids;
    for (const auto& block : method.blocks) {
      if (!block_ids.insert(block.id).second) {
        report(
            DiagnosticKind::Invariant,
            "duplicate block '" + block.id + "' in " + method.name);
      }
    }
    // Every variable defined anywhere in the method, plus parameters.
    std::unordered_set<std::string> defined(params.begin(), params.end());
    for (const auto& block : method.blocks) {
      for_each_statement(block, [&](const Statement& statement, int, bool) {
        std::visit(
            [&](const auto& node) {
              using T = std::decay_t<decltype(node)>;
              if constexpr (
                  std::is_same_v<T, DefString> ||
                  std::is_same_v<T, DefStringFromParam> ||
                  std::is_same_v<T, DefArray> || std::is_same_v<T, ArrayStore>) {
                defined.insert(node.var);
              }
            },
            statement.node);
      });
    }
    for (const auto& block : method.blocks) {
      for (const auto& successor : block.successors()) {
        if (!block_ids.count(successor)) {
          report(
              DiagnosticKind::Resolution,
              "block " + method.name + ":" + block.id +
                  " jumps to unknown block '" + successor + "'");
        }
      }
      check_terminator(method, block);
      for_each_statement(block, [&](const Statement& statement, int, bool) {
        check_statement(method, block, statement, defined);
      });
    }
  }

  void check_terminator(const Method& method, const BasicBlock& block) {
    const auto* branch = std::get_if<Branch>(&block.terminator);
    if (branch == nullptr) {
      return;
    }
    const std::string where = method.name + ":" + block.id;
    if (const auto* rv = std::get_if<RvCond>(&branch->cond)) {
      if (rv->value < 1 || rv->value > lav_) {
        report(
            DiagnosticKind::Invariant,
            "sdk constant " + std::to_string(rv->value) + " out of range in " +
                where);
      }
    } else if (std::holds_alternative<CheckResultCond>(branch->cond)) {
      bool has_check = std::any_of(
          block.statements.begin(),
          block.statements.end(),
          [](const Statement& statement) {
            return statement.as<CallCheck>() != nullptr;
          });
      if (!has_check) {
        report(
            DiagnosticKind::Invariant,
            "check_granted branch without a check call in " + where);
      }
    } else if (const auto* grant = std::get_if<GrantResultCond>(&branch->cond)) {
      if (!handle_methods_.count(method.name)) {
        report(
            DiagnosticKind::Invariant,
            "grant_result outside an onRequestPermissionsResult callback in " +
                where);
      }
      if (grant->permission.empty()) {
        report(DiagnosticKind::Invariant, "empty permission in " + where);
      }
    }
  }

  void check_operand(
      const Method& method,
      const Operand& operand,
      const std::unordered_set<std::string>& defined,
      const std::string& where) {
    if (operand.kind == Operand::Kind::Variable &&
        !defined.count(operand.text)) {
      report(
          DiagnosticKind::Resolution,
          "undefined variable '" + operand.text + "' in " + where);
    }
    if (operand.kind == Operand::Kind::Literal && operand.text.empty()) {
      report(DiagnosticKind::Invariant, "empty string literal in " + where);
    }
    (void)method;
  }

  void check_args(
      const Method& caller,
      const Method& callee,
      const std::vector<Operand>& args,
      const std::unordered_set<std::string>& defined,
      const std::string& where) {
    if (args.size() != callee.params.size()) {
      report(
          DiagnosticKind::Invariant,
          "call to " + callee.name + " passes " + std::to_string(args.size()) +
              " argument(s), expected " +
              std::to_string(callee.params.size()) + " in " + where);
      return;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto type = callee.params[i].type;
      bool stringy = type == ParamType::String || type == ParamType::StringArray;
      if (stringy && args[i].kind == Operand::Kind::Integer) {
        report(
            DiagnosticKind::Invariant,
            "integer passed to string parameter '" + callee.params[i].name +
                "' of " + callee.name + " in " + where);
      }
      if (type == ParamType::Int && args[i].kind != Operand::Kind::Integer) {
        report(
            DiagnosticKind::Invariant,
            "non-integer passed to int parameter '" + callee.params[i].name +
                "' of " + callee.name + " in " + where);
      }
      check_operand(caller, args[i], defined, where);
    }
  }

  void check_statement(
      const Method& method,
      const BasicBlock& block,
      const Statement& statement,
      const std::unordered_set<std::string>& defined) {
    const std::string where = method.name + ":" + block.id;
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, DefString>) {
            if (node.literal.empty()) {
              report(DiagnosticKind::Invariant, "empty literal in " + where);
            }
          } else if constexpr (std::is_same_v<T, DefStringFromParam>) {
            if (method.find_param(node.param) == nullptr) {
              report(
                  DiagnosticKind::Resolution,
                  "unknown parameter '" + node.param + "' in " + where);
            }
          } else if constexpr (std::is_same_v<T, DefArray>) {
            for (const auto& element : node.elements) {
              check_operand(method, element, defined, where);
            }
          } else if constexpr (std::is_same_v<T, ArrayStore>) {
            check_operand(method, node.source, defined, where);
          } else if constexpr (std::is_same_v<T, CallMethod>) {
            const auto* callee = app_.find_method(node.target);
            if (callee == nullptr) {
              report(
                  DiagnosticKind::Resolution,
                  "call to unknown method '" + node.target + "' in " + where);
            } else {
              check_args(method, *callee, node.args, defined, where);
            }
          } else if constexpr (std::is_same_v<T, CallDangerous>) {
            auto arity = api_arity(node.api);
            if (!arity) {
              report(
                  DiagnosticKind::Invariant,
                  "malformed API signature '" + node.api + "' in " + where);
            } else if (*arity != static_cast<int>(node.args.size())) {
              report(
                  DiagnosticKind::Invariant,
                  "call to " + node.api + " passes " +
                      std::to_string(node.args.size()) +
                      " argument(s), expected " + std::to_string(*arity) +
                      " in " + where);
            }
            for (const auto& arg : node.args) {
              check_operand(method, arg, defined, where);
            }
          } else if constexpr (
              std::is_same_v<T, CallCheck> || std::is_same_v<T, CallExplain>) {
            check_permission_operand(method, node.permission, defined, where);
          } else if constexpr (std::is_same_v<T, CallRequest>) {
            check_permission_operand(method, node.permissions, defined, where);
          } else if constexpr (std::is_same_v<T, LaunchComponent>) {
            if (app_.find_component(node.component) == nullptr) {
              report(
                  DiagnosticKind::Resolution,
                  "launch of undeclared component '" + node.component +
                      "' in " + where);
            }
          }
        },
        statement.node);
  }

  void check_permission_operand(
      const Method& method,
      const Operand& operand,
      const std::unordered_set<std::string>& defined,
      const std::string& where) {
    if (operand.kind == Operand::Kind::Integer) {
      report(
          DiagnosticKind::Invariant,
          "permission argument must be a string in " + where);
      return;
    }
    check_operand(method, operand, defined, where);
  }

  const AppModel& app_;
  int lav_;
  std::unordered_set<std::string> handle_methods_;
  std::vector<AirDiagnostic> diagnostics_;
};

} // namespace

std::vector<AirDiagnostic> validate_app(const AppModel& app, int lav) {
  return Validator(app, lav).run();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace arpcheck
