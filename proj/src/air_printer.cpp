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

#include <sstream>

namespace arpcheck {

namespace {

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + "\"";
}

std::string operand_text(const Operand& operand) {
  switch (operand.kind) {
    case Operand::Kind::Literal:
      return quote(operand.text);
    case Operand::Kind::Variable:
      return operand.text;
    case Operand::Kind::Integer:
      return std::to_string(operand.value);
  }
  return {};
}

std::string args_text(const std::vector<Operand>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += operand_text(args[i]);
  }
  return out + ")";
}

class Printer {
 public:
  std::string run(const AppModel& app) {
    out_ << "app " << app.manifest.package_id << " targetSdk "
         << app.manifest.target_sdk << "\n";
    for (const auto& permission : app.manifest.declared_permissions) {
      out_ << "uses-permission " << permission << "\n";
    }
    for (const auto& component : app.components) {
      out_ << "\n" << to_string(component.kind) << " " << component.name
           << " {\n";
      for (const auto& [kind, method] : component.callbacks) {
        out_ << "  " << to_string(kind) << " = " << method << "\n";
      }
      out_ << "}\n";
    }
    for (const auto& method : app.methods) {
      print_method(method);
    }
    return out_.str();
  }

 private:
  void print_method(const Method& method) {
    out_ << "\nmethod " << method.name << "(";
    for (std::size_t i = 0; i < method.params.size(); ++i) {
      if (i > 0) {
        out_ << ", ";
      }
      out_ << method.params[i].name << ": " << to_string(method.params[i].type);
    }
    out_ << ") {\n";
    for (const auto& block : method.blocks) {
      out_ << "  block " << block.id << ":\n";
      for (const auto& statement : block.statements) {
        print_statement(statement, 4);
      }
      out_ << "    " << terminator_text(block.terminator) << "\n";
    }
    out_ << "}\n";
  }

  void print_statement(const Statement& statement, int indent) {
    const std::string pad(indent, ' ');
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          out_ << pad;
          if constexpr (std::is_same_v<T, DefString>) {
            out_ << "def " << node.var << " = " << quote(node.literal);
          } else if constexpr (std::is_same_v<T, DefStringFromParam>) {
            out_ << "def " << node.var << " = param " << node.param;
          } else if constexpr (std::is_same_v<T, DefArray>) {
            out_ << "array " << node.var << " = [";
            for (std::size_t i = 0; i < node.elements.size(); ++i) {
              out_ << (i > 0 ? ", " : "") << operand_text(node.elements[i]);
            }
            out_ << "]";
          } else if constexpr (std::is_same_v<T, ArrayStore>) {
            out_ << "store " << node.var << "[" << node.index
                 << "] = " << operand_text(node.source);
          } else if constexpr (std::is_same_v<T, CallMethod>) {
            out_ << "call " << node.target << args_text(node.args);
          } else if constexpr (std::is_same_v<T, CallDangerous>) {
            out_ << "dangerous <" << node.api << ">" << args_text(node.args);
          } else if constexpr (std::is_same_v<T, CallCheck>) {
            out_ << "check " << operand_text(node.permission);
          } else if constexpr (std::is_same_v<T, CallRequest>) {
            out_ << "request " << operand_text(node.permissions) << " "
                 << node.request_code;
          } else if constexpr (std::is_same_v<T, CallExplain>) {
            out_ << "explain " << operand_text(node.permission);
          } else if constexpr (std::is_same_v<T, LaunchComponent>) {
            out_ << "launch " << node.component;
          } else if constexpr (std::is_same_v<T, TryCatchSecurity>) {
            out_ << "trycatch_security {\n";
            for (const auto& inner : node.body) {
              print_statement(inner, indent + 2);
            }
            out_ << pad << "}";
          }
          out_ << "\n";
        },
        statement.node);
  }

  static std::string terminator_text(const Terminator& terminator) {
    if (const auto* jump = std::get_if<Goto>(&terminator)) {
      return "goto " + jump->target;
    }
    if (const auto* branch = std::get_if<Branch>(&terminator)) {
      std::string cond;
      if (const auto* rv = std::get_if<RvCond>(&branch->cond)) {
        cond = "sdk " + std::string(to_string(rv->op)) + " " +
            std::to_string(rv->value);
      } else if (std::holds_alternative<CheckResultCond>(branch->cond)) {
        cond = "check_granted";
      } else {
        cond = "grant_result " +
            std::get<GrantResultCond>(branch->cond).permission;
      }
      return "branch " + cond + " " + branch->if_true + " " + branch->if_false;
    }
    return "return";
  }

  std::ostringstream out_;
};

} // namespace

std::string pretty_print(const AppModel& app) {
  return Printer().run(app);
}

} // namespace arpcheck
