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

#include <cctype>
#include <climits>

namespace arpcheck {

namespace {

enum class TokenKind { Word, Int, String, ApiSig, Punct, Cmp, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::End:
      return "end of input";
    case TokenKind::String:
      return "string \"" + token.text + "\"";
    case TokenKind::ApiSig:
      return "API signature <" + token.text + ">";
    default:
      return "'" + token.text + "'";
  }
}

class SyntaxFailure {
 public:
  AirDiagnostic diagnostic;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space_and_comments();
      Token token;
      token.line = line_;
      token.column = column_;
      if (at_end()) {
        token.kind = TokenKind::End;
        tokens.push_back(token);
        return tokens;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        token.kind = TokenKind::Word;
        while (!at_end() && is_word_char(peek())) {
          token.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        token.kind = TokenKind::Int;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
          token.text += advance();
        }
      } else if (c == '"') {
        token.kind = TokenKind::String;
        token.text = read_string(token);
      } else if (
          c == '<' && pos_ + 1 < text_.size() &&
          (std::isalpha(static_cast<unsigned char>(text_[pos_ + 1])) ||
           text_[pos_ + 1] == '_')) {
        token.kind = TokenKind::ApiSig;
        advance();
        while (!at_end() && peek() != '>' && peek() != '\n') {
          token.text += advance();
        }
        if (at_end() || peek() != '>') {
          fail(token, "'>' closing the API signature");
        }
        advance();
      } else if (c == '<' || c == '>' || c == '!' || c == '=') {
        token.text += advance();
        if (!at_end() && peek() == '=') {
          token.text += advance();
        }
        if (token.text == "=") {
          token.kind = TokenKind::Punct;
        } else if (token.text == "!") {
          fail(token, "'!='");
        } else {
          token.kind = TokenKind::Cmp;
        }
      } else if (std::string_view("{}()[],:").find(c) != std::string_view::npos) {
        token.kind = TokenKind::Punct;
        token.text += advance();
      } else {
        token.text = std::string(1, c);
        fail(token, "a token");
      }
      tokens.push_back(std::move(token));
    }
  }

 private:
  static bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
        c == '.' || c == '$' || c == '-';
  }

  bool at_end() const {
    return pos_ >= text_.size();
  }

  char peek() const {
    return text_[pos_];
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') {
          advance();
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string read_string(const Token& start) {
    advance();
    std::string value;
    while (true) {
      if (at_end() || peek() == '\n') {
        fail(start, "closing '\"'");
      }
      char c = advance();
      if (c == '"') {
        return value;
      }
      if (c == '\\') {
        if (at_end()) {
          fail(start, "escape character");
        }
        char escaped = advance();
        if (escaped != '"' && escaped != '\\') {
          fail(start, "'\\\"' or '\\\\' escape");
        }
        value += escaped;
      } else {
        value += c;
      }
    }
  }

  [[noreturn]] void fail(const Token& token, const std::string& expected) {
    throw SyntaxFailure{AirDiagnostic{
        DiagnosticKind::Syntax,
        token.line,
        token.column,
        "expected " + expected + ", found " +
            (token.text.empty() ? std::string("invalid input")
                                : "'" + token.text + "'")}};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

bool is_identifier(const std::string& text) {
  return !text.empty() && text.find_first_of(".$-") == std::string::npos;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  AppModel parse() {
    AppModel app;
    expect_keyword("app");
    app.manifest.package_id = expect_dotted("package id");
    expect_keyword("targetSdk");
    app.manifest.target_sdk = expect_int();
    while (peek().kind != TokenKind::End) {
      const auto& token = peek();
      if (is_word("uses-permission")) {
        advance();
        app.manifest.declared_permissions.insert(
            expect_dotted("permission name"));
      } else if (
          token.kind == TokenKind::Word &&
          component_kind_from_string(token.text)) {
        parse_component(app);
      } else if (is_word("method")) {
        app.methods.push_back(parse_method());
      } else {
        fail("'uses-permission', a component, or 'method'");
      }
    }
    for (auto& component : app.components) {
      auto dot = component.name.rfind('.');
      component.package = dot == std::string::npos
          ? app.manifest.package_id
          : component.name.substr(0, dot);
    }
    return app;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    auto index = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[index];
  }

  const Token& advance() {
    const auto& token = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) {
      ++pos_;
    }
    return token;
  }

  bool is_word(std::string_view text) const {
    return peek().kind == TokenKind::Word && peek().text == text;
  }

  bool is_punct(std::string_view text) const {
    return peek().kind == TokenKind::Punct && peek().text == text;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const auto& token = peek();
    throw SyntaxFailure{AirDiagnostic{
        DiagnosticKind::Syntax,
        token.line,
        token.column,
        "expected " + expected + ", found " + describe(token)}};
  }

  void expect_keyword(std::string_view keyword) {
    if (!is_word(keyword)) {
      fail("'" + std::string(keyword) + "'");
    }
    advance();
  }

  void expect_punct(std::string_view punct) {
    if (!is_punct(punct)) {
      fail("'" + std::string(punct) + "'");
    }
    advance();
  }

  std::string expect_dotted(const std::string& what) {
    if (peek().kind != TokenKind::Word) {
      fail(what);
    }
    return advance().text;
  }

  std::string expect_identifier(const std::string& what) {
    if (peek().kind != TokenKind::Word || !is_identifier(peek().text)) {
      fail(what);
    }
    return advance().text;
  }

  int expect_int() {
    if (peek().kind != TokenKind::Int) {
      fail("integer");
    }
    const auto& token = peek();
    if (token.text.size() > 9) {
      fail("integer in range");
    }
    return std::stoi(advance().text);
  }

  std::string expect_string() {
    if (peek().kind != TokenKind::String) {
      fail("string literal");
    }
    return advance().text;
  }

  void parse_component(AppModel& app) {
    Component component;
    component.kind = *component_kind_from_string(advance().text);
    component.name = expect_dotted("component name");
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind != TokenKind::Word) {
        fail("callback kind or '}'");
      }
      auto kind = callback_kind_from_string(peek().text);
      if (!kind) {
        fail("callback kind");
      }
      advance();
      expect_punct("=");
      auto method = expect_identifier("method name");
      if (!component.callbacks.emplace(*kind, method).second) {
        invariant_errors_.push_back(AirDiagnostic{
            DiagnosticKind::Invariant,
            peek().line,
            peek().column,
            "component '" + component.name + "' binds " +
                std::string(to_string(*kind)) + " twice"});
      }
    }
    expect_punct("}");
    app.components.push_back(std::move(component));
  }

  Method parse_method() {
    expect_keyword("method");
    Method method;
    method.name = expect_identifier("method name");
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        Param param;
        param.name = expect_identifier("parameter name");
        expect_punct(":");
        if (peek().kind != TokenKind::Word) {
          fail("parameter type");
        }
        auto type = param_type_from_string(peek().text);
        if (!type) {
          fail("one of string, string_array, int, opaque");
        }
        advance();
        param.type = *type;
        method.params.push_back(std::move(param));
        if (!is_punct(",")) {
          break;
        }
        advance();
      }
    }
    expect_punct(")");
    expect_punct("{");
    do {
      method.blocks.push_back(parse_block());
    } while (!is_punct("}"));
    expect_punct("}");
    return method;
  }

  BasicBlock parse_block() {
    expect_keyword("block");
    BasicBlock block;
    block.id = expect_identifier("block id");
    expect_punct(":");
    while (!is_terminator()) {
      block.statements.push_back(parse_statement());
    }
    block.terminator = parse_terminator();
    return block;
  }

  bool is_terminator() const {
    return is_word("goto") || is_word("branch") || is_word("return");
  }

  Operand parse_operand(bool allow_int) {
    const auto& token = peek();
    if (token.kind == TokenKind::String) {
      return Operand::literal(advance().text);
    }
    if (token.kind == TokenKind::Word && is_identifier(token.text)) {
      return Operand::variable(advance().text);
    }
    if (allow_int && token.kind == TokenKind::Int) {
      return Operand::integer(expect_int());
    }
    fail(allow_int ? "string literal, variable, or integer"
                   : "string literal or variable");
  }

  std::vector<Operand> parse_args() {
    std::vector<Operand> args;
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        args.push_back(parse_operand(true));
        if (!is_punct(",")) {
          break;
        }
        advance();
      }
    }
    expect_punct(")");
    return args;
  }

  Statement parse_statement() {
    if (peek().kind != TokenKind::Word) {
      fail("statement or terminator");
    }
    const std::string keyword = peek().text;
    if (keyword == "def") {
      advance();
      auto var = expect_identifier("variable name");
      expect_punct("=");
      if (is_word("param")) {
        advance();
        auto param = expect_identifier("parameter name");
        return Statement{DefStringFromParam{var, param}};
      }
      return Statement{DefString{var, expect_string()}};
    }
    if (keyword == "array") {
      advance();
      DefArray def;
      def.var = expect_identifier("variable name");
      expect_punct("=");
      expect_punct("[");
      while (true) {
        def.elements.push_back(parse_operand(false));
        if (!is_punct(",")) {
          break;
        }
        advance();
      }
      expect_punct("]");
      return Statement{std::move(def)};
    }
    if (keyword == "store") {
      advance();
      ArrayStore store;
      store.var = expect_identifier("variable name");
      expect_punct("[");
      store.index = expect_int();
      expect_punct("]");
      expect_punct("=");
      store.source = parse_operand(false);
      return Statement{std::move(store)};
    }
    if (keyword == "call") {
      advance();
      CallMethod call;
      call.target = expect_identifier("method name");
      call.args = parse_args();
      return Statement{std::move(call)};
    }
    if (keyword == "dangerous") {
      advance();
      if (peek().kind != TokenKind::ApiSig) {
        fail("API signature in angle brackets");
      }
      CallDangerous call;
      call.api = advance().text;
      call.args = parse_args();
      return Statement{std::move(call)};
    }
    if (keyword == "check") {
      advance();
      return Statement{CallCheck{parse_operand(false)}};
    }
    if (keyword == "request") {
      advance();
      CallRequest request;
      request.permissions = parse_operand(false);
      request.request_code = expect_int();
      return Statement{std::move(request)};
    }
    if (keyword == "explain") {
      advance();
      return Statement{CallExplain{parse_operand(false)}};
    }
    if (keyword == "launch") {
      advance();
      return Statement{LaunchComponent{expect_dotted("component name")}};
    }
    if (keyword == "trycatch_security") {
      advance();
      expect_punct("{");
      TryCatchSecurity region;
      while (!is_punct("}")) {
        if (is_terminator()) {
          fail("statement inside trycatch_security");
        }
        region.body.push_back(parse_statement());
      }
      expect_punct("}");
      return Statement{std::move(region)};
    }
    fail("statement or terminator");
  }

  Terminator parse_terminator() {
    if (is_word("return")) {
      advance();
      return Return{};
    }
    if (is_word("goto")) {
      advance();
      return Goto{expect_identifier("block id")};
    }
    expect_keyword("branch");
    Branch branch;
    if (is_word("sdk")) {
      advance();
      if (peek().kind != TokenKind::Cmp) {
        fail("comparison operator");
      }
      RvCond cond;
      cond.op = *cmp_op_from_string(advance().text);
      cond.value = expect_int();
      branch.cond = cond;
    } else if (is_word("check_granted")) {
      advance();
      branch.cond = CheckResultCond{};
    } else if (is_word("grant_result")) {
      advance();
      branch.cond = GrantResultCond{expect_dotted("permission name")};
    } else {
      fail("'sdk', 'check_granted', or 'grant_result'");
    }
    branch.if_true = expect_identifier("block id");
    branch.if_false = expect_identifier("block id");
    return branch;
  }

 public:
  std::vector<AirDiagnostic> invariant_errors_;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

} // namespace

AppModel parse_app(std::string_view text, int lav) {
  AppModel app;
  std::vector<AirDiagnostic> diagnostics;
  try {
    Parser parser(Lexer(text).run());
    app = parser.parse();
    diagnostics = std::move(parser.invariant_errors_);
  } catch (const SyntaxFailure& failure) {
    throw AirError({failure.diagnostic});
  }
  auto semantic = validate_app(app, lav);
  diagnostics.insert(diagnostics.end(), semantic.begin(), semantic.end());
  if (!diagnostics.empty()) {
    throw AirError(std::move(diagnostics));
  }
  return app;
}

} // namespace arpcheck
