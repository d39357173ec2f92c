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
#include <sstream>

namespace arpcheck {

StubSyntaxError::StubSyntaxError(int line, const std::string& message)
    : MappingError("stub line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string word;
  while (in >> word) {
    words.push_back(word);
  }
  return words;
}

// `Manifest.permission.CAMERA`, `"android.permission.CAMERA"` and `CAMERA`
// all name the same permission.
std::string permission_name(std::string_view ref) {
  std::string text = trim(ref);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = text.substr(1, text.size() - 2);
  }
  auto cut = text.find_last_of(".#");
  if (cut != std::string::npos) {
    text = text.substr(cut + 1);
  }
  return text;
}

class StubParser {
 public:
  StubParser(std::string_view text, int level) : text_(text) {
    mapping_.level = level;
  }

  LevelMapping run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      handle_line(trim(raw));
    }
    if (in_javadoc_) {
      throw StubSyntaxError(javadoc_line_, "unterminated comment");
    }
    if (!annotation_.empty()) {
      throw StubSyntaxError(annotation_line_, "unterminated annotation");
    }
    if (pending_) {
      throw StubSyntaxError(
          pending_line_, "permission tag not followed by a method");
    }
    for (const auto& [api, requirement] : mapping_.apis) {
      for (const auto& permission : requirement.permissions) {
        if (!mapping_.permissions.count(permission)) {
          throw UnknownPermission(permission, mapping_.level);
        }
      }
    }
    return mapping_;
  }

 private:
  void handle_line(const std::string& line) {
    if (in_javadoc_) {
      javadoc_ += " " + line;
      if (line.find("*/") != std::string::npos) {
        finish_javadoc();
      }
      return;
    }
    if (!annotation_.empty()) {
      annotation_ += " " + line;
      if (balanced(annotation_)) {
        finish_annotation();
      }
      return;
    }
    if (line.empty() || starts_with(line, "//") || line == "}" ||
        starts_with(line, "import ")) {
      return;
    }
    if (starts_with(line, "package ")) {
      auto words = split_words(line.substr(8));
      if (words.empty()) {
        throw StubSyntaxError(line_, "package name expected");
      }
      package_ = words.front();
      if (!package_.empty() && package_.back() == ';') {
        package_.pop_back();
      }
      return;
    }
    if (starts_with(line, "/**") || starts_with(line, "/*")) {
      in_javadoc_ = true;
      javadoc_line_ = line_;
      javadoc_ = line;
      if (line.find("*/", 2) != std::string::npos) {
        finish_javadoc();
      }
      return;
    }
    if (starts_with(line, "@RequiresPermission")) {
      annotation_ = line;
      annotation_line_ = line_;
      if (balanced(annotation_)) {
        finish_annotation();
      }
      return;
    }
    if (starts_with(line, "@")) {
      return;
    }
    if (starts_with(line, "permission ")) {
      parse_permission(line);
      return;
    }
    auto words = split_words(line);
    auto class_at = std::find(words.begin(), words.end(), "class");
    if (class_at != words.end()) {
      if (class_at + 1 == words.end()) {
        throw StubSyntaxError(line_, "class name expected");
      }
      class_name_ = *(class_at + 1);
      if (!package_.empty()) {
        class_name_ = package_ + "." + class_name_;
      }
      return;
    }
    if (line.find('(') != std::string::npos) {
      parse_method(line);
      return;
    }
    throw StubSyntaxError(line_, "unrecognized line '" + line + "'");
  }

  static bool balanced(const std::string& text) {
    int depth = 0;
    bool opened = false;
    for (char c : text) {
      if (c == '(') {
        ++depth;
        opened = true;
      } else if (c == ')') {
        --depth;
      }
    }
    return opened && depth == 0;
  }

  void parse_permission(const std::string& line) {
    auto words = split_words(line);
    if (words.size() != 3) {
      throw StubSyntaxError(line_, "expected 'permission NAME LEVEL'");
    }
    auto level = protection_level_from_string(words[2]);
    if (!level) {
      throw StubSyntaxError(line_, "unknown protection level '" + words[2] + "'");
    }
    mapping_.permissions[permission_name(words[1])] = *level;
  }

  void finish_javadoc() {
    in_javadoc_ = false;
    static constexpr std::string_view kTag = "{@link";
    std::set<std::string> linked;
    std::size_t at = 0;
    while ((at = javadoc_.find(kTag, at)) != std::string::npos) {
      auto close = javadoc_.find('}', at);
      if (close == std::string::npos) {
        throw StubSyntaxError(javadoc_line_, "unterminated @link tag");
      }
      auto target = trim(std::string_view(javadoc_).substr(
          at + kTag.size(), close - at - kTag.size()));
      // Only links into the permission constants carry a requirement.
      if (target.find("permission#") != std::string::npos) {
        linked.insert(permission_name(split_words(target).front()));
      }
      at = close;
    }
    if (!linked.empty()) {
      link_ = Requirement{RequirementMode::AnyOf, std::move(linked)};
      mark_pending(javadoc_line_);
    }
  }

  void finish_annotation() {
    auto open = annotation_.find('(');
    auto close = annotation_.rfind(')');
    auto body = trim(
        std::string_view(annotation_).substr(open + 1, close - open - 1));
    annotation_.clear();
    Requirement requirement;
    auto eq = body.find('=');
    if (eq != std::string::npos) {
      auto key = trim(std::string_view(body).substr(0, eq));
      if (key == "anyOf") {
        requirement.mode = RequirementMode::AnyOf;
      } else if (key == "allOf") {
        requirement.mode = RequirementMode::AllOf;
      } else if (key != "value") {
        throw StubSyntaxError(
            annotation_line_, "unknown annotation key '" + key + "'");
      }
      body = trim(std::string_view(body).substr(eq + 1));
    }
    if (!body.empty() && body.front() == '{') {
      if (body.back() != '}') {
        throw StubSyntaxError(annotation_line_, "unbalanced '{'");
      }
      body = body.substr(1, body.size() - 2);
    }
    std::istringstream items(body);
    std::string item;
    while (std::getline(items, item, ',')) {
      auto name = permission_name(item);
      if (name.empty()) {
        throw StubSyntaxError(annotation_line_, "empty permission reference");
      }
      requirement.permissions.insert(name);
    }
    if (requirement.permissions.empty()) {
      throw StubSyntaxError(annotation_line_, "annotation names no permission");
    }
    annotated_ = std::move(requirement);
    mark_pending(annotation_line_);
  }

  void mark_pending(int line) {
    if (!pending_) {
      pending_ = true;
      pending_line_ = line;
    }
  }

  void parse_method(const std::string& line) {
    auto open = line.find('(');
    auto close = line.find(')', open);
    if (close == std::string::npos) {
      throw StubSyntaxError(line_, "unterminated parameter list");
    }
    auto head = split_words(line.substr(0, open));
    if (head.empty()) {
      throw StubSyntaxError(line_, "method name expected");
    }
    std::string name = head.back();
    if (name.find('.') == std::string::npos) {
      if (class_name_.empty()) {
        throw StubSyntaxError(line_, "method '" + name + "' outside a class");
      }
      name = class_name_ + "." + name;
    }
    std::string signature = name + "(";
    std::istringstream params(line.substr(open + 1, close - open - 1));
    std::string param;
    bool first = true;
    while (std::getline(params, param, ',')) {
      auto words = split_words(param);
      if (words.empty()) {
        throw StubSyntaxError(line_, "empty parameter");
      }
      signature += (first ? "" : ",") + words.front();
      first = false;
    }
    signature += ")";

    if (annotated_) {
      mapping_.apis[signature] = *annotated_;
      mapping_.unprotected.erase(signature);
    } else if (link_) {
      mapping_.apis[signature] = *link_;
      mapping_.unprotected.erase(signature);
    } else if (!mapping_.apis.count(signature)) {
      mapping_.unprotected.insert(signature);
    }
    annotated_.reset();
    link_.reset();
    pending_ = false;
  }

  std::string_view text_;
  LevelMapping mapping_;
  int line_ = 0;
  std::string package_;
  std::string class_name_;

  bool in_javadoc_ = false;
  int javadoc_line_ = 0;
  std::string javadoc_;

  std::string annotation_;
  int annotation_line_ = 0;

  std::optional<Requirement> annotated_;
  std::optional<Requirement> link_;
  bool pending_ = false;
  int pending_line_ = 0;
};

} // namespace

LevelMapping parse_stubs(std::string_view text, int level) {
  if (level < kMinLevel) {
    throw MappingError("stub level " + std::to_string(level) + " below " +
        std::to_string(kMinLevel));
  }
  return StubParser(text, level).run();
}

} // namespace arpcheck
