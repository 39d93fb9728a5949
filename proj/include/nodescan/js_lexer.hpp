// Copyright 2026 The nodescan Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NODESCAN_JS_LEXER_HPP
#define NODESCAN_JS_LEXER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nodescan::js {

enum class TokenKind : std::uint8_t {
  kIdentifier,  // identifiers, keywords and #private names
  kPunct,
  kString,
  kTemplate,  // whole template literal, substitutions included
  kNumber,
  kRegex,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string_view text;
  std::uint32_t begin = 0;  // byte offset
  std::uint32_t end = 0;    // one past the last byte
  bool newline_before = false;

  bool is(std::string_view s) const {
    return (kind == TokenKind::kPunct || kind == TokenKind::kIdentifier) && text == s;
  }
  bool is_ident() const { return kind == TokenKind::kIdentifier; }
};

struct LexError {
  std::uint32_t offset = 0;
  std::string message;
};

struct Position {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
};

/// Maps byte offsets to 1-based line/column. Columns count code points, not
/// bytes, so non-ASCII text earlier on a line does not skew them.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::uint32_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Position at(std::uint32_t offset) const {
    offset = std::min<std::uint32_t>(offset, static_cast<std::uint32_t>(text_.size()));
    const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const auto line = static_cast<std::uint32_t>(it - line_starts_.begin());
    std::uint32_t col = 1;
    for (std::uint32_t i = line_starts_[line - 1]; i < offset; ++i) {
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    }
    return {line, col};
  }

  /// Position of the last character of a non-empty range [begin, end).
  Position last_char(std::uint32_t begin, std::uint32_t end) const {
    if (end <= begin) return at(begin);
    std::uint32_t last = end - 1;
    while (last > begin && (static_cast<unsigned char>(text_[last]) & 0xC0) == 0x80) --last;
    return at(last);
  }

 private:
  std::string_view text_;
  std::vector<std::uint32_t> line_starts_;
};

namespace detail {

inline bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
inline bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Ordered longest first so the first prefix match is the maximal munch.
inline constexpr std::array<std::string_view, 52> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "**",  "<<",  ">>",
    "{",    "}",   "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "+",
    "-",    "*",   "%",   "&",   "|",   "^",   "!",   "~"};

inline bool keyword_allows_regex(std::string_view word) {
  for (std::string_view kw : {"return", "typeof", "case", "in", "of", "void", "delete",
                              "throw", "new", "else", "do", "instanceof", "yield", "await"}) {
    if (word == kw) return true;
  }
  return false;
}

}  // namespace detail

/// Tokenizer for the ECMAScript subset the extractor understands. Never fails:
/// malformed input produces LexErrors and the scan continues.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> tokens;
    if (src_.substr(0, 2) == "#!") {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }
    while (true) {
      const bool nl = skip_trivia();
      Token tok;
      tok.newline_before = nl;
      tok.begin = static_cast<std::uint32_t>(pos_);
      if (pos_ >= src_.size()) {
        tok.kind = TokenKind::kEnd;
        tok.end = tok.begin;
        tokens.push_back(tok);
        break;
      }
      tok.kind = scan_token(tokens.empty() ? nullptr : &tokens.back());
      tok.end = static_cast<std::uint32_t>(pos_);
      tok.text = src_.substr(tok.begin, tok.end - tok.begin);
      tokens.push_back(tok);
    }
    return tokens;
  }

  const std::vector<LexError>& errors() const { return errors_; }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void error(std::size_t at, std::string msg) {
    errors_.push_back({static_cast<std::uint32_t>(at), std::move(msg)});
  }

  // Skips whitespace and comments; reports whether a line break was crossed.
  bool skip_trivia() {
    bool newline = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        newline = true;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        const std::size_t start = pos_;
        const std::size_t close = src_.find("*/", pos_ + 2);
        const std::size_t stop = close == std::string_view::npos ? src_.size() : close + 2;
        if (src_.substr(pos_, stop - pos_).find('\n') != std::string_view::npos) newline = true;
        if (close == std::string_view::npos) error(start, "unterminated block comment");
        pos_ = stop;
      } else if (static_cast<unsigned char>(c) == 0xE2 && peek(1) == '\x80' &&
                 (peek(2) == '\xA8' || peek(2) == '\xA9')) {
        newline = true;  // U+2028 / U+2029
        pos_ += 3;
      } else if (static_cast<unsigned char>(c) == 0xEF && peek(1) == '\xBB' && peek(2) == '\xBF') {
        pos_ += 3;  // BOM
      } else if (static_cast<unsigned char>(c) == 0xC2 && peek(1) == '\xA0') {
        pos_ += 2;  // NBSP
      } else {
        break;
      }
    }
    return newline;
  }

  bool regex_allowed(const Token* prev) const {
    if (prev == nullptr) return true;
    switch (prev->kind) {
      case TokenKind::kIdentifier:
        return detail::keyword_allows_regex(prev->text);
      case TokenKind::kPunct:
        return !(prev->text == ")" || prev->text == "]" || prev->text == "}" ||
                 prev->text == "++" || prev->text == "--");
      default:
        return false;
    }
  }

  TokenKind scan_token(const Token* prev) {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (detail::ident_start(c) || (c == '#' && detail::ident_start(static_cast<unsigned char>(peek(1))))) {
      ++pos_;
      while (pos_ < src_.size() && detail::ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return TokenKind::kIdentifier;
    }
    if (detail::digit(c) || (c == '.' && detail::digit(static_cast<unsigned char>(peek(1))))) {
      scan_number();
      return TokenKind::kNumber;
    }
    if (c == '"' || c == '\'') {
      scan_string(static_cast<char>(c));
      return TokenKind::kString;
    }
    if (c == '`') {
      scan_template();
      return TokenKind::kTemplate;
    }
    if (c == '/') {
      if (regex_allowed(prev)) {
        scan_regex();
        return TokenKind::kRegex;
      }
      pos_ += peek(1) == '=' ? 2 : 1;
      return TokenKind::kPunct;
    }
    if (c == '.') {
      pos_ += src_.substr(pos_, 3) == "..." ? 3 : 1;
      return TokenKind::kPunct;
    }
    if (c == '?') {
      if (peek(1) == '.' && !detail::digit(static_cast<unsigned char>(peek(2)))) {
        pos_ += 2;
      } else if (peek(1) == '?') {
        pos_ += peek(2) == '=' ? 3 : 2;
      } else {
        pos_ += 1;
      }
      return TokenKind::kPunct;
    }
    if (c == '=') {
      if (src_.substr(pos_, 3) == "===") pos_ += 3;
      else if (peek(1) == '=' || peek(1) == '>') pos_ += 2;
      else pos_ += 1;
      return TokenKind::kPunct;
    }
    if (c == ':') {
      ++pos_;
      return TokenKind::kPunct;
    }
    for (std::string_view p : detail::kPunctuators) {
      if (src_.substr(pos_, p.size()) == p) {
        pos_ += p.size();
        return TokenKind::kPunct;
      }
    }
    error(pos_, std::string("unexpected character '") + static_cast<char>(c) + "'");
    ++pos_;
    return TokenKind::kPunct;
  }

  void scan_number() {
    const bool radix_prefixed = src_[pos_] == '0' && std::string_view("xXbBoO").find(peek(1)) != std::string_view::npos;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (!radix_prefixed && (c == 'e' || c == 'E') && (peek(1) == '+' || peek(1) == '-')) {
        pos_ += 2;
        continue;
      }
      if (detail::ident_part(static_cast<unsigned char>(c)) || c == '.') {
        ++pos_;
        continue;
      }
      break;
    }
  }

  void scan_string(char quote) {
    const std::size_t start = pos_++;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos_;
      if (c == quote) return;
    }
    pos_ = std::min(pos_, src_.size());
    error(start, "unterminated string literal");
  }

  void scan_template() {
    const std::size_t start = pos_++;
    if (!template_body()) error(start, "unterminated template literal");
  }

  // Consumes a template body up to and including the closing backtick.
  bool template_body() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '`') {
        ++pos_;
        return true;
      }
      if (c == '$' && peek(1) == '{') {
        pos_ += 2;
        if (!substitution()) return false;
        continue;
      }
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
    return false;
  }

  // Consumes a `${ ... }` expression body including the closing brace.
  bool substitution() {
    int depth = 1;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\'' || c == '"') {
        scan_string(c);
        continue;
      }
      if (c == '`') {
        ++pos_;
        if (!template_body()) return false;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        const std::size_t close = src_.find("*/", pos_ + 2);
        pos_ = close == std::string_view::npos ? src_.size() : close + 2;
        continue;
      }
      ++pos_;
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) return true;
    }
    return false;
  }

  void scan_regex() {
    const std::size_t start = pos_++;
    bool in_class = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos_;
      if (c == '[') in_class = true;
      else if (c == ']') in_class = false;
      else if (c == '/' && !in_class) {
        while (pos_ < src_.size() && detail::ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        return;
      }
    }
    pos_ = std::min(pos_, src_.size());
    error(start, "unterminated regular expression");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<LexError> errors_;
};

}  // namespace nodescan::js

#endif  // NODESCAN_JS_LEXER_HPP
