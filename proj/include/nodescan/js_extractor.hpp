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

#ifndef NODESCAN_JS_EXTRACTOR_HPP
#define NODESCAN_JS_EXTRACTOR_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nodescan/construct.hpp"
#include "nodescan/digest.hpp"
#include "nodescan/error.hpp"
#include "nodescan/js_lexer.hpp"

namespace nodescan {

struct ParseError {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  std::string message;

  bool operator==(const ParseError&) const = default;
};

/// One JavaScript file addressed within its package.
struct SourceModule {
  Fqn package_root;
  std::vector<std::string> relative_path;  // directories, then the file stem
  std::string source_text;
};

struct ExtractionResult {
  std::vector<Construct> constructs;  // document order, MODU first
  std::vector<ParseError> parse_errors;
};

/// Escapes a path-derived name so it is a legal FQN segment: '%' and '.'
/// become %25 and %2E.
inline std::string escape_segment(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '%') out += "%25";
    else if (c == '.') out += "%2E";
    else out.push_back(c);
  }
  return out;
}

inline bool is_js_source(std::string_view filename) {
  for (std::string_view ext : {".js", ".mjs", ".cjs"}) {
    if (filename.size() > ext.size() &&
        filename.substr(filename.size() - ext.size()) == ext) {
      return true;
    }
  }
  return false;
}

/// "src/node.js" -> {"src", "node"}.
inline std::vector<std::string> module_path_segments(std::string_view relative_file) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= relative_file.size()) {
    const std::size_t slash = relative_file.find('/', pos);
    const std::size_t end = slash == std::string_view::npos ? relative_file.size() : slash;
    if (end > pos) parts.emplace_back(relative_file.substr(pos, end - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  if (!parts.empty()) {
    std::string& stem = parts.back();
    for (std::string_view ext : {".js", ".mjs", ".cjs"}) {
      if (stem.size() > ext.size() && std::string_view(stem).substr(stem.size() - ext.size()) == ext) {
        stem.resize(stem.size() - ext.size());
        break;
      }
    }
  }
  for (auto& p : parts) p = escape_segment(p);
  return parts;
}

/// Hands out unique rendered FQNs. Later claims on a taken name get a
/// "#L<line>" suffix on their last segment.
class FqnRegistry {
 public:
  void reserve(const Fqn& fqn) { taken_.insert(fqn.render()); }

  Fqn claim(const Fqn& candidate, std::uint32_t line, std::uint32_t col) {
    if (taken_.insert(candidate.render()).second) return candidate;
    const std::string base = candidate.last() + "#L" + std::to_string(line);
    Fqn alt = candidate.with_last(base);
    if (taken_.insert(alt.render()).second) return alt;
    const std::string with_col = base + ":C" + std::to_string(col);
    alt = candidate.with_last(with_col);
    for (int n = 2; !taken_.insert(alt.render()).second; ++n) {
      alt = candidate.with_last(with_col + "#" + std::to_string(n));
    }
    return alt;
  }

 private:
  std::set<std::string> taken_;
};

namespace js::detail {

inline bool is_statement_keyword(std::string_view w) {
  for (std::string_view kw : {"function", "class", "var", "let", "const", "import", "export",
                              "if", "for", "while", "do", "try", "switch", "return", "throw"}) {
    if (w == kw) return true;
  }
  return false;
}

struct FunctionShape {
  std::size_t first = 0;        // first token of the expression
  std::size_t end = 0;          // one past the last token
  std::size_t params_open = 0;  // '(' or the lone parameter identifier
  std::size_t params_close = 0;
  bool single_param = false;
  std::size_t body_first = 0;
  std::size_t body_last = 0;  // inclusive
  std::optional<std::size_t> name;
};

class ModuleParser {
 public:
  ModuleParser(const SourceModule& sm, FqnRegistry& registry)
      : sm_(sm), src_(sm.source_text), index_(src_), registry_(registry) {}

  ExtractionResult run() {
    Lexer lexer(src_);
    toks_ = lexer.tokenize();
    for (const auto& e : lexer.errors()) error_at_offset(e.offset, e.message);
    match_braces();

    emit_module();
    std::size_t k = 0;
    while (!at_end(k)) {
      const std::size_t next = statement(k);
      k = std::max(next, k + 1);
    }
    return std::move(out_);
  }

 private:
  struct Failure {
    std::size_t token;
    std::string message;
  };

  // -- token helpers -------------------------------------------------------

  const Token& tok(std::size_t k) const { return toks_[std::min(k, toks_.size() - 1)]; }
  bool at_end(std::size_t k) const { return tok(k).kind == TokenKind::kEnd; }
  static constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);

  void match_braces() {
    match_.assign(toks_.size(), kNoMatch);
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < toks_.size(); ++k) {
      const Token& t = toks_[k];
      if (t.kind != TokenKind::kPunct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") {
        stack.push_back(k);
      } else if (t.text == ")" || t.text == "]" || t.text == "}") {
        const char open = t.text == ")" ? '(' : t.text == "]" ? '[' : '{';
        // Pop through mismatched openers so one stray bracket does not
        // unbalance the rest of the file.
        auto it = std::find_if(stack.rbegin(), stack.rend(),
                               [&](std::size_t o) { return toks_[o].text[0] == open; });
        if (it == stack.rend()) {
          error_at(k, "unmatched '" + std::string(t.text) + "'");
          continue;
        }
        const std::size_t o = *it;
        stack.erase(std::next(it).base(), stack.end());
        match_[o] = k;
        match_[k] = o;
      }
    }
    for (std::size_t o : stack) error_at(o, "unclosed '" + std::string(toks_[o].text) + "'");
  }

  bool is_opener(std::size_t k) const {
    const Token& t = tok(k);
    return t.kind == TokenKind::kPunct && (t.text == "(" || t.text == "[" || t.text == "{");
  }
  bool is_closer(std::size_t k) const {
    const Token& t = tok(k);
    return t.kind == TokenKind::kPunct && (t.text == ")" || t.text == "]" || t.text == "}");
  }

  // Whether a line break between tokens prev and next leaves the expression
  // open (no automatic semicolon).
  bool continues(std::size_t prev, std::size_t next) const {
    const Token& p = tok(prev);
    const Token& n = tok(next);
    if (p.kind == TokenKind::kPunct) {
      if (p.text != ")" && p.text != "]" && p.text != "}" && p.text != "++" && p.text != "--") return true;
    } else if (p.kind == TokenKind::kIdentifier) {
      for (std::string_view kw : {"new", "typeof", "void", "delete", "in", "instanceof", "of",
                                  "extends", "await", "case"}) {
        if (p.text == kw) return true;
      }
    }
    if (n.kind == TokenKind::kPunct) {
      if (n.text == "++" || n.text == "--" || n.text == "!" || n.text == "~" || n.text == "{") return false;
      return true;
    }
    if (n.kind == TokenKind::kIdentifier) return n.text == "instanceof" || n.text == "in";
    return false;
  }

  /// First token past an expression starting at k.
  std::size_t skip_expression(std::size_t k, bool stop_at_comma) const {
    const std::size_t start = k;
    while (!at_end(k)) {
      const Token& t = tok(k);
      if (k > start && t.newline_before && !continues(k - 1, k)) return k;
      if (t.kind == TokenKind::kPunct) {
        if (t.text == ";" || (stop_at_comma && t.text == ",")) return k;
        if (is_closer(k)) return k;
        if (is_opener(k)) {
          if (match_[k] == kNoMatch) return toks_.size() - 1;
          k = match_[k] + 1;
          continue;
        }
      }
      ++k;
    }
    return k;
  }

  std::size_t skip_parens_then_statement(std::size_t k) const {
    if (tok(k).is("(") && match_[k] != kNoMatch) return skip_statement(match_[k] + 1);
    return skip_expression(k, false);
  }

  std::size_t skip_block(std::size_t k) const {
    if (tok(k).is("{") && match_[k] != kNoMatch) return match_[k] + 1;
    return skip_statement(k);
  }

  /// Structured skip over one statement we do not extract from.
  std::size_t skip_statement(std::size_t k) const {
    const Token& t = tok(k);
    if (at_end(k)) return k;
    if (t.is(";")) return k + 1;
    if (t.is("{")) return match_[k] == kNoMatch ? toks_.size() - 1 : match_[k] + 1;
    if (t.is_ident()) {
      if (t.text == "if") {
        std::size_t e = skip_parens_then_statement(k + 1);
        if (tok(e).is("else")) e = skip_statement(e + 1);
        return e;
      }
      if (t.text == "for" || t.text == "while" || t.text == "with") {
        std::size_t p = k + 1;
        if (tok(p).is("await")) ++p;
        return skip_parens_then_statement(p);
      }
      if (t.text == "switch") {
        std::size_t p = k + 1;
        if (tok(p).is("(") && match_[p] != kNoMatch) p = match_[p] + 1;
        return skip_block(p);
      }
      if (t.text == "try") {
        std::size_t e = skip_block(k + 1);
        if (tok(e).is("catch")) {
          ++e;
          if (tok(e).is("(") && match_[e] != kNoMatch) e = match_[e] + 1;
          e = skip_block(e);
        }
        if (tok(e).is("finally")) e = skip_block(e + 1);
        return e;
      }
      if (t.text == "do") {
        std::size_t e = skip_statement(k + 1);
        if (tok(e).is("while")) {
          e = skip_expression(e + 1, false);
          if (tok(e).is(";")) ++e;
        }
        return e;
      }
      if (tok(k + 1).is(":") && !t.is("default")) return skip_statement(k + 2);
    }
    std::size_t e = skip_expression(k, false);
    if (tok(e).is(";")) ++e;
    return e;
  }

  /// Brace-balanced scan to the next plausible top-level statement boundary.
  std::size_t recover(std::size_t from) const {
    std::size_t k = from;
    while (!at_end(k)) {
      const Token& t = tok(k);
      if (k > from && t.newline_before && t.is_ident() && is_statement_keyword(t.text)) return k;
      if (t.is(";")) return k + 1;
      if (is_opener(k) && match_[k] != kNoMatch) {
        k = match_[k] + 1;
        continue;
      }
      if (is_closer(k) && match_[k] == kNoMatch) return k + 1;
      ++k;
    }
    return std::max(k, from + 1);
  }

  // -- diagnostics ---------------------------------------------------------

  void error_at_offset(std::uint32_t offset, std::string message) {
    const Position p = index_.at(offset);
    out_.parse_errors.push_back({p.line, p.col, std::move(message)});
  }
  void error_at(std::size_t k, std::string message) { error_at_offset(tok(k).begin, std::move(message)); }

  // -- construct emission --------------------------------------------------

  std::string_view slice(std::size_t first, std::size_t last) const {
    const std::uint32_t b = tok(first).begin;
    const std::uint32_t e = tok(last).end;
    return std::string_view(src_).substr(b, e - b);
  }

  SourceSpan span_of(std::size_t first, std::size_t last) const {
    const Position s = index_.at(tok(first).begin);
    const Position e = index_.last_char(tok(last).begin, tok(last).end);
    return {s.line, s.col, e.line, e.col};
  }

  Fqn emit(ConstructType type, const Fqn& candidate, std::size_t first, std::size_t last,
           std::string_view body, const Fqn& parent) {
    Construct c;
    c.type = type;
    c.span = span_of(first, last);
    c.fqn = registry_.claim(candidate, c.span.start_line, c.span.start_col);
    c.body_digest = normalize_and_digest(body);
    c.parent = parent;
    out_.constructs.push_back(c);
    return out_.constructs.back().fqn;
  }

  void emit_module() {
    if (sm_.relative_path.empty()) throw Error(ErrorCode::kInvalidFqn, "module path is empty");
    Fqn candidate = sm_.package_root;
    for (const auto& seg : sm_.relative_path) candidate = build_fqn(candidate, ConstructType::kModu, seg);
    Construct m;
    m.type = ConstructType::kModu;
    m.span = {1, 1, 1, 1};
    if (!src_.empty()) {
      const Position e = index_.last_char(0, static_cast<std::uint32_t>(src_.size()));
      m.span.end_line = e.line;
      m.span.end_col = e.col;
    }
    m.fqn = registry_.claim(candidate, 1, 1);
    m.body_digest = normalize_and_digest(src_);
    m.parent = m.fqn.parent();
    module_ = m.fqn;
    out_.constructs.push_back(std::move(m));
  }

  Anonymous anon_at(std::size_t k) const {
    const Position p = index_.at(tok(k).begin);
    return {p.line, p.col};
  }

  // -- shapes --------------------------------------------------------------

  std::vector<std::string> params(const FunctionShape& f) const {
    if (f.single_param) return {std::string(tok(f.params_open).text)};
    std::vector<std::string> out;
    std::size_t k = f.params_open + 1;
    while (k < f.params_close) {
      std::size_t part_end = k;
      while (part_end < f.params_close && !tok(part_end).is(",")) {
        part_end = is_opener(part_end) && match_[part_end] != kNoMatch ? match_[part_end] + 1 : part_end + 1;
      }
      std::size_t p = k;
      if (tok(p).is("...")) ++p;
      if (p < part_end) {
        if (tok(p).is("{")) out.emplace_back("{}");
        else if (tok(p).is("[")) out.emplace_back("[]");
        else if (tok(p).is_ident()) out.emplace_back(tok(p).text);
      }
      k = part_end + 1;
    }
    return out;
  }

  // async? function *? name? ( ... ) { ... }
  std::optional<FunctionShape> function_expression(std::size_t k) const {
    FunctionShape f;
    f.first = k;
    if (tok(k).is("async") && tok(k + 1).is("function") && !tok(k + 1).newline_before) ++k;
    if (!tok(k).is("function")) return std::nullopt;
    ++k;
    if (tok(k).is("*")) ++k;
    if (tok(k).is_ident()) f.name = k++;
    if (!tok(k).is("(") || match_[k] == kNoMatch) return std::nullopt;
    f.params_open = k;
    f.params_close = match_[k];
    k = f.params_close + 1;
    if (!tok(k).is("{") || match_[k] == kNoMatch) return std::nullopt;
    f.body_first = k;
    f.body_last = match_[k];
    f.end = f.body_last + 1;
    return f;
  }

  // async? (params | ident) => (block | expression)
  std::optional<FunctionShape> arrow_function(std::size_t k) const {
    FunctionShape f;
    f.first = k;
    if (tok(k).is("async") && !tok(k + 1).newline_before && (tok(k + 1).is("(") || tok(k + 1).is_ident()) &&
        !tok(k + 1).is("function")) {
      std::size_t after = tok(k + 1).is("(") && match_[k + 1] != kNoMatch ? match_[k + 1] + 1 : k + 2;
      if (tok(after).is("=>")) ++k;
    }
    if (tok(k).is("(")) {
      if (match_[k] == kNoMatch) return std::nullopt;
      f.params_open = k;
      f.params_close = match_[k];
      k = f.params_close + 1;
    } else if (tok(k).is_ident()) {
      f.single_param = true;
      f.params_open = f.params_close = k;
      ++k;
    } else {
      return std::nullopt;
    }
    if (!tok(k).is("=>") || tok(k).newline_before) return std::nullopt;
    ++k;
    f.body_first = k;
    if (tok(k).is("{")) {
      if (match_[k] == kNoMatch) return std::nullopt;
      f.body_last = match_[k];
    } else {
      const std::size_t e = skip_expression(k, true);
      if (e == k) return std::nullopt;
      f.body_last = e - 1;
    }
    f.end = f.body_last + 1;
    return f;
  }

  std::optional<FunctionShape> function_or_arrow(std::size_t k) const {
    if (auto f = function_expression(k)) return f;
    return arrow_function(k);
  }

  // Whether the statement (or declarator) ends right at token k.
  bool ends_statement_at(std::size_t k, bool allow_comma) const {
    const Token& t = tok(k);
    if (at_end(k) || t.is(";") || (allow_comma && t.is(","))) return true;
    if (t.is("}") && match_[k] != kNoMatch && match_[k] < k) return true;
    return t.newline_before && k > 0 && !continues(k - 1, k);
  }

  // -- statements ----------------------------------------------------------

  std::size_t statement(std::size_t k) {
    try {
      return statement_or_throw(k);
    } catch (const Failure& f) {
      error_at(f.token, f.message);
      return recover(k);
    } catch (const Error& e) {
      error_at(k, e.what());
      return recover(k);
    }
  }

  std::size_t statement_or_throw(std::size_t k) {
    const Token& t = tok(k);
    if (is_closer(k)) {
      if (match_[k] != kNoMatch) error_at(k, "unexpected '" + std::string(t.text) + "'");
      return k + 1;
    }
    if (!t.is_ident()) return skip_statement(k);

    if (t.text == "import" && !tok(k + 1).is("(") && !tok(k + 1).is(".")) return skip_statement_plain(k);
    if (t.text == "export") return export_statement(k);
    if (t.text == "function" || (t.text == "async" && tok(k + 1).is("function") && !tok(k + 1).newline_before)) {
      return function_declaration(k, /*name_optional=*/false);
    }
    if (t.text == "class") return class_declaration(k, /*name_optional=*/false);
    if (t.text == "var" || t.text == "const" ||
        (t.text == "let" && (tok(k + 1).is_ident() || tok(k + 1).is("[") || tok(k + 1).is("{")))) {
      return variable_declaration(k);
    }
    if (auto e = member_assignment(k)) return *e;
    return skip_statement(k);
  }

  std::size_t skip_statement_plain(std::size_t k) const {
    std::size_t e = skip_expression(k, false);
    if (tok(e).is(";")) ++e;
    return e;
  }

  std::size_t finish_statement(std::size_t k) const {
    if (tok(k).is(";")) return k + 1;
    if (!ends_statement_at(k, false)) throw Failure{k, "expected ';' before '" + std::string(tok(k).text) + "'"};
    return k;
  }

  std::size_t export_statement(std::size_t k) {
    std::size_t p = k + 1;
    if (tok(p).is("default")) {
      ++p;
      if (tok(p).is("function") || (tok(p).is("async") && tok(p + 1).is("function"))) {
        return function_declaration(p, /*name_optional=*/true);
      }
      if (tok(p).is("class")) return class_declaration(p, /*name_optional=*/true);
      if (auto f = arrow_function(p); f && ends_statement_at(f->end, false)) {
        emit_function(*f, std::nullopt, f->first, {});
        return finish_statement(f->end);
      }
      return skip_statement_plain(p);
    }
    const Token& t = tok(p);
    if (t.is("function") || (t.is("async") && tok(p + 1).is("function"))) return function_declaration(p, false);
    if (t.is("class")) return class_declaration(p, false);
    if (t.is("var") || t.is("let") || t.is("const")) return variable_declaration(p);
    return skip_statement_plain(k);
  }

  void emit_function(const FunctionShape& f, std::optional<std::string> name, std::size_t first,
                     const std::vector<std::string>& path) {
    Fqn parent = module_;
    for (const auto& seg : path) parent = build_fqn(parent, ConstructType::kObjt, seg);
    const auto args = params(f);
    const Fqn candidate = name ? build_fqn(parent, ConstructType::kFunc, *name, args)
                               : build_fqn(parent, ConstructType::kFunc, anon_at(f.first), args);
    emit(ConstructType::kFunc, candidate, first, f.body_last, slice(f.body_first, f.body_last), module_);
  }

  std::size_t function_declaration(std::size_t k, bool name_optional) {
    auto f = function_expression(k);
    if (!f) throw Failure{k, "malformed function declaration"};
    if (!f->name && !name_optional) throw Failure{k, "function declaration requires a name"};
    std::optional<std::string> name;
    if (f->name) name = std::string(tok(*f->name).text);
    emit_function(*f, name, f->first, {});
    return f->end;
  }

  // Base name recorded for `class X extends <heritage>`: the trailing
  // identifier of a member chain, "<expr>" for anything more dynamic.
  std::string heritage_name(std::size_t first, std::size_t last) const {
    if (first > last) return {};
    if (first == last && tok(first).is_ident()) return std::string(tok(first).text);
    if (tok(last).is_ident() && tok(last - 1).is(".")) return std::string(tok(last).text);
    return "<expr>";
  }

  /// `binding` names a class expression after the variable it initializes;
  /// its span then starts at `span_first`.
  std::size_t class_declaration(std::size_t k, bool name_optional,
                                const std::optional<std::string>& binding = std::nullopt,
                                std::optional<std::size_t> span_first = std::nullopt) {
    const std::size_t first = span_first.value_or(k);
    ++k;  // class
    std::optional<std::string> name;
    if (tok(k).is_ident() && !tok(k).is("extends")) name = std::string(tok(k++).text);
    if (binding) name = binding;
    if (!name && !name_optional) throw Failure{k, "class declaration requires a name"};
    std::vector<std::string> base;
    if (tok(k).is("extends")) {
      const std::size_t h = ++k;
      while (!at_end(k) && !tok(k).is("{")) {
        if (is_opener(k) && match_[k] != kNoMatch) k = match_[k] + 1;
        else ++k;
      }
      if (k == h) throw Failure{k, "missing base class after 'extends'"};
      base.push_back(heritage_name(h, k - 1));
    }
    if (!tok(k).is("{") || match_[k] == kNoMatch) throw Failure{k, "expected class body"};
    const std::size_t open = k;
    const std::size_t close = match_[k];
    const Fqn candidate = name ? build_fqn(module_, ConstructType::kClas, *name, base)
                               : build_fqn(module_, ConstructType::kClas, anon_at(first), base);
    const Fqn cls = emit(ConstructType::kClas, candidate, first, close, slice(open, close), module_);
    class_members(open, close, cls);
    return close + 1;
  }

  std::optional<std::string> member_name(std::size_t k) const {
    const Token& t = tok(k);
    switch (t.kind) {
      case TokenKind::kIdentifier:
        return std::string(t.text);
      case TokenKind::kString:
        if (t.text.size() >= 2) {
          std::string raw(t.text.substr(1, t.text.size() - 2));
          if (!raw.empty()) return escape_segment(raw);
        }
        return std::nullopt;
      case TokenKind::kNumber:
        return escape_segment(t.text);
      default:
        return std::nullopt;
    }
  }

  void class_members(std::size_t open, std::size_t close, const Fqn& cls) {
    std::size_t k = open + 1;
    auto modifier = [&](std::string_view word) {
      if (!tok(k).is(word)) return false;
      const Token& n = tok(k + 1);
      return !(n.is("(") || n.is("=") || n.is(";") || n.is("}") || n.newline_before);
    };
    while (k < close) {
      if (tok(k).is(";")) {
        ++k;
        continue;
      }
      const std::size_t first = k;
      bool is_static = false;
      if (modifier("static")) {
        is_static = true;
        ++k;
        if (tok(k).is("{") && match_[k] != kNoMatch) {  // static initialization block
          k = match_[k] + 1;
          continue;
        }
      }
      if (modifier("async")) ++k;
      if (tok(k).is("*")) ++k;
      if (modifier("get") || modifier("set")) ++k;

      std::variant<std::string, Anonymous> name = std::string();
      bool computed = false;
      if (tok(k).is("[") && match_[k] != kNoMatch) {
        name = anon_at(k);
        computed = true;
        k = match_[k] + 1;
      } else if (auto n = member_name(k)) {
        name = *n;
        ++k;
      } else {
        error_at(k, "unexpected '" + std::string(tok(k).text) + "' in class body");
        k = std::min(close, std::max(skip_expression(k, false), k + 1));
        continue;
      }

      if (tok(k).is("(") && match_[k] != kNoMatch) {
        FunctionShape f;
        f.params_open = k;
        f.params_close = match_[k];
        k = f.params_close + 1;
        if (!tok(k).is("{") || match_[k] == kNoMatch) {
          error_at(k, "expected method body");
          k = std::min(close, std::max(skip_expression(k, false), k + 1));
          continue;
        }
        f.body_first = k;
        f.body_last = match_[k];
        const bool ctor = !is_static && !computed && std::get<std::string>(name) == "constructor";
        const ConstructType type = ctor ? ConstructType::kCons : ConstructType::kMeth;
        emit(type, build_fqn(cls, type, name, params(f)), first, f.body_last,
             slice(f.body_first, f.body_last), cls);
        k = f.body_last + 1;
        continue;
      }
      // Field declaration, with or without an initializer.
      k = std::min(close, skip_expression(k, false));
      if (tok(k).is(";")) ++k;
    }
  }

  std::size_t variable_declaration(std::size_t k) {
    ++k;  // var / let / const
    while (true) {
      const std::size_t target = k;
      std::optional<std::string> name;
      if (tok(k).is_ident()) {
        name = std::string(tok(k).text);
        ++k;
      } else if ((tok(k).is("{") || tok(k).is("[")) && match_[k] != kNoMatch) {
        k = match_[k] + 1;
      } else {
        throw Failure{k, "expected binding name"};
      }
      if (tok(k).is("=")) {
        const std::size_t init = k + 1;
        const std::size_t end = skip_expression(init, true);
        if (end == init) throw Failure{init, "missing initializer"};
        if (name) classify_initializer(*name, target, init, end);
        k = end;
      }
      if (!tok(k).is(",")) break;
      ++k;
    }
    return finish_statement(k);
  }

  void classify_initializer(const std::string& name, std::size_t target, std::size_t init, std::size_t end) {
    if (tok(init).is("{") && match_[init] == end - 1) {
      emit(ConstructType::kObjt, build_fqn(module_, ConstructType::kObjt, name), target, end - 1,
           slice(init, end - 1), module_);
      return;
    }
    if (tok(init).is("class")) {
      if (class_extent(init) == end) class_declaration(init, true, name, target);
      return;
    }
    if (auto f = function_or_arrow(init); f && f->end == end) emit_function(*f, name, target, {});
  }

  /// One past the closing brace of the class starting at `k`, or `k` when
  /// the class is malformed.
  std::size_t class_extent(std::size_t k) const {
    std::size_t j = k + 1;
    while (!at_end(j) && !tok(j).is("{")) {
      if (is_opener(j) && match_[j] != kNoMatch) j = match_[j] + 1;
      else ++j;
    }
    return tok(j).is("{") && match_[j] != kNoMatch ? match_[j] + 1 : k;
  }

  // Parses `a.b.c =` at k; returns the path and the index past '='.
  std::optional<std::pair<std::vector<std::string>, std::size_t>> assignment_target(std::size_t k) const {
    if (!tok(k).is_ident() || is_statement_keyword(tok(k).text)) return std::nullopt;
    std::vector<std::string> path{std::string(tok(k).text)};
    ++k;
    while (true) {
      if (tok(k).is(".") && tok(k + 1).is_ident()) {
        path.emplace_back(tok(k + 1).text);
        k += 2;
      } else if (tok(k).is("[") && tok(k + 1).kind == TokenKind::kString && tok(k + 2).is("]")) {
        auto key = member_name(k + 1);
        if (!key) return std::nullopt;
        path.push_back(*key);
        k += 3;
      } else {
        break;
      }
    }
    if (!tok(k).is("=")) return std::nullopt;
    return std::pair{std::move(path), k + 1};
  }

  std::optional<std::size_t> member_assignment(std::size_t k) {
    std::vector<std::vector<std::string>> paths;
    std::size_t rhs = k;
    while (auto target = assignment_target(rhs)) {
      paths.push_back(std::move(target->first));
      rhs = target->second;
    }
    if (paths.empty()) return std::nullopt;
    auto f = function_or_arrow(rhs);
    if (!f || !ends_statement_at(f->end, false)) return std::nullopt;
    for (auto& path : paths) {
      std::string last = std::move(path.back());
      path.pop_back();
      emit_function(*f, last, k, path);
    }
    return finish_statement(f->end);
  }

  const SourceModule& sm_;
  std::string_view src_;
  LineIndex index_;
  FqnRegistry& registry_;
  std::vector<Token> toks_;
  std::vector<std::size_t> match_;
  Fqn module_;
  ExtractionResult out_;
};

}  // namespace js::detail

/// Extracts the constructs of one module, registering names in `registry` so
/// callers extracting a whole package keep FQNs unique across files.
inline ExtractionResult parse_module(const SourceModule& sm, FqnRegistry& registry) {
  return js::detail::ModuleParser(sm, registry).run();
}

inline ExtractionResult parse_module(const SourceModule& sm) {
  FqnRegistry registry;
  registry.reserve(sm.package_root);
  return parse_module(sm, registry);
}

// ---------------------------------------------------------------------------
// Package traversal
// ---------------------------------------------------------------------------

struct FileDiagnostic {
  std::string file;  // path relative to the package directory
  std::string module_fqn;
  ParseError error;
};

struct PackageExtraction {
  std::vector<Construct> constructs;
  std::vector<FileDiagnostic> diagnostics;
};

/// Relative paths ('/'-separated) of every JavaScript file under `dir`,
/// skipping nested node_modules, in byte-lexicographic order.
inline std::vector<std::string> list_js_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  std::error_code ec;
  fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot read directory " + dir.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const fs::directory_entry& entry = *it;
    const std::string name = entry.path().filename().string();
    std::error_code sec;
    if (entry.is_directory(sec)) {
      if (name == "node_modules" || entry.is_symlink(sec)) it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(sec) || !is_js_source(name)) continue;
    files.push_back(fs::relative(entry.path(), dir).generic_string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

/// Extracts every construct of a package directory: one PACK per directory
/// that (transitively) holds a JavaScript file, then each file's constructs in
/// path order.
inline PackageExtraction extract_package(const std::filesystem::path& package_dir, const Fqn& package_root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(package_dir, ec)) {
    throw Error(ErrorCode::kIo, "package directory does not exist: " + package_dir.string());
  }
  const std::vector<std::string> files = list_js_files(package_dir);

  std::set<std::vector<std::string>> dirs{{}};
  for (const auto& f : files) {
    auto segs = module_path_segments(f);
    segs.pop_back();
    while (!segs.empty()) {
      dirs.insert(segs);
      segs.pop_back();
    }
  }

  PackageExtraction out;
  FqnRegistry registry;
  for (const auto& d : dirs) {
    Construct pack;
    pack.type = ConstructType::kPack;
    pack.fqn = package_root;
    for (const auto& seg : d) pack.fqn = build_fqn(pack.fqn, ConstructType::kPack, seg);
    pack.body_digest = empty_digest();
    if (!d.empty()) pack.parent = pack.fqn.parent();
    registry.reserve(pack.fqn);
    out.constructs.push_back(std::move(pack));
  }

  for (const auto& f : files) {
    SourceModule sm{package_root, module_path_segments(f), {}};
    auto text = read_file(package_dir / f);
    if (text) sm.source_text = std::move(*text);
    ExtractionResult r = parse_module(sm, registry);
    const std::string module_fqn = r.constructs.front().fqn.render();
    if (!text) out.diagnostics.push_back({f, module_fqn, {1, 1, "unreadable file"}});
    for (auto& e : r.parse_errors) out.diagnostics.push_back({f, module_fqn, std::move(e)});
    std::move(r.constructs.begin(), r.constructs.end(), std::back_inserter(out.constructs));
  }
  return out;
}

}  // namespace nodescan

#endif  // NODESCAN_JS_EXTRACTOR_HPP
