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

#ifndef NODESCAN_DIGEST_HPP
#define NODESCAN_DIGEST_HPP

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "nodescan/error.hpp"

namespace nodescan {

namespace detail {

inline bool is_js_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Decides whether a '/' in code position opens a regular expression literal,
// looking only at the already-emitted text. Keeping the decision a function of
// the output makes normalization idempotent.
inline bool slash_starts_regex(std::string_view emitted) {
  std::size_t end = emitted.size();
  while (end > 0 && is_js_space(emitted[end - 1])) --end;
  if (end == 0) return true;
  const char prev = emitted[end - 1];
  if (is_word_char(prev)) {
    std::size_t begin = end;
    while (begin > 0 && is_word_char(emitted[begin - 1])) --begin;
    const std::string_view word = emitted.substr(begin, end - begin);
    for (std::string_view kw : {"return", "typeof", "case", "in", "of", "void",
                                "delete", "throw", "new", "else", "do",
                                "instanceof", "yield", "await"}) {
      if (word == kw) return true;
    }
    return false;
  }
  static constexpr std::string_view kOperators = "(,=:[!&|?{};+-*%<>~^";
  return kOperators.find(prev) != std::string_view::npos;
}

inline std::string strip_comments(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  const std::size_t n = src.size();
  std::size_t i = 0;
  // Each entry is the brace depth at which a `${` substitution re-entered code.
  std::string template_stack;
  int brace_depth = 0;

  auto copy_quoted = [&](char quote) {
    out.push_back(src[i++]);
    while (i < n) {
      const char c = src[i];
      if (c == '\\' && i + 1 < n) {
        out.push_back(c);
        out.push_back(src[i + 1]);
        i += 2;
        continue;
      }
      if (quote == '`' && c == '$' && i + 1 < n && src[i + 1] == '{') {
        out += "${";
        i += 2;
        template_stack.push_back(static_cast<char>(brace_depth));
        ++brace_depth;
        return;
      }
      out.push_back(c);
      ++i;
      if (c == quote) return;
    }
  };

  while (i < n) {
    const char c = src[i];
    const char next = i + 1 < n ? src[i + 1] : '\0';
    if (c == '/' && next == '/') {
      while (i < n && src[i] != '\n') ++i;
      out.push_back(' ');
      continue;
    }
    if (c == '/' && next == '*') {
      i += 2;
      while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) ++i;
      i = i < n ? i + 2 : n;
      out.push_back(' ');
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') {
      copy_quoted(c);
      continue;
    }
    if (c == '{') {
      ++brace_depth;
    } else if (c == '}') {
      --brace_depth;
      if (!template_stack.empty() &&
          brace_depth == static_cast<int>(template_stack.back())) {
        template_stack.pop_back();
        // Resume the enclosing template literal body.
        out.push_back('}');
        ++i;
        while (i < n) {
          const char t = src[i];
          if (t == '\\' && i + 1 < n) {
            out.push_back(t);
            out.push_back(src[i + 1]);
            i += 2;
            continue;
          }
          if (t == '$' && i + 1 < n && src[i + 1] == '{') {
            out += "${";
            i += 2;
            template_stack.push_back(static_cast<char>(brace_depth));
            ++brace_depth;
            break;
          }
          out.push_back(t);
          ++i;
          if (t == '`') break;
        }
        continue;
      }
    } else if (c == '/' && slash_starts_regex(out)) {
      out.push_back(src[i++]);
      bool in_class = false;
      while (i < n) {
        const char r = src[i];
        if (r == '\\' && i + 1 < n) {
          out.push_back(r);
          out.push_back(src[i + 1]);
          i += 2;
          continue;
        }
        out.push_back(r);
        ++i;
        if (r == '[') in_class = true;
        else if (r == ']') in_class = false;
        else if (r == '/' && !in_class) break;
      }
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

inline std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const char c : text) {
    if (is_js_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Comment-free, whitespace-collapsed, trimmed form of a source slice. String,
/// template and regular-expression literals are recognized so comment markers
/// inside them survive; their whitespace is collapsed like everything else.
inline std::string normalize_source(std::string_view body_source) {
  return detail::collapse_whitespace(detail::strip_comments(body_source));
}

/// Lowercase hex SHA-256 of the raw bytes.
inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int md_len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &md_len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(md_len * 2);
  for (unsigned int k = 0; k < md_len; ++k) {
    hex.push_back(kHex[md[k] >> 4]);
    hex.push_back(kHex[md[k] & 0x0f]);
  }
  return hex;
}

inline std::string normalize_and_digest(std::string_view body_source) {
  return sha256_hex(normalize_source(body_source));
}

/// Digest attached to constructs that have no source body (PACK).
inline const std::string& empty_digest() {
  static const std::string kEmpty = sha256_hex("");
  return kEmpty;
}

}  // namespace nodescan

#endif  // NODESCAN_DIGEST_HPP
