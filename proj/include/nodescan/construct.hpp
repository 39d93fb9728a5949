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

#ifndef NODESCAN_CONSTRUCT_HPP
#define NODESCAN_CONSTRUCT_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nodescan/error.hpp"

namespace nodescan {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Construct taxonomy
// ---------------------------------------------------------------------------

enum class ConstructType : std::uint8_t { kPack, kModu, kFunc, kClas, kMeth, kCons, kObjt };

inline constexpr std::array<ConstructType, 7> kAllConstructTypes = {
    ConstructType::kPack, ConstructType::kModu, ConstructType::kFunc,
    ConstructType::kClas, ConstructType::kMeth, ConstructType::kCons,
    ConstructType::kObjt};

inline std::string_view to_string(ConstructType t) {
  switch (t) {
    case ConstructType::kPack: return "PACK";
    case ConstructType::kModu: return "MODU";
    case ConstructType::kFunc: return "FUNC";
    case ConstructType::kClas: return "CLAS";
    case ConstructType::kMeth: return "METH";
    case ConstructType::kCons: return "CONS";
    case ConstructType::kObjt: return "OBJT";
  }
  return "????";
}

inline ConstructType parse_construct_type(std::string_view code) {
  for (ConstructType t : kAllConstructTypes) {
    if (to_string(t) == code) return t;
  }
  throw Error(ErrorCode::kInvalidName,
              "unknown construct type '" + std::string(code) + "'");
}

// ---------------------------------------------------------------------------
// Fully-qualified names
// ---------------------------------------------------------------------------

/// Dot-joined hierarchical name. Segment 0 is the package root and is opaque:
/// it may itself contain '.', '@' or '/'. Every later segment is dot-free.
class Fqn {
 public:
  Fqn() = default;

  static Fqn root(std::string package_name) {
    if (package_name.empty()) {
      throw Error(ErrorCode::kInvalidFqn, "package root name is empty");
    }
    Fqn f;
    f.segments_.push_back(std::move(package_name));
    return f;
  }

  /// Builds from explicit segments; segment 0 is the root.
  static Fqn from_segments(std::vector<std::string> segments) {
    if (segments.empty() || segments.front().empty()) {
      throw Error(ErrorCode::kInvalidFqn, "FQN needs a non-empty root segment");
    }
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (segments[i].empty() || segments[i].find('.') != std::string::npos) {
        throw Error(ErrorCode::kInvalidFqn,
                    "invalid FQN segment '" + segments[i] + "'");
      }
    }
    Fqn f;
    f.segments_ = std::move(segments);
    return f;
  }

  /// Parses a rendered name whose root is known to the caller.
  static Fqn parse(std::string_view rendered, std::string_view root_name) {
    if (rendered.substr(0, root_name.size()) != root_name ||
        (rendered.size() > root_name.size() && rendered[root_name.size()] != '.')) {
      throw Error(ErrorCode::kInvalidFqn, "'" + std::string(rendered) +
                                              "' is not rooted at '" +
                                              std::string(root_name) + "'");
    }
    std::vector<std::string> segs{std::string(root_name)};
    std::size_t pos = root_name.size();
    while (pos < rendered.size()) {
      ++pos;  // skip '.'
      const std::size_t dot = rendered.find('.', pos);
      const std::size_t end = dot == std::string_view::npos ? rendered.size() : dot;
      segs.emplace_back(rendered.substr(pos, end - pos));
      pos = end;
    }
    return from_segments(std::move(segs));
  }

  /// Parses a rendered name without knowing the root. A scoped root
  /// ("@scope/name") extends to the first '.' after its '/'; otherwise the
  /// root ends at the first '.'.
  static Fqn parse(std::string_view rendered) {
    std::size_t search_from = 0;
    if (!rendered.empty() && rendered.front() == '@') {
      const std::size_t slash = rendered.find('/');
      if (slash != std::string_view::npos) search_from = slash;
    }
    const std::size_t dot = rendered.find('.', search_from);
    return parse(rendered, rendered.substr(0, dot));
  }

  const std::vector<std::string>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const std::string& root_name() const { return segments_.front(); }
  const std::string& last() const { return segments_.back(); }

  std::string render() const { return join(segments_); }

  /// Everything after the package root, rendered; empty for a bare root.
  std::string render_relative() const {
    return join(std::span<const std::string>(segments_).subspan(
        segments_.empty() ? 0 : 1));
  }

  Fqn child(std::string segment) const {
    Fqn f = *this;
    f.segments_.push_back(std::move(segment));
    return f;
  }

  Fqn with_last(std::string segment) const {
    Fqn f = *this;
    f.segments_.back() = std::move(segment);
    return f;
  }

  Fqn parent() const {
    Fqn f = *this;
    if (f.segments_.size() > 1) f.segments_.pop_back();
    return f;
  }

  bool is_strict_prefix_of(const Fqn& other) const {
    if (segments_.size() >= other.segments_.size()) return false;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (segments_[i] != other.segments_[i]) return false;
    }
    return true;
  }

  auto operator<=>(const Fqn&) const = default;
  bool operator==(const Fqn&) const = default;

 private:
  static std::string join(std::span<const std::string> parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out.push_back('.');
      out += parts[i];
    }
    return out;
  }

  std::vector<std::string> segments_;
};

/// Fqn minus its package root, rendered. Matching on this suffix lets
/// relocated or renamed copies of a package line up with the original.
inline std::string relative_fqn(const Fqn& fqn) { return fqn.render_relative(); }

// ---------------------------------------------------------------------------
// Constructs
// ---------------------------------------------------------------------------

struct SourceSpan {
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  bool well_ordered() const {
    return std::pair(start_line, start_col) <= std::pair(end_line, end_col);
  }
  auto operator<=>(const SourceSpan&) const = default;
};

struct Construct {
  ConstructType type = ConstructType::kPack;
  Fqn fqn;
  SourceSpan span;
  std::string body_digest;
  std::optional<Fqn> parent;

  bool operator==(const Construct&) const = default;
};

/// Whether `child` may be nested directly under a construct of type `parent`.
/// An absent parent is only legal for the root PACK.
inline bool legal_parent(ConstructType child, std::optional<ConstructType> parent) {
  using enum ConstructType;
  if (!parent) return child == kPack;
  switch (child) {
    case kPack: return *parent == kPack;
    case kModu: return *parent == kPack;
    case kFunc:
    case kClas:
    case kObjt: return *parent == kModu || *parent == kFunc;
    case kMeth:
    case kCons: return *parent == kClas;
  }
  return false;
}

/// Marker used in place of a name for constructs that have none.
struct Anonymous {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
};

inline std::string anonymous_marker(Anonymous at) {
  return "<anon:L" + std::to_string(at.line) + ":C" + std::to_string(at.col) + ">";
}

/// Extends `parent` by one segment rendered according to the construct kind:
/// callables carry their parameter list, classes their base class, everything
/// else the bare name.
///
/// For CLAS, `args` holds at most one entry: the extended class name.
inline Fqn build_fqn(const Fqn& parent, ConstructType type,
                     const std::variant<std::string, Anonymous>& name,
                     std::span<const std::string> args = {}) {
  using enum ConstructType;
  if (parent.empty()) {
    throw Error(ErrorCode::kInvalidFqn, "parent FQN is empty");
  }
  std::string base = std::holds_alternative<Anonymous>(name)
                         ? anonymous_marker(std::get<Anonymous>(name))
                         : std::get<std::string>(name);
  if (base.empty()) throw Error(ErrorCode::kInvalidName, "construct name is empty");
  if (base.find('.') != std::string::npos) {
    throw Error(ErrorCode::kInvalidName,
                "construct name '" + base + "' contains '.'");
  }
  if ((type == kPack || type == kModu || type == kObjt) && !args.empty()) {
    throw Error(ErrorCode::kInvalidName,
                std::string(to_string(type)) + " takes no arguments");
  }
  if (type == kClas && args.size() > 1) {
    throw Error(ErrorCode::kInvalidName, "a class extends at most one base");
  }
  for (const auto& a : args) {
    if (a.find('.') != std::string::npos) {
      throw Error(ErrorCode::kInvalidName, "argument '" + a + "' contains '.'");
    }
  }
  switch (type) {
    case kFunc:
    case kMeth:
    case kCons:
    case kClas: {
      base.push_back('(');
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) base.push_back(',');
        base += args[i];
      }
      base.push_back(')');
      break;
    }
    case kPack:
    case kModu:
    case kObjt:
      break;
  }
  return parent.child(std::move(base));
}

// ---------------------------------------------------------------------------
// Canonical JSON
// ---------------------------------------------------------------------------

inline Json to_json(const Construct& c) {
  Json j;
  j["type"] = to_string(c.type);
  j["fqn"] = c.fqn.render();
  j["span"] = {c.span.start_line, c.span.start_col, c.span.end_line, c.span.end_col};
  j["digest"] = c.body_digest;
  if (c.parent) j["parent"] = c.parent->render();
  return j;
}

inline Json to_json(std::span<const Construct> constructs) {
  Json arr = Json::array();
  for (const auto& c : constructs) arr.push_back(to_json(c));
  return arr;
}

/// Reads the canonical form back. `root_name` disambiguates package roots
/// that contain '.'; pass an empty view to fall back to heuristic splitting.
inline Construct construct_from_json(const Json& j, std::string_view root_name = {}) {
  auto parse_name = [&](const std::string& s) {
    if (!root_name.empty() && s.rfind(root_name, 0) == 0) return Fqn::parse(s, root_name);
    return Fqn::parse(s);
  };
  try {
    Construct c;
    c.type = parse_construct_type(j.at("type").get<std::string>());
    c.fqn = parse_name(j.at("fqn").get<std::string>());
    const auto& span = j.at("span");
    if (!span.is_array() || span.size() != 4) {
      throw Error(ErrorCode::kMalformedJson, "span must hold four integers");
    }
    c.span = {span[0].get<std::uint32_t>(), span[1].get<std::uint32_t>(),
              span[2].get<std::uint32_t>(), span[3].get<std::uint32_t>()};
    c.body_digest = j.at("digest").get<std::string>();
    if (j.contains("parent") && !j["parent"].is_null()) {
      c.parent = parse_name(j["parent"].get<std::string>());
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("bad construct: ") + e.what());
  }
}

}  // namespace nodescan

#endif  // NODESCAN_CONSTRUCT_HPP
