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

#ifndef NODESCAN_VULN_KB_HPP
#define NODESCAN_VULN_KB_HPP

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodescan/construct.hpp"
#include "nodescan/error.hpp"
#include "nodescan/js_extractor.hpp"

namespace nodescan {

struct ModifiedConstruct {
  Fqn fqn;
  ConstructType type = ConstructType::kFunc;
  std::string before_digest;
  std::string after_digest;

  bool operator==(const ModifiedConstruct&) const = default;
};

/// What a fix did to a package, construct by construct. The three FQN sets
/// are disjoint and every modified entry has differing digests.
struct ConstructChanges {
  std::vector<Construct> added;    // as they appear after the fix
  std::vector<ModifiedConstruct> modified;
  std::vector<Construct> removed;  // as they appeared before the fix

  bool empty() const { return added.empty() && modified.empty() && removed.empty(); }
  bool operator==(const ConstructChanges&) const = default;
};

namespace detail {

inline std::optional<std::string> common_root(std::span<const Construct> cs, std::string_view side) {
  std::optional<std::string> root;
  for (const auto& c : cs) {
    if (!root) root = c.fqn.root_name();
    else if (*root != c.fqn.root_name()) {
      throw Error(ErrorCode::kRootMismatch, std::string(side) + " constructs span several packages (" + *root +
                                                ", " + c.fqn.root_name() + ")");
    }
  }
  return root;
}

}  // namespace detail

/// Compares two extractions of the same package keyed by (FQN, type). PACK
/// constructs never take part.
inline ConstructChanges diff_constructs(std::span<const Construct> before, std::span<const Construct> after) {
  const auto before_root = detail::common_root(before, "before");
  const auto after_root = detail::common_root(after, "after");
  if (before_root && after_root && *before_root != *after_root) {
    throw Error(ErrorCode::kRootMismatch,
                "cannot diff different packages: " + *before_root + " vs " + *after_root);
  }
  using Key = std::pair<std::string, ConstructType>;
  std::map<Key, const Construct*> old_index;
  std::map<Key, const Construct*> new_index;
  for (const auto& c : before) {
    if (c.type != ConstructType::kPack) old_index.emplace(Key{c.fqn.render(), c.type}, &c);
  }
  for (const auto& c : after) {
    if (c.type != ConstructType::kPack) new_index.emplace(Key{c.fqn.render(), c.type}, &c);
  }

  ConstructChanges out;
  for (const auto& c : after) {
    if (c.type == ConstructType::kPack) continue;
    auto it = old_index.find(Key{c.fqn.render(), c.type});
    if (it == old_index.end()) {
      out.added.push_back(c);
    } else if (it->second->body_digest != c.body_digest) {
      out.modified.push_back({c.fqn, c.type, it->second->body_digest, c.body_digest});
    }
  }
  for (const auto& c : before) {
    if (c.type != ConstructType::kPack && !new_index.count(Key{c.fqn.render(), c.type})) out.removed.push_back(c);
  }
  return out;
}

using ChangeCounts = std::map<ConstructType, std::size_t>;

struct ChangeSummary {
  ChangeCounts added;
  ChangeCounts modified;
  ChangeCounts removed;

  bool operator==(const ChangeSummary&) const = default;
};

inline ChangeSummary count_changes(const ConstructChanges& ch) {
  ChangeSummary s;
  for (const auto& c : ch.added) ++s.added[c.type];
  for (const auto& m : ch.modified) ++s.modified[m.type];
  for (const auto& c : ch.removed) ++s.removed[c.type];
  return s;
}

/// "MODU:1, FUNC:1" in taxonomy order; empty when nothing changed.
inline std::string render_counts(const ChangeCounts& counts) {
  std::string out;
  for (ConstructType t : kAllConstructTypes) {
    auto it = counts.find(t);
    if (it == counts.end() || it->second == 0) continue;
    if (!out.empty()) out += ", ";
    out += std::string(to_string(t)) + ":" + std::to_string(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

struct VulnSignature {
  std::string vuln_id;
  std::string package_name;
  std::string provenance;
  ConstructChanges changes;

  bool operator==(const VulnSignature&) const = default;
};

/// Extracts both trees under `package_name` and keeps their difference.
inline VulnSignature build_signature(std::string vuln_id, std::string package_name,
                                     const std::filesystem::path& before_tree,
                                     const std::filesystem::path& after_tree, std::string provenance) {
  const Fqn root = Fqn::root(package_name);
  const auto before = extract_package(before_tree, root);
  const auto after = extract_package(after_tree, root);
  ConstructChanges changes = diff_constructs(before.constructs, after.constructs);
  if (changes.empty()) {
    throw Error(ErrorCode::kNoCodeChange,
                "no code change detected between " + before_tree.string() + " and " + after_tree.string());
  }
  return {std::move(vuln_id), std::move(package_name), std::move(provenance), std::move(changes)};
}

inline Json to_json(const VulnSignature& s) {
  Json j;
  j["vuln_id"] = s.vuln_id;
  j["package_name"] = s.package_name;
  j["provenance"] = s.provenance;
  j["added"] = to_json(std::span<const Construct>(s.changes.added));
  Json modified = Json::array();
  for (const auto& m : s.changes.modified) {
    Json e;
    e["fqn"] = m.fqn.render();
    e["type"] = to_string(m.type);
    e["before_digest"] = m.before_digest;
    e["after_digest"] = m.after_digest;
    modified.push_back(std::move(e));
  }
  j["modified"] = std::move(modified);
  j["removed"] = to_json(std::span<const Construct>(s.changes.removed));
  return j;
}

inline Json to_json(const ConstructChanges& ch) {
  Json j;
  j["added"] = to_json(std::span<const Construct>(ch.added));
  Json modified = Json::array();
  for (const auto& m : ch.modified) {
    modified.push_back({{"fqn", m.fqn.render()},
                        {"type", to_string(m.type)},
                        {"before_digest", m.before_digest},
                        {"after_digest", m.after_digest}});
  }
  j["modified"] = std::move(modified);
  j["removed"] = to_json(std::span<const Construct>(ch.removed));
  return j;
}

/// Parses and validates one signature document.
inline VulnSignature signature_from_json(const Json& j) {
  try {
    VulnSignature s;
    s.vuln_id = j.at("vuln_id").get<std::string>();
    s.package_name = j.at("package_name").get<std::string>();
    s.provenance = j.value("provenance", "");
    if (s.vuln_id.empty() || s.package_name.empty()) {
      throw Error(ErrorCode::kMissingField, "signature needs a vuln_id and a package_name");
    }
    auto name = [&](const std::string& rendered) {
      return rendered.rfind(s.package_name, 0) == 0 ? Fqn::parse(rendered, s.package_name) : Fqn::parse(rendered);
    };
    for (const auto& c : j.at("added")) s.changes.added.push_back(construct_from_json(c, s.package_name));
    for (const auto& c : j.at("removed")) s.changes.removed.push_back(construct_from_json(c, s.package_name));
    for (const auto& m : j.at("modified")) {
      s.changes.modified.push_back({name(m.at("fqn").get<std::string>()),
                                    parse_construct_type(m.at("type").get<std::string>()),
                                    m.at("before_digest").get<std::string>(), m.at("after_digest").get<std::string>()});
    }
    if (s.changes.empty()) throw Error(ErrorCode::kNoCodeChange, "signature " + s.vuln_id + " has no construct changes");
    std::set<std::pair<std::string, ConstructType>> seen;
    auto claim = [&](const Fqn& f, ConstructType t) {
      if (!seen.emplace(f.render(), t).second) {
        throw Error(ErrorCode::kMalformedJson, "signature " + s.vuln_id + " lists " + f.render() + " twice");
      }
    };
    for (const auto& c : s.changes.added) claim(c.fqn, c.type);
    for (const auto& c : s.changes.removed) claim(c.fqn, c.type);
    for (const auto& m : s.changes.modified) {
      claim(m.fqn, m.type);
      if (m.before_digest == m.after_digest) {
        throw Error(ErrorCode::kMalformedJson, "modified construct " + m.fqn.render() + " has identical digests");
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("malformed signature: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Knowledge base directory: one <vuln_id>.json per signature
// ---------------------------------------------------------------------------

inline void check_vuln_id(const std::string& id) {
  if (id.empty() || id == "." || id == ".." || id.find_first_of("/\\") != std::string::npos) {
    throw Error(ErrorCode::kInvalidName, "'" + id + "' cannot be used as a vulnerability id");
  }
}

inline std::filesystem::path kb_save(const VulnSignature& sig, const std::filesystem::path& kb_dir) {
  check_vuln_id(sig.vuln_id);
  std::error_code ec;
  std::filesystem::create_directories(kb_dir, ec);
  const auto path = kb_dir / (sig.vuln_id + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(sig).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
  return path;
}

struct KbContents {
  std::vector<VulnSignature> signatures;  // sorted by vuln_id
  std::vector<std::string> warnings;
};

inline KbContents kb_load(const std::filesystem::path& kb_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(kb_dir, ec)) throw Error(ErrorCode::kIo, "knowledge base directory not found: " + kb_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kb_dir, ec)) {
    std::error_code sec;
    if (e.is_regular_file(sec) && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  KbContents kb;
  std::map<std::string, fs::path> origin;
  for (const auto& f : files) {
    VulnSignature sig;
    try {
      const auto text = read_file(f);
      if (!text) throw Error(ErrorCode::kIo, "unreadable");
      nlohmann::ordered_json j;
      try {
        j = Json::parse(*text);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kMalformedJson, "malformed JSON at byte offset " + std::to_string(e.byte));
      }
      sig = signature_from_json(j);
    } catch (const Error& e) {
      kb.warnings.push_back("skipping " + f.filename().string() + ": " + e.what());
      continue;
    }
    auto [it, fresh] = origin.emplace(sig.vuln_id, f);
    if (!fresh) {
      throw Error(ErrorCode::kDuplicateVulnId, "duplicate vuln_id " + sig.vuln_id + " in " +
                                                   it->second.filename().string() + " and " + f.filename().string());
    }
    kb.signatures.push_back(std::move(sig));
  }
  std::sort(kb.signatures.begin(), kb.signatures.end(),
            [](const VulnSignature& a, const VulnSignature& b) { return a.vuln_id < b.vuln_id; });
  return kb;
}

}  // namespace nodescan

#endif  // NODESCAN_VULN_KB_HPP
