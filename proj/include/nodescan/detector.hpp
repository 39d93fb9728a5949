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

#ifndef NODESCAN_DETECTOR_HPP
#define NODESCAN_DETECTOR_HPP

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nodescan/bom.hpp"
#include "nodescan/construct.hpp"
#include "nodescan/vuln_kb.hpp"

namespace nodescan {

enum class Evidence { kVulnerable, kFixed, kNameOnly };
enum class Status { kVulnerable, kFixed, kInconclusive };

inline std::string_view to_string(Evidence e) {
  switch (e) {
    case Evidence::kVulnerable: return "vulnerable";
    case Evidence::kFixed: return "fixed";
    case Evidence::kNameOnly: return "name_only";
  }
  return "?";
}

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::kVulnerable: return "vulnerable";
    case Status::kFixed: return "fixed";
    case Status::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct Match {
  std::string signature_fqn;
  std::string bom_fqn;
  ConstructType type = ConstructType::kFunc;
  Evidence evidence = Evidence::kNameOnly;

  bool operator==(const Match&) const = default;
};

struct DependencyIdentity {
  std::string name;
  std::string version;
  std::string install_path;
  Scope scope = Scope::kRuntime;
  Depth depth = Depth::kDirect;

  bool operator==(const DependencyIdentity&) const = default;
};

struct Finding {
  std::string vuln_id;
  std::string signature_package;  // package the signature was built from
  DependencyIdentity dependency;
  std::vector<Match> matches;
  Status status = Status::kInconclusive;

  bool operator==(const Finding&) const = default;
};

/// vulnerable if any match is; fixed if every match is; else inconclusive.
inline Status assess(std::span<const Match> matches) {
  if (matches.empty()) return Status::kInconclusive;
  bool all_fixed = true;
  for (const auto& m : matches) {
    if (m.evidence == Evidence::kVulnerable) return Status::kVulnerable;
    all_fixed = all_fixed && m.evidence == Evidence::kFixed;
  }
  return all_fixed ? Status::kFixed : Status::kInconclusive;
}

namespace detail {

using RelativeKey = std::pair<std::string, ConstructType>;

inline std::vector<Match> match_signature(const VulnSignature& sig,
                                          const std::map<RelativeKey, const Construct*>& present) {
  std::vector<Match> out;
  auto lookup = [&](const Fqn& fqn, ConstructType type) -> const Construct* {
    auto it = present.find({relative_fqn(fqn), type});
    return it == present.end() ? nullptr : it->second;
  };
  for (const auto& m : sig.changes.modified) {
    const Construct* c = lookup(m.fqn, m.type);
    if (!c) continue;
    const Evidence ev = c->body_digest == m.before_digest  ? Evidence::kVulnerable
                        : c->body_digest == m.after_digest ? Evidence::kFixed
                                                           : Evidence::kNameOnly;
    out.push_back({m.fqn.render(), c->fqn.render(), m.type, ev});
  }
  for (const auto& r : sig.changes.removed) {
    if (const Construct* c = lookup(r.fqn, r.type)) {
      out.push_back({r.fqn.render(), c->fqn.render(), r.type, Evidence::kVulnerable});
    }
  }
  for (const auto& a : sig.changes.added) {
    if (const Construct* c = lookup(a.fqn, a.type)) {
      const Evidence ev = c->body_digest == a.body_digest ? Evidence::kFixed : Evidence::kNameOnly;
      out.push_back({a.fqn.render(), c->fqn.render(), a.type, ev});
    }
  }
  return out;
}

}  // namespace detail

/// Matches every signature against every dependency by package-relative FQN,
/// so the signature's own package name plays no part in the match.
inline std::vector<Finding> detect(const BillOfMaterials& bom, std::span<const VulnSignature> kb) {
  std::vector<Finding> findings;
  for (const auto& dep : bom.dep_entries) {
    std::map<detail::RelativeKey, const Construct*> present;
    for (const auto& c : dep.constructs) {
      if (c.type != ConstructType::kPack) present.emplace(detail::RelativeKey{relative_fqn(c.fqn), c.type}, &c);
    }
    for (const auto& sig : kb) {
      auto matches = detail::match_signature(sig, present);
      if (matches.empty()) continue;
      Finding f;
      f.vuln_id = sig.vuln_id;
      f.signature_package = sig.package_name;
      f.dependency = {dep.name, dep.version, dep.install_path, dep.scope, dep.depth};
      f.status = assess(matches);
      f.matches = std::move(matches);
      findings.push_back(std::move(f));
    }
  }
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.vuln_id, a.dependency.install_path) < std::tie(b.vuln_id, b.dependency.install_path);
  });
  return findings;
}

/// Per vulnerability: how many vulnerable dependencies fall in each
/// scope x depth cell.
struct FeatureRow {
  std::string vuln_id;
  std::size_t runtime_direct = 0;
  std::size_t runtime_transitive = 0;
  std::size_t test_direct = 0;
  std::size_t test_transitive = 0;

  std::size_t total() const { return runtime_direct + runtime_transitive + test_direct + test_transitive; }
  bool operator==(const FeatureRow&) const = default;
};

inline std::vector<FeatureRow> tabulate_findings(std::span<const Finding> findings) {
  std::map<std::string, FeatureRow> rows;
  for (const auto& f : findings) {
    if (f.status != Status::kVulnerable) continue;
    FeatureRow& r = rows[f.vuln_id];
    r.vuln_id = f.vuln_id;
    const bool runtime = f.dependency.scope == Scope::kRuntime;
    const bool direct = f.dependency.depth == Depth::kDirect;
    ++(runtime ? (direct ? r.runtime_direct : r.runtime_transitive) : (direct ? r.test_direct : r.test_transitive));
  }
  std::vector<FeatureRow> out;
  for (auto& [id, row] : rows) out.push_back(std::move(row));
  return out;
}

inline Json to_json(const Finding& f) {
  Json j;
  j["vuln_id"] = f.vuln_id;
  j["signature_package"] = f.signature_package;
  j["status"] = to_string(f.status);
  j["dependency"] = {{"name", f.dependency.name},
                     {"version", f.dependency.version},
                     {"path", f.dependency.install_path},
                     {"scope", to_string(f.dependency.scope)},
                     {"depth", to_string(f.dependency.depth)}};
  Json matches = Json::array();
  for (const auto& m : f.matches) {
    matches.push_back({{"signature_fqn", m.signature_fqn},
                       {"bom_fqn", m.bom_fqn},
                       {"type", to_string(m.type)},
                       {"evidence", to_string(m.evidence)}});
  }
  j["matches"] = std::move(matches);
  return j;
}

inline Json to_json(const FeatureRow& r) {
  Json j;
  j["vuln_id"] = r.vuln_id;
  j["runtime_direct"] = r.runtime_direct;
  j["runtime_transitive"] = r.runtime_transitive;
  j["test_direct"] = r.test_direct;
  j["test_transitive"] = r.test_transitive;
  return j;
}

}  // namespace nodescan

#endif  // NODESCAN_DETECTOR_HPP
