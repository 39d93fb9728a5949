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

#ifndef NODESCAN_BOM_HPP
#define NODESCAN_BOM_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "nodescan/construct.hpp"
#include "nodescan/deps.hpp"
#include "nodescan/error.hpp"
#include "nodescan/js_extractor.hpp"

namespace nodescan {

struct DependencyEntry {
  std::string name;
  std::string version;
  std::string install_path;
  Scope scope = Scope::kRuntime;
  Depth depth = Depth::kDirect;
  std::vector<Construct> constructs;

  bool operator==(const DependencyEntry&) const = default;
};

struct BomStats {
  std::size_t app_constructs = 0;
  std::size_t dep_constructs = 0;
  std::size_t total_constructs = 0;
  std::size_t dependencies = 0;
  std::size_t runtime_dependencies = 0;
  std::size_t test_dependencies = 0;
  std::size_t direct_dependencies = 0;
  std::size_t transitive_dependencies = 0;

  bool operator==(const BomStats&) const = default;
};

struct BomDiagnostic {
  std::string package;  // package name
  std::string path;     // install path, "" for the application
  FileDiagnostic detail;
};

/// Construct inventory of an application and every installed dependency.
/// Counts include PACK constructs.
struct BillOfMaterials {
  std::string app_name;
  std::string app_version;
  std::vector<Construct> app_constructs;
  std::vector<DependencyEntry> dep_entries;  // depth-first, children by name
  BomStats stats;
  std::vector<std::string> warnings;
  std::vector<BomDiagnostic> diagnostics;
};

inline BomStats compute_stats(const BillOfMaterials& bom) {
  BomStats s;
  s.app_constructs = bom.app_constructs.size();
  for (const auto& d : bom.dep_entries) {
    s.dep_constructs += d.constructs.size();
    (d.scope == Scope::kRuntime ? s.runtime_dependencies : s.test_dependencies)++;
    (d.depth == Depth::kDirect ? s.direct_dependencies : s.transitive_dependencies)++;
  }
  s.dependencies = bom.dep_entries.size();
  s.total_constructs = s.app_constructs + s.dep_constructs;
  return s;
}

namespace detail {

inline bool declares_dependencies(const Manifest& m) {
  return !m.dependencies.empty() || !m.dev_dependencies.empty() || !m.optional_dependencies.empty();
}

/// Picks the graph source: a v2/v3 lockfile when usable, otherwise the
/// installed node_modules tree.
inline DependencyGraph resolve_graph(const std::filesystem::path& app_dir, const Manifest& manifest,
                                     std::vector<std::string>& warnings) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (const auto lock = read_file(app_dir / "package-lock.json")) {
    try {
      return parse_lockfile(*lock);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsupportedLockfile) throw;
      warnings.push_back(e.what());
    }
  }
  if (!fs::is_directory(app_dir / "node_modules", ec) && !declares_dependencies(manifest)) {
    DependencyGraph g;
    g.nodes.push_back({manifest.name, manifest.version, "", {}, {}, {}, {}});
    return g;
  }
  return walk_node_modules(app_dir);
}

}  // namespace detail

inline BillOfMaterials build_bom(const std::filesystem::path& app_dir) {
  const auto manifest_text = read_file(app_dir / "package.json");
  if (!manifest_text) throw Error(ErrorCode::kMissingManifest, "missing package.json in " + app_dir.string());
  const Manifest manifest = parse_manifest(*manifest_text);

  BillOfMaterials bom;
  bom.app_name = manifest.name;
  bom.app_version = manifest.version;

  DependencyGraph graph = classify(detail::resolve_graph(app_dir, manifest, bom.warnings), manifest);
  bom.warnings.insert(bom.warnings.end(), graph.warnings.begin(), graph.warnings.end());

  PackageExtraction app = extract_package(app_dir, Fqn::root(manifest.name));
  bom.app_constructs = std::move(app.constructs);
  for (auto& d : app.diagnostics) bom.diagnostics.push_back({manifest.name, "", std::move(d)});

  // Extract dependencies concurrently, then assemble in graph order.
  std::vector<std::size_t> present;
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    std::error_code ec;
    if (std::filesystem::is_directory(app_dir / graph.nodes[i].install_path, ec)) {
      present.push_back(i);
    } else {
      bom.warnings.push_back("dependency " + graph.nodes[i].name + "@" + graph.nodes[i].version +
                             " is missing from disk at " + graph.nodes[i].install_path);
    }
  }
  std::vector<PackageExtraction> extracted(present.size());
  const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (std::size_t batch = 0; batch < present.size(); batch += workers) {
    std::vector<std::future<PackageExtraction>> futures;
    for (std::size_t k = batch; k < std::min(present.size(), batch + workers); ++k) {
      const DependencyNode& n = graph.nodes[present[k]];
      futures.push_back(std::async(std::launch::async, [&app_dir, &n] {
        return extract_package(app_dir / n.install_path, Fqn::root(n.name));
      }));
    }
    for (std::size_t k = 0; k < futures.size(); ++k) extracted[batch + k] = futures[k].get();
  }

  for (std::size_t k = 0; k < present.size(); ++k) {
    const DependencyNode& n = graph.nodes[present[k]];
    DependencyEntry e{n.name, n.version, n.install_path, *n.scope, *n.depth, std::move(extracted[k].constructs)};
    for (auto& d : extracted[k].diagnostics) bom.diagnostics.push_back({n.name, n.install_path, std::move(d)});
    bom.dep_entries.push_back(std::move(e));
  }
  bom.stats = compute_stats(bom);
  return bom;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const BomStats& s) {
  Json j;
  j["app_constructs"] = s.app_constructs;
  j["dep_constructs"] = s.dep_constructs;
  j["total_constructs"] = s.total_constructs;
  j["dependencies"] = s.dependencies;
  j["runtime_dependencies"] = s.runtime_dependencies;
  j["test_dependencies"] = s.test_dependencies;
  j["direct_dependencies"] = s.direct_dependencies;
  j["transitive_dependencies"] = s.transitive_dependencies;
  return j;
}

inline Json to_json(const BillOfMaterials& bom) {
  Json j;
  j["application"] = {{"name", bom.app_name}, {"version", bom.app_version}};
  j["app_constructs"] = to_json(std::span<const Construct>(bom.app_constructs));
  Json deps = Json::array();
  for (const auto& d : bom.dep_entries) {
    Json e;
    e["name"] = d.name;
    e["version"] = d.version;
    e["path"] = d.install_path;
    e["scope"] = to_string(d.scope);
    e["depth"] = to_string(d.depth);
    e["constructs"] = to_json(std::span<const Construct>(d.constructs));
    deps.push_back(std::move(e));
  }
  j["dependencies"] = std::move(deps);
  j["stats"] = to_json(bom.stats);
  j["warnings"] = bom.warnings;
  Json diags = Json::array();
  for (const auto& d : bom.diagnostics) {
    diags.push_back({{"package", d.package},
                     {"path", d.path},
                     {"file", d.detail.file},
                     {"module", d.detail.module_fqn},
                     {"line", d.detail.error.line},
                     {"col", d.detail.error.col},
                     {"message", d.detail.error.message}});
  }
  j["diagnostics"] = std::move(diags);
  return j;
}

inline BillOfMaterials bom_from_json(const Json& j) {
  try {
    BillOfMaterials bom;
    bom.app_name = j.at("application").at("name").get<std::string>();
    bom.app_version = j.at("application").value("version", "");
    for (const auto& c : j.at("app_constructs")) bom.app_constructs.push_back(construct_from_json(c, bom.app_name));
    for (const auto& d : j.at("dependencies")) {
      DependencyEntry e;
      e.name = d.at("name").get<std::string>();
      e.version = d.value("version", "");
      e.install_path = d.at("path").get<std::string>();
      e.scope = parse_scope(d.at("scope").get<std::string>());
      e.depth = parse_depth(d.at("depth").get<std::string>());
      for (const auto& c : d.at("constructs")) e.constructs.push_back(construct_from_json(c, e.name));
      bom.dep_entries.push_back(std::move(e));
    }
    if (j.contains("warnings")) bom.warnings = j["warnings"].get<std::vector<std::string>>();
    if (j.contains("diagnostics")) {
      for (const auto& d : j["diagnostics"]) {
        bom.diagnostics.push_back({d.at("package").get<std::string>(), d.at("path").get<std::string>(),
                                   {d.at("file").get<std::string>(), d.at("module").get<std::string>(),
                                    {d.at("line").get<std::uint32_t>(), d.at("col").get<std::uint32_t>(),
                                     d.at("message").get<std::string>()}}});
      }
    }
    bom.stats = compute_stats(bom);
    if (j.contains("stats")) {
      const auto& s = j["stats"];
      if (s.value("total_constructs", bom.stats.total_constructs) != bom.stats.total_constructs ||
          s.value("dependencies", bom.stats.dependencies) != bom.stats.dependencies) {
        throw Error(ErrorCode::kMalformedJson, "BOM stats disagree with its construct lists");
      }
    }
    return bom;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("malformed BOM: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Summary statistics
// ---------------------------------------------------------------------------

struct Distribution {
  std::size_t n = 0;
  double median = 0;
  double min = 0;
  double max = 0;
  double q1 = 0;
  double q3 = 0;
  double sd = 0;
  bool sd_defined = false;  // false for a single observation; sd is then 0
};

/// Inclusive linear-interpolation quantile (position (n-1)p) of sorted data.
inline double quantile_inclusive(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Distribution describe(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "cannot summarize an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  Distribution d;
  d.n = v.size();
  d.min = v.front();
  d.max = v.back();
  d.median = quantile_inclusive(v, 0.5);
  d.q1 = quantile_inclusive(v, 0.25);
  d.q3 = quantile_inclusive(v, 0.75);
  if (v.size() > 1) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    d.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    d.sd_defined = true;
  }
  return d;
}

struct SummaryRow {
  std::string label;
  Distribution dist;
};

/// Construct rows (app / dep / total) followed by dependency rows
/// (all / runtime / test), each described over the given BOMs.
struct SummaryTable {
  std::vector<SummaryRow> constructs;
  std::vector<SummaryRow> dependencies;
};

inline SummaryTable summarize(std::span<const BillOfMaterials> boms) {
  if (boms.empty()) throw Error(ErrorCode::kEmptyInput, "summarize needs at least one BOM");
  auto column = [&](auto field) {
    std::vector<double> out;
    for (const auto& b : boms) out.push_back(static_cast<double>(field(b.stats)));
    return describe(out);
  };
  SummaryTable t;
  t.constructs = {
      {"# App Consts.", column([](const BomStats& s) { return s.app_constructs; })},
      {"# Dep Consts.", column([](const BomStats& s) { return s.dep_constructs; })},
      {"# App + Dep Consts.", column([](const BomStats& s) { return s.total_constructs; })},
  };
  t.dependencies = {
      {"# All Dep.", column([](const BomStats& s) { return s.dependencies; })},
      {"# Runtime Dep.", column([](const BomStats& s) { return s.runtime_dependencies; })},
      {"# Test Dep.", column([](const BomStats& s) { return s.test_dependencies; })},
  };
  return t;
}

}  // namespace nodescan

#endif  // NODESCAN_BOM_HPP
