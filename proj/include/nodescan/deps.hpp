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

#ifndef NODESCAN_DEPS_HPP
#define NODESCAN_DEPS_HPP

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nodescan/error.hpp"
#include "nodescan/js_extractor.hpp"

namespace nodescan {

enum class Scope { kRuntime, kTest };
enum class Depth { kDirect, kTransitive };

inline std::string_view to_string(Scope s) { return s == Scope::kRuntime ? "runtime" : "test"; }
inline std::string_view to_string(Depth d) { return d == Depth::kDirect ? "direct" : "transitive"; }

inline Scope parse_scope(std::string_view s) {
  if (s == "runtime") return Scope::kRuntime;
  if (s == "test") return Scope::kTest;
  throw Error(ErrorCode::kMalformedJson, "unknown scope '" + std::string(s) + "'");
}
inline Depth parse_depth(std::string_view s) {
  if (s == "direct") return Depth::kDirect;
  if (s == "transitive") return Depth::kTransitive;
  throw Error(ErrorCode::kMalformedJson, "unknown depth '" + std::string(s) + "'");
}

using DependencyMap = std::map<std::string, std::string>;  // name -> range

/// The parts of a package.json the resolver cares about. Optional and peer
/// dependencies resolve like regular ones but may be absent from disk.
struct Manifest {
  std::string name;
  std::string version;
  DependencyMap dependencies;
  DependencyMap dev_dependencies;
  DependencyMap optional_dependencies;
  DependencyMap peer_dependencies;

  bool operator==(const Manifest&) const = default;
};

namespace detail {

inline nlohmann::json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson,
                std::string(what) + ": malformed JSON at byte offset " + std::to_string(e.byte));
  }
}

inline DependencyMap read_dependency_map(const nlohmann::json& obj, const char* key, std::string_view what) {
  DependencyMap out;
  if (!obj.contains(key) || obj[key].is_null()) return out;
  const auto& m = obj[key];
  if (!m.is_object()) throw Error(ErrorCode::kMalformedJson, std::string(what) + ": \"" + key + "\" is not an object");
  for (const auto& [name, range] : m.items()) {
    out.emplace(name, range.is_string() ? range.get<std::string>() : range.dump());
  }
  return out;
}

inline Manifest manifest_from_json(const nlohmann::json& j, bool require_name, std::string_view what) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, std::string(what) + ": expected a JSON object");
  Manifest m;
  if (j.contains("name") && j["name"].is_string()) {
    m.name = j["name"].get<std::string>();
  } else if (require_name) {
    throw Error(ErrorCode::kMissingField, std::string(what) + ": missing \"name\"");
  }
  if (j.contains("version") && j["version"].is_string()) m.version = j["version"].get<std::string>();
  m.dependencies = read_dependency_map(j, "dependencies", what);
  m.dev_dependencies = read_dependency_map(j, "devDependencies", what);
  m.optional_dependencies = read_dependency_map(j, "optionalDependencies", what);
  m.peer_dependencies = read_dependency_map(j, "peerDependencies", what);
  for (const auto& [name, range] : m.dev_dependencies) {
    auto it = m.dependencies.find(name);
    if (it != m.dependencies.end() && it->second != range) {
      throw Error(ErrorCode::kConflictingDeclaration,
                  std::string(what) + ": conflicting declaration of \"" + name + "\" (" + it->second +
                      " in dependencies, " + range + " in devDependencies)");
    }
  }
  return m;
}

}  // namespace detail

inline Manifest parse_manifest(std::string_view text) {
  return detail::manifest_from_json(detail::parse_json_text(text, "package.json"), true, "package.json");
}

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

struct DependencyNode {
  std::string name;
  std::string version;
  std::string install_path;  // relative to the application, "" for the root
  std::vector<std::size_t> children;
  std::optional<Scope> scope;
  std::optional<Depth> depth;
  std::optional<bool> lockfile_dev;  // the lockfile's own "dev" flag, when known
};

/// Node 0 is the application itself. Nodes are stored in depth-first
/// preorder with children visited by name, which is also the extraction order.
struct DependencyGraph {
  std::vector<DependencyNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // sorted, unique
  std::vector<std::string> warnings;

  const DependencyNode& root() const { return nodes.front(); }
  std::size_t dependency_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

namespace detail {

struct PackageRecord {
  Manifest manifest;
  std::string name;  // as addressed by dependents: the install directory name
  std::optional<bool> dev;
};

using PackageRecords = std::map<std::string, PackageRecord>;  // install path -> record

inline std::string name_from_install_path(std::string_view path) {
  const std::size_t pos = path.rfind("node_modules/");
  return std::string(pos == std::string_view::npos ? path : path.substr(pos + 13));
}

/// npm's nearest-ancestor lookup: <from>/node_modules/<name>, then the same
/// under each enclosing package, ending at the top-level node_modules.
inline std::optional<std::string> resolve(const PackageRecords& records, std::string from, const std::string& name) {
  while (true) {
    const std::string candidate = from.empty() ? "node_modules/" + name : from + "/node_modules/" + name;
    if (records.count(candidate)) return candidate;
    if (from.empty()) return std::nullopt;
    const std::size_t pos = from.rfind("/node_modules/");
    from = pos == std::string::npos ? std::string() : from.substr(0, pos);
  }
}

class GraphBuilder {
 public:
  GraphBuilder(const PackageRecords& records, bool dangling_is_error)
      : records_(records), dangling_is_error_(dangling_is_error) {}

  DependencyGraph build(const Manifest& root) {
    DependencyNode r;
    r.name = root.name;
    r.version = root.version;
    graph_.nodes.push_back(std::move(r));
    index_.emplace("", 0);
    visit(0, root, true);
    for (const auto& [path, rec] : records_) {
      if (!index_.count(path)) graph_.warnings.push_back("extraneous package not reachable from the root: " + path);
    }
    std::sort(graph_.edges.begin(), graph_.edges.end());
    graph_.edges.erase(std::unique(graph_.edges.begin(), graph_.edges.end()), graph_.edges.end());
    return std::move(graph_);
  }

 private:
  void visit(std::size_t node, const Manifest& m, bool is_root) {
    // name -> whether the declaration requires the package to be installed
    std::map<std::string, bool> declared;
    for (const auto& [n, r] : m.dependencies) declared[n] = true;
    if (is_root) {
      for (const auto& [n, r] : m.dev_dependencies) declared[n] = true;
    }
    for (const auto& [n, r] : m.optional_dependencies) declared.emplace(n, false);
    for (const auto& [n, r] : m.peer_dependencies) declared.emplace(n, false);

    const std::string from = graph_.nodes[node].install_path;
    for (const auto& [name, required] : declared) {
      const auto target = resolve(records_, from, name);
      if (!target) {
        if (!required) continue;
        const std::string where = is_root ? std::string("the application") : "\"" + from + "\"";
        if (dangling_is_error_) {
          throw Error(ErrorCode::kDanglingDependency,
                      "unresolved dependency \"" + name + "\" declared by " + where);
        }
        graph_.warnings.push_back("dependency \"" + name + "\" declared by " + where + " is not installed");
        continue;
      }
      auto it = index_.find(*target);
      if (it != index_.end()) {
        graph_.edges.emplace_back(node, it->second);
        graph_.nodes[node].children.push_back(it->second);
        continue;  // already visited: shared dependency or a cycle
      }
      const PackageRecord& rec = records_.at(*target);
      DependencyNode child;
      child.name = rec.name;
      child.version = rec.manifest.version;
      child.install_path = *target;
      child.lockfile_dev = rec.dev;
      const std::size_t idx = graph_.nodes.size();
      graph_.nodes.push_back(std::move(child));
      index_.emplace(*target, idx);
      graph_.edges.emplace_back(node, idx);
      graph_.nodes[node].children.push_back(idx);
      visit(idx, rec.manifest, false);
    }
  }

  const PackageRecords& records_;
  bool dangling_is_error_;
  DependencyGraph graph_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace detail

/// Builds the graph from a package-lock.json (lockfileVersion 2 or 3).
inline DependencyGraph parse_lockfile(std::string_view text) {
  const auto j = detail::parse_json_text(text, "package-lock.json");
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, "package-lock.json: expected a JSON object");
  const int version = j.contains("lockfileVersion") && j["lockfileVersion"].is_number_integer()
                          ? j["lockfileVersion"].get<int>()
                          : 1;
  if ((version != 2 && version != 3) || !j.contains("packages") || !j["packages"].is_object()) {
    throw Error(ErrorCode::kUnsupportedLockfile,
                "lockfileVersion " + std::to_string(version) +
                    " has no \"packages\" map; only versions 2 and 3 are supported, "
                    "fall back to walking node_modules");
  }
  const auto& packages = j["packages"];
  if (!packages.contains("")) {
    throw Error(ErrorCode::kUnsupportedLockfile,
                "package-lock.json has no root entry; fall back to walking node_modules");
  }
  Manifest root = detail::manifest_from_json(packages[""], false, "package-lock.json root entry");
  if (root.name.empty() && j.contains("name") && j["name"].is_string()) root.name = j["name"].get<std::string>();
  if (root.version.empty() && j.contains("version") && j["version"].is_string()) {
    root.version = j["version"].get<std::string>();
  }

  detail::PackageRecords records;
  for (const auto& [key, entry] : packages.items()) {
    if (key.empty() || key.find("node_modules/") == std::string::npos) continue;
    const std::string what = "package-lock.json entry \"" + key + "\"";
    detail::PackageRecord rec;
    const nlohmann::json* source = &entry;
    std::string path = key;
    if (entry.value("link", false) && entry.contains("resolved") && entry["resolved"].is_string()) {
      path = entry["resolved"].get<std::string>();
      if (packages.contains(path)) source = &packages[path];
    }
    rec.manifest = detail::manifest_from_json(*source, false, what);
    rec.name = detail::name_from_install_path(key);
    rec.dev = entry.value("dev", false);
    records.emplace(key, std::move(rec));
  }
  return detail::GraphBuilder(records, /*dangling_is_error=*/true).build(root);
}

/// Reconstructs the graph from an installed node_modules tree.
inline DependencyGraph walk_node_modules(const std::filesystem::path& app_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(app_dir / "node_modules", ec)) {
    throw Error(ErrorCode::kMissingNodeModules,
                "no node_modules directory under " + app_dir.string() + "; install dependencies (npm install) first");
  }
  const auto root_text = read_file(app_dir / "package.json");
  if (!root_text) throw Error(ErrorCode::kMissingManifest, "missing package.json in " + app_dir.string());
  const Manifest root = parse_manifest(*root_text);

  detail::PackageRecords records;
  std::vector<std::string> warnings;

  auto sorted_children = [](const fs::path& dir) {
    std::vector<std::string> names;
    std::error_code iec;
    for (const auto& e : fs::directory_iterator(dir, iec)) {
      std::error_code sec;
      if (e.is_directory(sec)) names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
  };

  std::vector<std::string> pending{""};  // owners whose node_modules to scan
  while (!pending.empty()) {
    const std::string owner = pending.back();
    pending.pop_back();
    const std::string prefix = owner.empty() ? "node_modules/" : owner + "/node_modules/";
    std::vector<std::string> package_names;
    for (const auto& n : sorted_children(app_dir / prefix)) {
      if (n.empty() || n.front() == '.') continue;
      if (n.front() == '@') {
        for (const auto& s : sorted_children(app_dir / prefix / n)) package_names.push_back(n + "/" + s);
      } else {
        package_names.push_back(n);
      }
    }
    for (const auto& n : package_names) {
      const std::string path = prefix + n;
      const auto text = read_file(app_dir / path / "package.json");
      if (!text) {
        warnings.push_back("no package.json in " + path + "; skipped");
        continue;
      }
      detail::PackageRecord rec;
      try {
        rec.manifest = detail::manifest_from_json(detail::parse_json_text(*text, path + "/package.json"), false,
                                                  path + "/package.json");
      } catch (const Error& e) {
        warnings.push_back(std::string(e.what()) + "; skipped");
        continue;
      }
      rec.name = n;
      records.emplace(path, std::move(rec));
      if (fs::is_directory(app_dir / path / "node_modules", ec)) pending.push_back(path);
    }
  }

  DependencyGraph g = detail::GraphBuilder(records, /*dangling_is_error=*/false).build(root);
  g.warnings.insert(g.warnings.begin(), warnings.begin(), warnings.end());
  return g;
}

/// Fills scope and depth. A node is direct when the application itself
/// depends on it (nested copies of the same name stay transitive), and
/// runtime when some path from the application reaches it through a
/// production dependency; otherwise it is a test dependency.
inline DependencyGraph classify(DependencyGraph graph, const Manifest& root_manifest) {
  const std::string kTag = "lockfile marks ";
  std::erase_if(graph.warnings, [&](const std::string& w) { return w.rfind(kTag, 0) == 0; });
  if (graph.nodes.empty()) return graph;

  std::vector<bool> runtime(graph.nodes.size(), false);
  std::deque<std::size_t> queue;
  for (auto& n : graph.nodes) {
    n.scope.reset();
    n.depth = Depth::kTransitive;
  }
  graph.nodes[0].depth.reset();
  for (std::size_t child : graph.nodes[0].children) {
    DependencyNode& n = graph.nodes[child];
    n.depth = Depth::kDirect;
    const bool production = root_manifest.dependencies.count(n.name) ||
                            root_manifest.optional_dependencies.count(n.name) ||
                            root_manifest.peer_dependencies.count(n.name);
    if (production && !runtime[child]) {
      runtime[child] = true;
      queue.push_back(child);
    }
  }
  while (!queue.empty()) {
    const std::size_t at = queue.front();
    queue.pop_front();
    for (std::size_t c : graph.nodes[at].children) {
      if (!runtime[c]) {
        runtime[c] = true;
        queue.push_back(c);
      }
    }
  }
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    DependencyNode& n = graph.nodes[i];
    n.scope = runtime[i] ? Scope::kRuntime : Scope::kTest;
    if (n.lockfile_dev && *n.lockfile_dev != (n.scope == Scope::kTest)) {
      graph.warnings.push_back(kTag + n.install_path + (*n.lockfile_dev ? " as dev" : " as non-dev") +
                               " but it is a " + std::string(to_string(*n.scope)) + " dependency");
    }
  }
  return graph;
}

inline nlohmann::ordered_json to_json(const DependencyGraph& g) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    nlohmann::ordered_json j;
    j["name"] = n.name;
    j["version"] = n.version;
    j["path"] = n.install_path;
    j["scope"] = n.scope ? nlohmann::ordered_json(to_string(*n.scope)) : nlohmann::ordered_json();
    j["depth"] = n.depth ? nlohmann::ordered_json(to_string(*n.depth)) : nlohmann::ordered_json();
    nodes.push_back(std::move(j));
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [from, to] : g.edges) edges.push_back({from, to});
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

}  // namespace nodescan

#endif  // NODESCAN_DEPS_HPP
