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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "nodescan/bom.hpp"
#include "support/test_support.hpp"

namespace nodescan {
namespace {

namespace fs = std::filesystem;
using testing::copy_tree;
using testing::fixture;
using testing::rendered;
using testing::slurp;
using testing::TempDir;
using testing::write_file;

/// Counts a package file by file: one MODU-rooted parse per source file plus
/// one PACK per directory that holds a source file somewhere below it.
std::size_t recount(const fs::path& dir, const std::string& root) {
  std::set<fs::path> packs{fs::path{}};
  std::size_t constructs = 0;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == "node_modules") {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file() || !is_js_source(it->path().filename().string())) continue;
    const fs::path rel = fs::relative(it->path(), dir);
    for (fs::path p = rel.parent_path(); !p.empty(); p = p.parent_path()) packs.insert(p);
    constructs += parse_module({Fqn::root(root), module_path_segments(rel.generic_string()), slurp(it->path())})
                      .constructs.size();
  }
  return constructs + packs.size();
}

TEST(Bom, ProjectA) {
  const BillOfMaterials bom = build_bom(fixture("ProjectA"));
  EXPECT_EQ(bom.app_name, "ProjectA");
  EXPECT_EQ(bom.app_version, "1.0.0");
  const auto app = rendered(bom.app_constructs);
  for (const char* want : {"MODU ProjectA.app", "MODU ProjectA.utils.util_b", "CLAS ProjectA.utils.util_b.Car()",
                           "CONS ProjectA.utils.util_b.Car().constructor(name,age)",
                           "METH ProjectA.utils.util_b.Car().drive(distance,direction)",
                           "OBJT ProjectA.utils.util_b.item_list", "FUNC ProjectA.utils.util_b.buy(item)"}) {
    EXPECT_NE(std::find(app.begin(), app.end(), want), app.end()) << want;
  }
  std::vector<std::string> deps;
  for (const auto& d : bom.dep_entries) deps.push_back(d.name + "@" + d.version);
  EXPECT_EQ(deps, (std::vector<std::string>{"debug@4.1.1", "ms@2.1.2", "moment@2.25.3"}));
  EXPECT_TRUE(bom.warnings.empty());
  EXPECT_TRUE(bom.diagnostics.empty());
}

TEST(Bom, StatsMatchAnIndependentRecount) {
  const BillOfMaterials bom = build_bom(fixture("ProjectA"));
  const std::size_t app = recount(fixture("ProjectA"), "ProjectA");
  std::size_t deps = 0;
  for (const auto& d : bom.dep_entries) deps += recount(fixture("ProjectA") / d.install_path, d.name);
  EXPECT_EQ(bom.stats.app_constructs, app);
  EXPECT_EQ(bom.stats.dep_constructs, deps);
  EXPECT_EQ(bom.stats.total_constructs, app + deps);
  // Counted by hand from the fixture sources.
  EXPECT_EQ(bom.stats, (BomStats{13, 19, 32, 3, 1, 2, 2, 1}));
}

TEST(Bom, FqnsAreUniqueAcrossPackages) {
  const BillOfMaterials bom = build_bom(fixture("ProjectA"));
  std::set<std::string> seen;
  for (const auto& c : bom.app_constructs) EXPECT_TRUE(seen.insert(c.fqn.render()).second);
  for (const auto& d : bom.dep_entries) {
    for (const auto& c : d.constructs) EXPECT_TRUE(seen.insert(c.fqn.render()).second) << c.fqn.render();
  }
}

TEST(Bom, Deterministic) {
  EXPECT_EQ(to_json(build_bom(fixture("ProjectA"))).dump(), to_json(build_bom(fixture("ProjectA"))).dump());
}

TEST(Bom, JsonRoundTrip) {
  const BillOfMaterials bom = build_bom(fixture("ProjectA"));
  const BillOfMaterials back = bom_from_json(to_json(bom));
  EXPECT_EQ(back.app_constructs, bom.app_constructs);
  EXPECT_EQ(back.dep_entries, bom.dep_entries);
  EXPECT_EQ(back.stats, bom.stats);
}

TEST(Bom, ZeroDependencies) {
  TempDir app;
  write_file(app / "package.json", R"({"name":"lonely","version":"0.1.0"})");
  write_file(app / "index.js", "function f() {}");
  const BillOfMaterials bom = build_bom(app.path());
  EXPECT_TRUE(bom.dep_entries.empty());
  EXPECT_EQ(bom.stats.dependencies, 0u);
  EXPECT_EQ(bom.stats.app_constructs, 3u);
}

TEST(Bom, MissingManifestIsFatal) {
  TempDir app;
  try {
    build_bom(app.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingManifest);
  }
}

TEST(Bom, MissingDependencyDirectoryIsAWarning) {
  TempDir app;
  copy_tree(fixture("ProjectA"), app.path());
  fs::remove_all(app / "node_modules/moment");
  const BillOfMaterials bom = build_bom(app.path());
  EXPECT_EQ(bom.dep_entries.size(), 2u);
  ASSERT_FALSE(bom.warnings.empty());
  EXPECT_NE(bom.warnings[0].find("moment"), std::string::npos);
}

TEST(Bom, WalkerFallbackWithoutLockfile) {
  TempDir app;
  copy_tree(fixture("ProjectA"), app.path());
  fs::remove(app / "package-lock.json");
  const BillOfMaterials with_walker = build_bom(app.path());
  const BillOfMaterials with_lock = build_bom(fixture("ProjectA"));
  EXPECT_EQ(with_walker.dep_entries, with_lock.dep_entries);
  EXPECT_EQ(with_walker.stats, with_lock.stats);
}

TEST(Bom, UnsupportedLockfileFallsBackWithAWarning) {
  TempDir app;
  copy_tree(fixture("ProjectA"), app.path());
  write_file(app / "package-lock.json", R"({"lockfileVersion":1,"dependencies":{}})");
  const BillOfMaterials bom = build_bom(app.path());
  EXPECT_EQ(bom.dep_entries.size(), 3u);
  EXPECT_FALSE(bom.warnings.empty());
}

// ---------------------------------------------------------------------------

BillOfMaterials with_stats(BomStats s) {
  BillOfMaterials b;
  b.stats = s;
  return b;
}

std::vector<BillOfMaterials> app_counts(std::initializer_list<std::size_t> counts) {
  std::vector<BillOfMaterials> out;
  for (std::size_t c : counts) out.push_back(with_stats({c, 2 * c, 3 * c, c, 0, c, c, 0}));
  return out;
}

TEST(Summarize, SmallSample) {
  const auto t = summarize(app_counts({3, 1, 2}));
  const Distribution& d = t.constructs[0].dist;
  EXPECT_EQ(t.constructs[0].label, "# App Consts.");
  EXPECT_DOUBLE_EQ(d.median, 2);
  EXPECT_DOUBLE_EQ(d.min, 1);
  EXPECT_DOUBLE_EQ(d.max, 3);
  EXPECT_DOUBLE_EQ(d.q1, 1.5);
  EXPECT_DOUBLE_EQ(d.q3, 2.5);
  EXPECT_DOUBLE_EQ(d.sd, 1);
}

TEST(Summarize, SingleObservation) {
  const auto t = summarize(app_counts({7}));
  const Distribution& d = t.constructs[0].dist;
  for (double v : {d.median, d.min, d.max, d.q1, d.q3}) EXPECT_DOUBLE_EQ(v, 7);
  EXPECT_DOUBLE_EQ(d.sd, 0);
  EXPECT_FALSE(d.sd_defined);
}

TEST(Summarize, SampleStandardDeviation) {
  // mean 5, squared deviations sum to 32, n - 1 = 7.
  const auto t = summarize(app_counts({2, 4, 4, 4, 5, 5, 7, 9}));
  const Distribution& d = t.constructs[0].dist;
  EXPECT_NEAR(d.sd, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_NEAR(d.sd, 2.138, 1e-3);
  EXPECT_DOUBLE_EQ(d.q1, 4);
  EXPECT_DOUBLE_EQ(d.median, 4.5);
  EXPECT_DOUBLE_EQ(d.q3, 5.5);
  EXPECT_NEAR(t.constructs[1].dist.sd, 2 * std::sqrt(32.0 / 7.0), 1e-12);
}

TEST(Summarize, RepeatedValueHasNoSpread) {
  const auto t = summarize(app_counts({4, 4, 4, 4}));
  for (const auto& row : t.constructs) EXPECT_DOUBLE_EQ(row.dist.sd, 0);
  EXPECT_DOUBLE_EQ(t.constructs[0].dist.median, 4);
}

TEST(Summarize, RowsAndEmptyInput) {
  const auto t = summarize(app_counts({1, 2}));
  std::vector<std::string> labels;
  for (const auto& r : t.constructs) labels.push_back(r.label);
  for (const auto& r : t.dependencies) labels.push_back(r.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"# App Consts.", "# Dep Consts.", "# App + Dep Consts.", "# All Dep.",
                                              "# Runtime Dep.", "# Test Dep."}));
  EXPECT_THROW(summarize(std::span<const BillOfMaterials>{}), Error);
}

}  // namespace
}  // namespace nodescan
