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

#include <string>
#include <vector>

#include "nodescan/detector.hpp"
#include "support/test_support.hpp"

namespace nodescan {
namespace {

using enum ConstructType;
using testing::fixture;

const VulnSignature& debug_signature() {
  static const VulnSignature sig = build_signature("CVE-2017-16137", "debug", fixture("kb-src/CVE-2017-16137/before"),
                                                   fixture("kb-src/CVE-2017-16137/after"), "");
  return sig;
}

const VulnSignature& lodash_signature() {
  static const VulnSignature sig = build_signature("CVE-2018-16487", "lodash", fixture("kb-src/CVE-2018-16487/before"),
                                                   fixture("kb-src/CVE-2018-16487/after"), "");
  return sig;
}

DependencyEntry entry(const std::string& name, const std::string& tree, std::string path, Scope scope, Depth depth) {
  DependencyEntry d{name, "1.0.0", std::move(path), scope, depth, {}};
  d.constructs = extract_package(fixture(tree), Fqn::root(name)).constructs;
  return d;
}

BillOfMaterials bom_of(std::vector<DependencyEntry> deps) {
  BillOfMaterials b;
  b.app_name = "app";
  b.dep_entries = std::move(deps);
  b.stats = compute_stats(b);
  return b;
}

std::vector<VulnSignature> kb_of(std::initializer_list<VulnSignature> sigs) { return sigs; }

TEST(Detect, ProjectADebugIsVulnerable) {
  const auto findings = detect(build_bom(fixture("ProjectA")), kb_of({debug_signature()}));
  ASSERT_EQ(findings.size(), 1u);
  const Finding& f = findings[0];
  EXPECT_EQ(f.status, Status::kVulnerable);
  EXPECT_EQ(f.vuln_id, "CVE-2017-16137");
  EXPECT_EQ(f.dependency.name, "debug");
  EXPECT_EQ(f.dependency.install_path, "node_modules/debug");
  EXPECT_EQ(f.dependency.scope, Scope::kTest);
  EXPECT_EQ(f.dependency.depth, Depth::kDirect);
  const auto hit = std::find_if(f.matches.begin(), f.matches.end(), [](const Match& m) {
    return m.bom_fqn == "debug.src.node.exports.formatters.o(v)";
  });
  ASSERT_NE(hit, f.matches.end());
  EXPECT_EQ(hit->evidence, Evidence::kVulnerable);
  EXPECT_EQ(hit->type, kFunc);
}

TEST(Detect, FixedCopyIsFixed) {
  const auto findings = detect(
      bom_of({entry("debug", "kb-src/CVE-2017-16137/after", "node_modules/debug", Scope::kTest, Depth::kDirect)}),
      kb_of({debug_signature()}));
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].status, Status::kFixed);
  for (const auto& m : findings[0].matches) EXPECT_EQ(m.evidence, Evidence::kFixed) << m.bom_fqn;
}

TEST(Detect, RepackagedCodeStillMatches) {
  const auto original = detect(
      bom_of({entry("debug", "kb-src/CVE-2017-16137/before", "node_modules/debug", Scope::kTest, Depth::kDirect)}),
      kb_of({debug_signature()}));
  const auto renamed = detect(
      bom_of({entry("dbg-fork", "kb-src/CVE-2017-16137/before", "node_modules/dbg-fork", Scope::kTest, Depth::kDirect)}),
      kb_of({debug_signature()}));
  ASSERT_EQ(original.size(), 1u);
  ASSERT_EQ(renamed.size(), 1u);
  EXPECT_EQ(renamed[0].status, original[0].status);
  EXPECT_EQ(renamed[0].dependency.name, "dbg-fork");
  EXPECT_EQ(renamed[0].signature_package, "debug");
  ASSERT_EQ(renamed[0].matches.size(), original[0].matches.size());
  for (std::size_t i = 0; i < renamed[0].matches.size(); ++i) {
    EXPECT_EQ(renamed[0].matches[i].evidence, original[0].matches[i].evidence);
    EXPECT_EQ(relative_fqn(Fqn::parse(renamed[0].matches[i].bom_fqn, "dbg-fork")),
              relative_fqn(Fqn::parse(original[0].matches[i].bom_fqn, "debug")));
  }
}

TEST(Detect, UnrelatedBodyIsInconclusive) {
  DependencyEntry d{"debug", "9.9.9", "node_modules/debug", Scope::kRuntime, Depth::kDirect, {}};
  const Fqn mod = Fqn::root("debug").child("src").child("node");
  d.constructs.push_back({kFunc, mod.child("exports").child("formatters").child("o(v)"), {}, "0", mod});
  const auto findings = detect(bom_of({d}), kb_of({debug_signature()}));
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].status, Status::kInconclusive);
  EXPECT_EQ(findings[0].matches[0].evidence, Evidence::kNameOnly);
}

TEST(Detect, RemovedConstructPresentIsVulnerable) {
  const auto findings = detect(
      bom_of({entry("lodash", "kb-src/CVE-2018-16487/before", "node_modules/lodash", Scope::kRuntime, Depth::kDirect)}),
      kb_of({lodash_signature()}));
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].status, Status::kVulnerable);
  const auto removed = std::find_if(findings[0].matches.begin(), findings[0].matches.end(),
                                    [](const Match& m) { return m.bom_fqn == "lodash.merge.createAssigner(assigner)"; });
  ASSERT_NE(removed, findings[0].matches.end());
  EXPECT_EQ(removed->evidence, Evidence::kVulnerable);
}

TEST(Detect, TypeMustAgree) {
  DependencyEntry d{"debug", "1", "node_modules/debug", Scope::kRuntime, Depth::kDirect, {}};
  const Fqn mod = Fqn::root("debug").child("src").child("node");
  d.constructs.push_back({kObjt, mod.child("exports").child("formatters").child("o(v)"), {}, "0", mod});
  EXPECT_TRUE(detect(bom_of({d}), kb_of({debug_signature()})).empty());
}

TEST(Detect, EmptyInputs) {
  EXPECT_TRUE(detect(build_bom(fixture("ProjectA")), {}).empty());
  EXPECT_TRUE(detect(bom_of({}), kb_of({debug_signature()})).empty());
}

TEST(Detect, MoreSignaturesNeverHideFindings) {
  const BillOfMaterials bom = bom_of(
      {entry("debug", "kb-src/CVE-2017-16137/before", "node_modules/debug", Scope::kTest, Depth::kDirect),
       entry("lodash", "kb-src/CVE-2018-16487/after", "node_modules/lodash", Scope::kRuntime, Depth::kTransitive)});
  const auto small = detect(bom, kb_of({debug_signature()}));
  const auto large = detect(bom, kb_of({debug_signature(), lodash_signature()}));
  for (const auto& f : small) EXPECT_NE(std::find(large.begin(), large.end(), f), large.end()) << f.vuln_id;
  EXPECT_EQ(large.size(), 2u);
}

TEST(Detect, SortedByIdThenPath) {
  const BillOfMaterials bom = bom_of(
      {entry("z", "kb-src/CVE-2017-16137/before", "node_modules/z", Scope::kTest, Depth::kDirect),
       entry("debug", "kb-src/CVE-2017-16137/before", "node_modules/a/node_modules/debug", Scope::kRuntime,
             Depth::kTransitive)});
  const auto findings = detect(bom, kb_of({debug_signature()}));
  ASSERT_EQ(findings.size(), 2u);
  EXPECT_EQ(findings[0].dependency.install_path, "node_modules/a/node_modules/debug");
}

TEST(Assess, Rules) {
  const Match v{"a", "a", kFunc, Evidence::kVulnerable};
  const Match f{"b", "b", kFunc, Evidence::kFixed};
  const Match n{"c", "c", kFunc, Evidence::kNameOnly};
  EXPECT_EQ(assess(std::vector<Match>{f, v}), Status::kVulnerable);
  EXPECT_EQ(assess(std::vector<Match>{f, f}), Status::kFixed);
  EXPECT_EQ(assess(std::vector<Match>{f, n}), Status::kInconclusive);
  EXPECT_EQ(assess(std::vector<Match>{}), Status::kInconclusive);
}

TEST(Tabulate, SingleFinding) {
  const auto rows = tabulate_findings(detect(build_bom(fixture("ProjectA")), kb_of({debug_signature()})));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (FeatureRow{"CVE-2017-16137", 0, 0, 1, 0}));
}

TEST(Tabulate, TwoInstallPaths) {
  const BillOfMaterials bom = bom_of(
      {entry("debug", "kb-src/CVE-2017-16137/before", "node_modules/debug", Scope::kTest, Depth::kDirect),
       entry("debug", "kb-src/CVE-2017-16137/before", "node_modules/express/node_modules/debug", Scope::kRuntime,
             Depth::kTransitive),
       entry("debug", "kb-src/CVE-2017-16137/after", "node_modules/mocha/node_modules/debug", Scope::kTest,
             Depth::kTransitive)});
  const auto rows = tabulate_findings(detect(bom, kb_of({debug_signature()})));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (FeatureRow{"CVE-2017-16137", 0, 1, 1, 0}));
  EXPECT_EQ(rows[0].total(), 2u);
}

TEST(Tabulate, Empty) { EXPECT_TRUE(tabulate_findings({}).empty()); }

}  // namespace
}  // namespace nodescan
