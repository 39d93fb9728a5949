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

#include "nodescan/construct.hpp"
#include "nodescan/digest.hpp"

namespace nodescan {
namespace {

using enum ConstructType;

Fqn util_b() { return Fqn::from_segments({"ProjectA", "utils", "util_b"}); }

std::string build(const Fqn& parent, ConstructType t, const std::string& name, std::vector<std::string> args = {}) {
  return build_fqn(parent, t, name, args).render();
}

TEST(BuildFqn, CallablesCarryTheirParameters) {
  EXPECT_EQ(build(util_b(), kFunc, "buy", {"item"}), "ProjectA.utils.util_b.buy(item)");
  const Fqn car = build_fqn(util_b(), kClas, "Car");
  EXPECT_EQ(car.render(), "ProjectA.utils.util_b.Car()");
  EXPECT_EQ(build(car, kMeth, "drive", {"distance", "direction"}), "ProjectA.utils.util_b.Car().drive(distance,direction)");
  EXPECT_EQ(build(car, kCons, "constructor", {"name", "age"}), "ProjectA.utils.util_b.Car().constructor(name,age)");
  EXPECT_EQ(build(util_b(), kFunc, "noop"), "ProjectA.utils.util_b.noop()");
}

TEST(BuildFqn, BareNames) {
  EXPECT_EQ(build(util_b(), kObjt, "item_list"), "ProjectA.utils.util_b.item_list");
  EXPECT_EQ(build(Fqn::root("ProjectA"), kPack, "utils"), "ProjectA.utils");
  EXPECT_EQ(build(Fqn::root("ProjectA"), kModu, "app"), "ProjectA.app");
}

TEST(BuildFqn, ClassBase) {
  EXPECT_EQ(build(util_b(), kClas, "Truck", {"Car"}), "ProjectA.utils.util_b.Truck(Car)");
  EXPECT_THROW(build(util_b(), kClas, "X", {"A", "B"}), Error);
}

TEST(BuildFqn, Anonymous) {
  const Fqn m = Fqn::root("M");
  const std::vector<std::string> args{"v"};
  EXPECT_EQ(build_fqn(m, kFunc, Anonymous{9, 5}, args).render(), "M.<anon:L9:C5>(v)");
}

TEST(BuildFqn, RejectsDottedNamesAndStrayArguments) {
  try {
    build(util_b(), kFunc, "a.b");
    FAIL() << "dotted name accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidName);
  }
  EXPECT_THROW(build(util_b(), kFunc, "f", {"x.y"}), Error);
  EXPECT_THROW(build(util_b(), kObjt, "o", {"x"}), Error);
  EXPECT_THROW(build(util_b(), kModu, "m", {"x"}), Error);
  EXPECT_THROW(build(util_b(), kPack, "p", {"x"}), Error);
  EXPECT_THROW(build(util_b(), kFunc, ""), Error);
  EXPECT_THROW(build_fqn(Fqn{}, kFunc, std::string("f")), Error);
}

TEST(RelativeFqn, StripsTheRootOnly) {
  EXPECT_EQ(relative_fqn(Fqn::parse("debug.src.node.exports.formatters.o(v)", "debug")),
            "src.node.exports.formatters.o(v)");
  EXPECT_EQ(relative_fqn(Fqn::root("ProjectA")), "");
  EXPECT_EQ(relative_fqn(util_b()), "utils.util_b");
}

TEST(RelativeFqn, DropsExactlyOneSegmentBelowARoot) {
  for (const char* root : {"ProjectA", "@scope/pkg.js", "lodash"}) {
    for (ConstructType t : kAllConstructTypes) {
      const Fqn f = build_fqn(Fqn::root(root), t, std::string("x"));
      EXPECT_EQ(f.size(), 2u);
      EXPECT_EQ(relative_fqn(f), f.segments()[1]);
    }
  }
}

TEST(Fqn, ScopedRootIsOpaque) {
  const Fqn f = Fqn::root("@babel/core").child("lib").child("index");
  EXPECT_EQ(f.render(), "@babel/core.lib.index");
  EXPECT_EQ(Fqn::parse(f.render()), f);
  EXPECT_EQ(relative_fqn(f), "lib.index");
  const Fqn dotted = Fqn::root("socket.io").child("lib");
  EXPECT_EQ(Fqn::parse(dotted.render(), "socket.io"), dotted);
}

TEST(Fqn, PrefixRelation) {
  const Fqn car = build_fqn(util_b(), kClas, "Car");
  EXPECT_TRUE(util_b().is_strict_prefix_of(car));
  EXPECT_FALSE(car.is_strict_prefix_of(car));
  EXPECT_FALSE(car.is_strict_prefix_of(util_b()));
  EXPECT_EQ(car.parent(), util_b());
}

TEST(Fqn, RejectsMalformedInput) {
  EXPECT_THROW(Fqn::root(""), Error);
  EXPECT_THROW(Fqn::from_segments({}), Error);
  EXPECT_THROW(Fqn::from_segments({"a", ""}), Error);
  EXPECT_THROW(Fqn::parse("other.x", "ProjectA"), Error);
  EXPECT_THROW(Fqn::parse("ProjectA..x", "ProjectA"), Error);
}

TEST(ConstructType, RoundTripsItsCode) {
  for (ConstructType t : kAllConstructTypes) EXPECT_EQ(parse_construct_type(to_string(t)), t);
  EXPECT_THROW(parse_construct_type("NOPE"), Error);
}

TEST(ConstructJson, FieldOrderIsFixed) {
  Construct c{kFunc, build_fqn(util_b(), kFunc, std::string("buy"), std::vector<std::string>{"item"}),
              {5, 1, 7, 1}, normalize_and_digest("{ return 1; }"), util_b()};
  EXPECT_EQ(to_json(c).dump(),
            "{\"type\":\"FUNC\",\"fqn\":\"ProjectA.utils.util_b.buy(item)\",\"span\":[5,1,7,1],"
            "\"digest\":\"4c071c3330125cde9ce10b97f2627e3d5deea2bd316f9f4cd761a92b5e426d4d\","
            "\"parent\":\"ProjectA.utils.util_b\"}");
  EXPECT_EQ(construct_from_json(to_json(c), "ProjectA"), c);
}

TEST(ConstructJson, RootPackHasNoParent) {
  Construct root{kPack, Fqn::root("socket.io"), {1, 1, 1, 1}, empty_digest(), std::nullopt};
  const Json j = to_json(root);
  EXPECT_FALSE(j.contains("parent"));
  EXPECT_EQ(construct_from_json(j, "socket.io"), root);
}

TEST(ConstructJson, RejectsMalformed) {
  EXPECT_THROW(construct_from_json(Json{{"type", "FUNC"}}), Error);
  EXPECT_THROW(construct_from_json(Json{{"type", "FUNC"}, {"fqn", "a.b"}, {"span", {1, 2}}, {"digest", ""}}), Error);
}

TEST(LegalParent, FollowsTheTaxonomy) {
  EXPECT_TRUE(legal_parent(kPack, std::nullopt));
  EXPECT_TRUE(legal_parent(kModu, kPack));
  EXPECT_TRUE(legal_parent(kMeth, kClas));
  EXPECT_TRUE(legal_parent(kCons, kClas));
  EXPECT_FALSE(legal_parent(kMeth, kModu));
  EXPECT_FALSE(legal_parent(kFunc, std::nullopt));
}

}  // namespace
}  // namespace nodescan
