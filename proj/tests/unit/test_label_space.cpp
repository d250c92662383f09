// Copyright 2026 The jcrf Authors.
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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "jcrf/errors.hpp"
#include "jcrf/label_space.hpp"
#include "synthetic.hpp"

using namespace jcrf;

namespace {

RoleLabel vn_role(std::string name, RoleKind kind = RoleKind::CoreArgument) {
  return {Scheme::VN, std::move(name), kind};
}
RoleLabel pb_role(std::string name, RoleKind kind = RoleKind::CoreArgument) {
  return {Scheme::PB, std::move(name), kind};
}

RoleInventory vn_inv(std::vector<std::string> args) {
  std::vector<RoleLabel> r{vn_role("Verb", RoleKind::Verb), vn_role("O", RoleKind::Outside)};
  for (auto& a : args) r.push_back(vn_role(a));
  return {Scheme::VN, r};
}
RoleInventory pb_inv(std::vector<std::string> args) {
  std::vector<RoleLabel> r{pb_role("Verb", RoleKind::Verb), pb_role("O", RoleKind::Outside)};
  for (auto& a : args) r.push_back(pb_role(a, a.rfind("ArgM", 0) == 0 ? RoleKind::Modifier
                                                                       : RoleKind::CoreArgument));
  return {Scheme::PB, r};
}

bool has(const LabelSpace& s, const char* vn, const char* pb) {
  return s.find(BioTag::parse(vn), BioTag::parse(pb)).has_value();
}

std::set<std::string> label_strings(const LabelSpace& s) {
  std::set<std::string> out;
  for (const auto& l : s.labels()) out.insert(l.str());
  return out;
}

PredicateInstance joint_instance(const std::vector<std::string>& vn, const std::vector<std::string>& pb) {
  PredicateInstance inst;
  inst.instance_id = "x";
  inst.tokens.assign(vn.size(), "w");
  inst.vn_tags = parse_tags(vn);
  inst.pb_tags = parse_tags(pb);
  return inst;
}

}  // namespace

TEST_CASE("Theme/Arg1 space keeps aligned and one-sided pairs") {
  auto s = build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}));
  for (auto [v, p] : {std::pair{"B-Theme", "B-Arg1"}, {"I-Theme", "I-Arg1"}, {"B-Theme", "O"},
                      {"O", "B-Arg1"}, {"I-Theme", "O"}, {"O", "I-Arg1"}, {"O", "O"},
                      {"Verb", "Verb"}}) {
    CHECK_MESSAGE(has(s, v, p), v << "|" << p);
  }
  for (auto [v, p] : {std::pair{"B-Theme", "I-Arg1"}, {"I-Theme", "B-Arg1"}, {"Verb", "B-Arg1"},
                      {"Verb", "O"}, {"O", "Verb"}}) {
    CHECK_MESSAGE(!has(s, v, p), v << "|" << p);
  }
  CHECK(s.size() == 8);
}

TEST_CASE("no argument roles leaves only O|O and Verb|Verb") {
  auto s = build_label_space(vn_inv({}), pb_inv({}));
  CHECK(label_strings(s) == std::set<std::string>{"O|O", "Verb|Verb"});
}

TEST_CASE("filtered pair is absent in every prefix combination") {
  auto s = build_label_space(vn_inv({"Theme"}), pb_inv({"ArgM-Loc"}), {{"Theme", "ArgM-Loc"}});
  for (const auto& l : s.labels()) {
    CHECK_FALSE((l.vn.role == "Theme" && l.pb.role == "ArgM-Loc"));
  }
  CHECK(has(s, "B-Theme", "O"));
  CHECK(has(s, "O", "B-ArgM-Loc"));
}

TEST_CASE("inventory validation") {
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {vn_role("Verb", RoleKind::Verb), vn_role("O", RoleKind::Outside),
                                             vn_role("Theme"), vn_role("Theme")}),
                  InventoryError);
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {vn_role("O", RoleKind::Outside), vn_role("Theme")}),
                  InventoryError);
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {vn_role("Verb", RoleKind::Verb), vn_role("Theme")}),
                  InventoryError);
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {vn_role("Verb", RoleKind::Verb), vn_role("O", RoleKind::Outside),
                                             vn_role("")}),
                  InventoryError);
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {vn_role("V", RoleKind::Verb), vn_role("W", RoleKind::Verb),
                                             vn_role("O", RoleKind::Outside)}),
                  InventoryError);
  CHECK_THROWS_AS(RoleInventory(Scheme::VN, {pb_role("V", RoleKind::Verb), vn_role("O", RoleKind::Outside)}),
                  InventoryError);
}

TEST_CASE("filter naming an unknown role is a reference error") {
  CHECK_THROWS_AS(build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}), {{"Agent", "Arg1"}}),
                  ReferenceError);
  CHECK_THROWS_AS(build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}), {{"Theme", "Arg9"}}),
                  ReferenceError);
}

TEST_CASE("project reads one side") {
  auto s = build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}));
  CHECK(project(s.label(s.index_of(BioTag::begin("Theme"), BioTag::begin("Arg1"))), Scheme::VN) ==
        BioTag::begin("Theme"));
  CHECK(project(s.label(s.index_of(BioTag::outside(), BioTag::begin("Arg1"))), Scheme::VN) ==
        BioTag::outside());
  CHECK(project(s.label(s.index_of(BioTag::verb("Verb"), BioTag::verb("Verb"))), Scheme::PB) ==
        BioTag::verb("Verb"));
}

TEST_CASE("co-occurrence filter from counts") {
  std::vector<PredicateInstance> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(joint_instance({"B-Theme", "O"}, {"B-Arg1", "O"}));
  for (int i = 0; i < 3; ++i) corpus.push_back(joint_instance({"B-Agent", "I-Agent"}, {"B-Arg0", "I-Arg0"}));
  auto vn = vn_inv({"Agent", "Theme"});
  auto pb = pb_inv({"Arg0", "Arg1"});
  auto f = derive_cooccurrence_filter(corpus, vn, pb);
  CHECK(f.count({"Theme", "Arg0"}) == 1);
  CHECK(f.count({"Agent", "Arg1"}) == 1);
  CHECK(f.count({"Theme", "Arg1"}) == 0);
  CHECK(f.count({"Agent", "Arg0"}) == 0);
  CHECK(f.size() == 2);
}

TEST_CASE("co-occurrence filter edge cases") {
  auto vn = vn_inv({"Agent", "Theme"});
  auto pb = pb_inv({"Arg0", "Arg1"});
  CHECK(derive_cooccurrence_filter({}, vn, pb) ==
        RolePairSet{{"Agent", "Arg0"}, {"Agent", "Arg1"}, {"Theme", "Arg0"}, {"Theme", "Arg1"}});
  std::vector<PredicateInstance> all{
      joint_instance({"B-Agent", "B-Theme"}, {"B-Arg0", "B-Arg1"}),
      joint_instance({"B-Agent", "B-Theme"}, {"B-Arg1", "B-Arg0"}),
  };
  CHECK(derive_cooccurrence_filter(all, vn, pb).empty());
  auto bad = joint_instance({"B-Agent", "O"}, {"B-Arg0", "O"});
  bad.pb_tags->pop_back();
  CHECK_THROWS_AS(derive_cooccurrence_filter(std::vector{bad}, vn, pb), AlignmentError);
}

TEST_CASE("derived filter never excludes attested gold labels") {
  auto corpus = testing::generate_corpus(200, 5);
  auto space = testing::toy_space(corpus);
  for (const auto& inst : corpus) CHECK_NOTHROW(joint_indices(inst, space));
}

TEST_CASE("the modifier heuristic drops VN pairs with PB modifiers") {
  auto corpus = testing::generate_corpus(50, 5);
  // Attest one (Agent, ArgM-Loc) pair so only the heuristic can drop it.
  corpus.push_back(joint_instance({"B-Agent"}, {"B-ArgM-Loc"}));
  auto vn = testing::toy_vn();
  auto pb = testing::toy_pb();
  CHECK(derive_cooccurrence_filter(corpus, vn, pb).count({"Agent", "ArgM-Loc"}) == 0);
  CooccurrenceOptions opts;
  opts.drop_vn_modifier_pairs = true;
  CHECK(derive_cooccurrence_filter(corpus, vn, pb, opts).count({"Agent", "ArgM-Loc"}) == 1);
}

TEST_CASE("label-space properties over random inventories and filters") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.3);
  const std::vector<std::string> vn_names{"Agent", "Theme", "Patient", "Location"};
  const std::vector<std::string> pb_names{"Arg0", "Arg1", "Arg2", "ArgM-Loc"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> va;
    std::vector<std::string> pa;
    for (const auto& n : vn_names) {
      if (coin(rng) || va.empty()) va.push_back(n);
    }
    for (const auto& n : pb_names) {
      if (coin(rng) || pa.empty()) pa.push_back(n);
    }
    auto vn = vn_inv(va);
    auto pb = pb_inv(pa);
    RolePairSet filter;
    for (const auto& v : va) {
      for (const auto& p : pa) {
        if (coin(rng)) filter.insert({v, p});
      }
    }
    auto s = build_label_space(vn, pb, filter);
    const auto vn_tags = vn.bio_tags();
    const auto pb_tags = pb.bio_tags();
    CHECK(s.size() <= vn_tags.size() * pb_tags.size());
    CHECK(s.size() < vn_tags.size() * pb_tags.size());

    // Projections stay within each scheme's BIO expansion.
    for (const auto& l : s.labels()) {
      CHECK(std::find(vn_tags.begin(), vn_tags.end(), l.vn) != vn_tags.end());
      CHECK(std::find(pb_tags.begin(), pb_tags.end(), l.pb) != pb_tags.end());
      CHECK(structurally_admissible(l.vn, l.pb));
      CHECK(filter.count({l.vn.role, l.pb.role}) == 0);
    }
    // Bijective index, lexicographic order, determinism.
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.label(i).index == i);
      CHECK(s.index_of(s.label(i).vn, s.label(i).pb) == i);
      if (i > 0) {
        CHECK(std::pair(s.label(i - 1).vn.str(), s.label(i - 1).pb.str()) <
              std::pair(s.label(i).vn.str(), s.label(i).pb.str()));
      }
    }
    auto again = build_label_space(vn, pb, filter);
    CHECK(label_strings(again) == label_strings(s));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(again.label(i).str() == s.label(i).str());
    CHECK(s.find(BioTag::outside(), BioTag::outside()).has_value());
    CHECK(s.find(BioTag::verb("Verb"), BioTag::verb("Verb")).has_value());

    // Monotonicity under a larger filter.
    auto bigger = filter;
    bigger.insert({va.front(), pa.front()});
    CHECK(build_label_space(vn, pb, bigger).size() <= s.size());
  }
}

TEST_CASE("structure matrix encodes BIO on both sides") {
  auto s = build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}));
  auto st = s.structure();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& a = s.label(i);
    CHECK(st.start(static_cast<Eigen::Index>(i)) == (bio_can_start(a.vn) && bio_can_start(a.pb)));
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto& b = s.label(j);
      CHECK(st.transitions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            (bio_follows(a.vn, b.vn) && bio_follows(a.pb, b.pb)));
    }
  }
}

TEST_CASE("joint_indices rejects pairs outside the space") {
  auto s = build_label_space(vn_inv({"Theme"}), pb_inv({"Arg1"}), {{"Theme", "Arg1"}});
  CHECK_THROWS_AS(joint_indices(joint_instance({"B-Theme"}, {"B-Arg1"}), s), DataError);
}

TEST_CASE("inventory and filter files round trip") {
  auto vn = testing::toy_vn();
  auto pb = testing::toy_pb();
  std::stringstream inv;
  write_inventory(inv, vn, pb);
  auto [vn2, pb2] = split_inventories(read_inventory(inv));
  CHECK(vn2 == vn);
  CHECK(pb2 == pb);

  RolePairSet filter{{"Agent", "ArgM-Loc"}, {"Theme", "Arg0"}};
  std::stringstream f;
  write_filter(f, filter);
  CHECK(read_filter(f) == filter);

  std::istringstream bad("VN\tTheme\n");
  CHECK_THROWS_AS(read_inventory(bad), ParseError);
  std::istringstream bad_kind("VN\tTheme\tCore\n");
  CHECK_THROWS(read_inventory(bad_kind));
}
