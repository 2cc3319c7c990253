// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "doctest.h"
#include "helpers.hpp"

#include "eeorder/error.hpp"
#include "eeorder/experiment.hpp"
#include "eeorder/fixtures.hpp"
#include "eeorder/scales.hpp"

using namespace eeorder;
using eeorder::test::hmong;
using eeorder::test::lahu;

namespace {

Syllable tone(const std::string& t) { return {"n", "a", t}; }

OrderedPairExample ex(const Syllable& a, const Syllable& b, Label l) {
  OrderedPairExample e;
  e.b1_syll = a;
  e.b2_syll = b;
  e.label = l;
  return e;
}

}  // namespace

TEST_CASE("reference scales decide attested orders") {
  const Scale h = Scale::load(default_data_dir() / "hmong_reference.scale");
  CHECK(h.to_string() == "j < b < m < s < v < g < \xE2\x88\x85");
  CHECK(rule_decide(h, tone("j"), tone("")) == RuleOutcome::kAttested);
  CHECK(rule_decide(h, tone(""), tone("j")) == RuleOutcome::kUnattested);
  CHECK(rule_decide(h, tone("j"), tone("j")) == RuleOutcome::kTie);
  CHECK(rule_decide(h, tone("d"), tone("j")) == RuleOutcome::kTie);  // unranked

  const Scale l = Scale::load(default_data_dir() / "lahu_reference.scale");
  const auto& inv = lahu().inventory;
  CHECK(rule_decide(l, parse_syllable(inv, "ch\xC9\x94\xCC\x82"), parse_syllable(inv, "di")) ==
        RuleOutcome::kUnattested);
  CHECK(rule_decide(l, parse_syllable(inv, "ph\xC3\xB4?"), parse_syllable(inv, "di")) ==
        RuleOutcome::kAttested);

  const Scale mc = Scale::load(default_data_dir() / "mc_reference.scale");
  CHECK(mc.to_string() == "ping < shang < qu < ru");
}

TEST_CASE("scale text round-trips and rejects duplicates") {
  const Scale s = Scale::parse("focal: tone\nj\nb, m\n# comment\n0\nunranked: d\n");
  CHECK(s.groups().size() == 3);
  CHECK(s.rank("m") == s.rank("b"));
  CHECK(s.rank("") == 2u);
  CHECK(s.unranked().count("d") == 1);
  CHECK(Scale::parse(s.format()) == s);
  CHECK(s.reversed().rank("") == 0u);
  CHECK_THROWS_AS(Scale::parse("focal: tone\nj\nj\n"), Error);
  CHECK_THROWS_AS(Scale::parse("focal: tone\nj\nunranked: j\n"), Error);
  CHECK_THROWS_AS(rule_decide(s, tone("q"), tone("j")), Error);
}

TEST_CASE("rule accuracy on planted and tied data") {
  const Scale s = fixtures::planted_scale(hmong(), 7, 1);
  const auto data = fixtures::planted_scale_pairs(hmong(), s, 500, 0.0, 2);
  CHECK(rule_accuracy(s, data) == 1.0);
  CHECK(rule_accuracy(s.reversed(), data) == 0.0);

  LabeledDataset ties;
  for (int i = 0; i < 10; ++i)
    ties.push_back(ex(tone("j"), tone("j"), i % 2 ? Label::kAttested : Label::kUnattested));
  const Scale h = Scale::load(default_data_dir() / "hmong_reference.scale");
  CHECK(rule_accuracy(h, ties) == 0.5);
  const double c1 = rule_accuracy(h, ties, TiePolicy::random_coin(9));
  CHECK(c1 == rule_accuracy(h, ties, TiePolicy::random_coin(9)));
}

TEST_CASE("exhaustive search recovers planted orders and respects its bound") {
  const Scale planted = fixtures::planted_scale(hmong(), 7, 21);
  const auto data = fixtures::planted_scale_pairs(hmong(), planted, 2000, 0.0, 22);
  std::vector<std::string> symbols;
  for (const auto& g : planted.groups()) symbols.push_back(g[0]);
  std::sort(symbols.begin(), symbols.end());
  const auto one = search_best_scale(data, symbols, PhonemeClass::kTone, 1);
  const auto four = search_best_scale(data, symbols, PhonemeClass::kTone, 4);
  CHECK(one.scale.groups() == planted.groups());
  CHECK(one.train_accuracy == 1.0);
  CHECK(one.evaluated == 5040);
  CHECK(four.scale == one.scale);

  LabeledDataset single = {ex(tone("j"), tone("j"), Label::kAttested),
                           ex(tone("j"), tone("j"), Label::kUnattested)};
  const auto trivial = search_best_scale(single, {"j"}, PhonemeClass::kTone);
  CHECK(trivial.scale.groups().size() == 1);
  CHECK(trivial.train_accuracy == 0.5);

  const auto& rhymes = lahu().inventory.symbols(PhonemeClass::kRhyme);
  REQUIRE(rhymes.size() == 9);
  LabeledDataset ld = {ex({"d", rhymes[0], ""}, {"d", rhymes[1], ""}, Label::kAttested)};
  const auto nine = search_best_scale(ld, rhymes, PhonemeClass::kRhyme, 2);
  CHECK(nine.evaluated == 362880);
  CHECK(nine.scale.rank(rhymes[0]) < nine.scale.rank(rhymes[1]));

  std::vector<std::string> eleven;
  for (int i = 0; i < 11; ++i) eleven.push_back("t" + std::to_string(i));
  try {
    search_best_scale(single, eleven, PhonemeClass::kTone);
    FAIL("expected a limit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLimit);
  }
}

TEST_CASE("induced scales of the reference tree shapes") {
  CHECK(induce_scale_from_bundle(fixtures::hmong_reference_tree(hmong().inventory)).to_string() ==
        "j < b < m < v < s < g < \xE2\x88\x85");
  CHECK(induce_scale_from_bundle(fixtures::mc_reference_tree()).to_string() == "ping < shang < qu < ru");

  const auto space = FeatureSpace::build(hmong().inventory, FeatureSet::kFocal, PhonemeClass::kTone);
  const DecisionTree leaf({TreeNode{-1, 0.5, -1, -1, 10, 3}}, space.size(), TreeParams{});
  const Scale empty = induce_scale_from_tree(leaf, space, PhonemeClass::kTone);
  CHECK(empty.empty());
  CHECK(empty.unranked().size() == 8);
  const DecisionTree wrong({TreeNode{-1, 0.5, -1, -1, 1, 1}}, 3, TreeParams{});
  CHECK_THROWS_AS(induce_scale_from_tree(wrong, space, PhonemeClass::kTone), Error);
}

TEST_CASE("a tree trained on planted data predicts chain-shaped pairs") {
  const auto bundle = fixtures::hmong_reference_tree(hmong().inventory);
  const auto tree = DecisionTree::from_json(bundle.at("tree"));
  const auto space = FeatureSpace::from_json(bundle.at("space"));
  OrderedPairExample e;
  e.b1_syll = {"nt", "u", "j"};
  e.b2_syll = {"l", "o", ""};
  CHECK(tree.predict(encode(e, space)) == Label::kAttested);
}
