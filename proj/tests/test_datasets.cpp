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

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"

#include "eeorder/corpus.hpp"
#include "eeorder/datasets.hpp"
#include "eeorder/error.hpp"
#include "eeorder/fixtures.hpp"

using namespace eeorder;
using eeorder::test::hmong;
using eeorder::test::lahu;

namespace {

PairRecord rec(std::string a, std::string b1, std::string b2) {
  PairRecord r;
  r.language = "hmong";
  r.a = std::move(a);
  r.b1 = std::move(b1);
  r.b2 = std::move(b2);
  r.b1_syll = parse_syllable(hmong().inventory, r.b1);
  r.b2_syll = parse_syllable(hmong().inventory, r.b2);
  return r;
}

std::set<std::tuple<std::string, std::string, Label>> triples(const LabeledDataset& d) {
  std::set<std::tuple<std::string, std::string, Label>> out;
  for (const auto& e : d) out.insert({e.b1, e.b2, e.label});
  return out;
}

}  // namespace

TEST_CASE("EE list rows load with their form") {
  const auto list = parse_ee_list(
      "language\tform\ta\tb1\tb2\n"
      "hmong\tAB1AB2\tsiab\tntuj\tlo\n"
      "hmong\tAB1AB2\tsiab\tntuj\tntuj\n"
      "hmong\tAB1AB2\tsiab\tntuj\tlo\n"
      "hmong\tAB1AB2\tsiab\tqqq9\tlo\n",
      hmong());
  REQUIRE(list.records.size() == 1);
  CHECK(list.records[0].b1_syll == Syllable{"nt", "u", "j"});
  CHECK(list.report.dropped_identical == 1);
  CHECK(list.report.duplicates_removed == 1);
  CHECK(list.report.dropped_unparsable == 1);

  const auto l = parse_ee_list("lahu\tB1AB2A\tch\xC3\xB4\tph\xC3\xB4?\tdi\n", lahu());
  REQUIRE(l.records.size() == 1);
  CHECK(l.records[0].form == RecordForm::kB1AB2A);
  CHECK_THROWS_AS(parse_ee_list("hmong\tXYZ\ta\tntuj\tlo\n", hmong()), Error);
  CHECK_THROWS_AS(parse_ee_list("hmong\tAB1AB2\ta\n", hmong()), Error);
}

TEST_CASE("swap augmentation mirrors every record") {
  const auto one = augment_with_swaps({rec("A", "ntuj", "lo")}, 1);
  CHECK(triples(one) == std::set<std::tuple<std::string, std::string, Label>>{
                            {"ntuj", "lo", Label::kAttested}, {"lo", "ntuj", Label::kUnattested}});
  const auto both = augment_with_swaps({rec("A", "ntuj", "lo"), rec("B", "lo", "ntuj")}, 1);
  CHECK(both.size() == 2);
  for (const auto& e : both) CHECK(e.label == Label::kAttested);
}

TEST_CASE("every unattested example has its attested mirror") {
  const auto& scale = fixtures::planted_scale(hmong(), 7, 3);
  const auto records = fixtures::planted_scale_records(hmong(), scale, 300, 5);
  const auto data = augment_with_swaps(records, 9);
  std::set<std::pair<std::string, std::string>> attested;
  for (const auto& e : data)
    if (e.label == Label::kAttested) attested.insert({e.b1, e.b2});
  for (const auto& e : data)
    if (e.label == Label::kUnattested) CHECK(attested.count({e.b2, e.b1}) == 1);
}

TEST_CASE("split_then_augment partitions by ratio and is deterministic") {
  std::vector<PairRecord> records;
  const auto scale = fixtures::planted_scale(hmong(), 7, 3);
  records = fixtures::planted_scale_records(hmong(), scale, 100, 11);
  REQUIRE(records.size() == 100);
  SplitSpec spec{0.7, 0.0, 0.3, 7, 1};
  const auto a = split_then_augment(records, spec);
  const auto b = split_then_augment(records, spec);
  CHECK(a.train_records.size() == 70);
  CHECK(a.test_records.size() == 30);
  CHECK(triples(a.train) == triples(b.train));
  CHECK(triples(a.test) == triples(b.test));
  SplitSpec bad{0.5, 0.1, 0.1, 1, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("records sharing a pair with different A may straddle the split") {
  std::vector<PairRecord> records;
  for (int i = 0; i < 40; ++i) records.push_back(rec("a" + std::to_string(i), "ntuj", "lo"));
  const auto s = split_then_augment(records, SplitSpec{0.7, 0.0, 0.3, 3, 1});
  CHECK(s.straddling_pairs == 1);
}

TEST_CASE("unique-pair subsets keep one record per unordered pair") {
  const std::vector<PairRecord> r = {rec("A", "ntuj", "lo"), rec("B", "ntuj", "lo"), rec("C", "txiv", "niam")};
  const auto subsets = sample_unique_pairs(r, 5, 10);
  REQUIRE(subsets.size() == 10);
  std::set<std::string> survivors;
  for (const auto& s : subsets) {
    CHECK(s.size() == 2);
    for (const auto& x : s)
      if (x.b1 == "ntuj") survivors.insert(x.a);
  }
  CHECK(survivors == std::set<std::string>{"A", "B"});
}

TEST_CASE("component overlap counts same and reversed orders") {
  const std::vector<PairRecord> test = {rec("A", "ntuj", "lo")};
  const auto same = component_overlap_analysis({rec("Q", "ntuj", "lo")}, test);
  CHECK(same.same_order_ee == 1);
  CHECK(same.reversed_ee == 0);
  const auto rev = component_overlap_analysis({rec("Q", "lo", "ntuj")}, test);
  CHECK(rev.reversed_ee == 1);
  const auto self = component_overlap_analysis({rec("A", "ntuj", "lo")}, test);
  CHECK(self.same_order_ee == 0);

  // Planted 9:1: nine training EEs in the same order, one reversed.
  std::vector<PairRecord> train;
  for (int i = 0; i < 9; ++i) train.push_back(rec("s" + std::to_string(i), "ntuj", "lo"));
  train.push_back(rec("r", "lo", "ntuj"));
  const auto nine = component_overlap_analysis(train, test);
  CHECK(nine.same_order_ee == 9);
  CHECK(nine.reversed_ee == 1);

  const auto bigrams = bigram_counts(std::vector<std::vector<std::string>>{{"x", "ntuj", "lo", "lo", "ntuj"}});
  const auto cc = component_overlap_analysis({}, test, &bigrams);
  CHECK(cc.same_order_cc == 1);
  CHECK(cc.reversed_cc == 1);
}

namespace {

TaggedCorpus toy_corpus() {
  return parse_tagged_corpus(
      "x\tO\nA\tB\nu\tI\nA\tI\nv\tI\ny\tO\n\n"
      "A\tB\nu\tI\nA\tI\nv\tI\n\n"
      "C\tB\np\tI\nC\tI\nq\tI\nz\tO\n\n"
      "k\tO\nl\tO\n");
}

}  // namespace

TEST_CASE("swap corpus exchanges B1 and B2 and retags every occurrence") {
  const auto gold = toy_corpus();
  const auto all = generate_swap_corpus(gold, {}, 1.0, 3);
  CHECK(all.swapped.size() == 2);
  const auto& s0 = all.corpus.sentences[0];
  CHECK(s0.tokens == std::vector<std::string>{"x", "A", "v", "A", "u", "y"});
  CHECK(s0.tags == std::vector<Tag>{Tag::kO, Tag::kBFake, Tag::kIFake, Tag::kIFake, Tag::kIFake, Tag::kO});
  CHECK(all.corpus.sentences[1].tags[0] == Tag::kBFake);

  const auto none = generate_swap_corpus(gold, {}, 0.0, 3);
  CHECK(format_tagged_corpus(none.corpus) == format_tagged_corpus(gold));

  const auto half = generate_swap_corpus(gold, {}, 0.5, 3);
  CHECK(half.swapped.size() == 1);
  CHECK(half.corpus.sentences[0].tags[1] == half.corpus.sentences[1].tags[0]);
  CHECK(well_formed(half.corpus));
}

TEST_CASE("well-formedness of tag sequences") {
  using T = Tag;
  CHECK(well_formed(std::vector<Tag>{T::kO, T::kB, T::kI, T::kI, T::kI, T::kO}));
  CHECK_FALSE(well_formed(std::vector<Tag>{T::kO, T::kI}));
  CHECK_FALSE(well_formed(std::vector<Tag>{T::kB, T::kI, T::kI}));
  CHECK_FALSE(well_formed(std::vector<Tag>{T::kB, T::kIFake, T::kI, T::kI}));
}

TEST_CASE("corpus splits keep EEs disjoint across partitions") {
  // Twenty EEs e0..e19, each in two sentences, plus negatives.
  TaggedCorpus c;
  for (int e = 0; e < 20; ++e)
    for (int k = 0; k < 2; ++k)
      c.sentences.push_back({{"w", "a" + std::to_string(e), "b", "a" + std::to_string(e), "c"},
                             {Tag::kO, Tag::kB, Tag::kI, Tag::kI, Tag::kI}});
  for (int n = 0; n < 20; ++n) c.sentences.push_back({{"n", "o"}, {Tag::kO, Tag::kO}});

  const auto splits = split_corpus_by_ee(c, CorpusRatios{0.9, 0.05, 0.05}, 3, 4);
  REQUIRE(splits.size() == 3);
  std::set<std::vector<std::string>> partitions;
  for (const auto& s : splits) {
    CHECK(s.train_ees.size() == 18);
    CHECK(s.dev_ees.size() == 1);
    CHECK(s.test_ees.size() == 1);
    partitions.insert(s.test_ees);
    std::set<std::string> train_keys;
    for (const auto& sent : s.train.sentences)
      for (const auto& sp : spans(sent.tags)) train_keys.insert(span_key(sent.tokens, sp.start));
    for (const auto& k : s.test_ees) CHECK(train_keys.count(k) == 0);
    // Test EEs never occur in train sentences, tagged or not.
    for (const auto& sent : s.train.sentences)
      for (std::size_t i = 0; i + 4 <= sent.tokens.size(); ++i)
        for (const auto& k : s.test_ees) CHECK(span_key(sent.tokens, i) != k);
    CHECK(s.train.sentences.size() + s.dev.sentences.size() + s.test.sentences.size() == c.sentences.size());
  }
  CHECK(partitions.size() >= 2);
}
