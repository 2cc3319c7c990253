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

#include "eeorder/corpus.hpp"
#include "eeorder/error.hpp"
#include "eeorder/fixtures.hpp"
#include "eeorder/tagging.hpp"
#include "eeorder/text.hpp"

using namespace eeorder;
using eeorder::test::hmong;

namespace {

Sentence words(const std::string& s) { return text::split_ws(s); }

std::vector<Tag> tags(const std::string& s) {
  std::vector<Tag> out;
  for (const auto& t : text::split_ws(s)) out.push_back(tag_from_string(t));
  return out;
}

const fixtures::PlantedCorpus& small_corpus() {
  static const auto pc = [] {
    fixtures::PlantedCorpusParams p;
    p.sentences = 1500;
    p.ees = 120;
    p.distractors = 300;
    p.exception_rate = 0.2;
    p.lookalike_share = 0.1;
    p.seed = 5;
    return fixtures::planted_corpus(hmong(), p);
  }();
  return pc;
}

PRF span_prf(unsigned stages) {
  const auto& pc = small_corpus();
  BaselineParams bp;
  bp.stages = stages;
  const auto r = baseline_tag(pc.gold.untagged(), hmong(), &pc.embeddings, &pc.scale, bp);
  return evaluate_tags(r.tagged, pc.gold).span;
}

}  // namespace

TEST_CASE("candidates are 4-grams with w1 == w3") {
  const auto a = find_candidates(words("a b a c d"));
  REQUIRE(a.size() == 1);
  CHECK(a[0].start == 0);
  CHECK(find_candidates(words("a b c d")).empty());
  CHECK(find_candidates(words("a b a b")).empty());
  CHECK(find_candidates(words("a b a b"), false).size() == 1);
  CHECK(find_candidates(words("x a b a c a d")).size() == 2);
}

TEST_CASE("stage lists parse") {
  CHECK(parse_stages("none") == kStageNone);
  CHECK(parse_stages("parsable,sim,scale") == (kStageParsable | kStageSimilarity | kStageScale));
  CHECK(parse_stages("all") == (kStageParsable | kStageSimilarity | kStageScale));
  CHECK(parse_stages("scale") == kStageScale);
  CHECK_THROWS_AS(parse_stages("fast"), Error);
  CHECK(stages_to_string(kStageParsable | kStageScale) == "parsable,scale");
}

TEST_CASE("baseline cascade: recall 100% with no stages, precision rises") {
  const PRF none = span_prf(kStageNone);
  const PRF parsable = span_prf(kStageParsable);
  const PRF sim = span_prf(kStageParsable | kStageSimilarity);
  const PRF all = span_prf(kStageParsable | kStageSimilarity | kStageScale);
  CHECK(none.recall == 1.0);
  CHECK(parsable.precision > none.precision);
  CHECK(sim.precision > parsable.precision);
  CHECK(all.precision > sim.precision);
  CHECK(all.recall <= 1.0);
  CHECK(all.recall < 1.0);  // planted exceptions are lost
}

TEST_CASE("similarity and scale stages drop the planted distractor types") {
  const auto& pc = small_corpus();
  BaselineParams bp;
  bp.stages = kStageParsable | kStageSimilarity | kStageScale;
  const auto r = baseline_tag(pc.gold.untagged(), hmong(), &pc.embeddings, &pc.scale, bp);
  CHECK(r.rejected_parsable >= pc.unparsable);
  CHECK(r.rejected_similarity >= pc.dissimilar);
  CHECK(r.rejected_scale >= pc.scale_violating);
  CHECK(r.accepted + r.rejected_parsable + r.rejected_similarity + r.rejected_scale + r.skipped_overlap ==
        r.candidates.size());
  // The similarity and scale stages need their resources.
  bp.stages = kStageSimilarity;
  CHECK_THROWS_AS(baseline_tag(pc.gold.untagged(), hmong(), nullptr, nullptr, bp), Error);
  bp.stages = kStageScale;
  CHECK_THROWS_AS(baseline_tag(pc.gold.untagged(), hmong(), nullptr, nullptr, bp), Error);
}

TEST_CASE("F1 and metric identities") {
  CHECK(f1_score(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(f1_score(0.0, 0.0) == 0.0);
  const auto m = evaluate_tags(small_corpus().gold, small_corpus().gold);
  CHECK(m.token.f1 == 1.0);
  CHECK(m.span.precision == 1.0);
  CHECK(m.span.recall == 1.0);
  TaggedCorpus short_one = small_corpus().gold;
  short_one.sentences.pop_back();
  CHECK_THROWS_AS(evaluate_tags(short_one, small_corpus().gold), Error);
}

TEST_CASE("in-context accuracy") {
  CHECK(100 * in_context_accuracy(439, 447, 4, 0) == doctest::Approx(99.55).epsilon(1e-4));
  CHECK(in_context_accuracy(10, 10, 0, 0) == 1.0);
  CHECK(in_context_accuracy(1, 1, 1, 1) == 0.5);
  CHECK_THROWS_AS(in_context_accuracy(0, 0, 0, 0), Error);
}

TEST_CASE("swap-corpus evaluation fills the fake rows of the confusion matrix") {
  const auto swapped = generate_swap_corpus(small_corpus().gold, {}, 0.5, 2).corpus;
  const auto m = evaluate_tags(swapped, swapped);
  const auto& cm = m.confusion;
  CHECK(cm[int(Tag::kBFake)][int(Tag::kBFake)] > 0);
  CHECK(in_context_accuracy(cm) == 1.0);
  CHECK(metrics_json(m).contains("in_context_accuracy"));
  CHECK(confusion_csv(cm).find("B-fake") != std::string::npos);
}

TEST_CASE("repair rules") {
  RepairCounts c;
  CHECK(repair_tags(tags("B I I O"), &c) == tags("O O O O"));
  CHECK(c.incomplete == 1);
  CHECK(repair_tags(tags("B I I I")) == tags("B I I I"));
  CHECK(repair_tags(tags("O I O")) == tags("O O O"));
  CHECK(repair_tags(tags("B I I I I O")) == tags("B I I I O O"));
  CHECK(repair_tags(tags("B-fake I I-fake I")) == tags("B-fake I-fake I-fake I-fake"));
  for (const auto& raw : {"B I B I I I", "I I B I", "B-fake I I I I I B"})
    CHECK(well_formed(repair_tags(tags(raw))));
}

TEST_CASE("early stopping honours patience") {
  EarlyStopping es(10);
  const double f1[] = {0.1, 0.2, 0.3, 0.5};
  std::size_t stopped = 0;
  for (std::size_t epoch = 0; epoch < 40 && !stopped; ++epoch)
    if (es.update(epoch < 4 ? f1[epoch] : 0.5, epoch)) stopped = epoch;
  CHECK(es.best_epoch() == 3);
  CHECK(stopped == 13);
}

TEST_CASE("window tagger learns reused components and round-trips") {
  fixtures::PlantedCorpusParams p;
  p.sentences = 3000;
  p.ees = 250;
  p.distractors = 600;
  p.component_reuse = true;
  p.pair_pool = 40;
  p.seed = 8;
  const auto pc = fixtures::planted_corpus(hmong(), p);
  const auto split = split_corpus_by_ee(pc.gold, CorpusRatios{0.8, 0.1, 0.1}, 1, 3)[0];
  TaggerParams tp;
  tp.max_epochs = 15;
  const auto t = train_window_tagger(split.train, split.dev, tp);
  CHECK(t.num_tags() == 3);
  const Corpus text = split.test.untagged();
  const double tagger_f1 = evaluate_tags(t.tag(text), split.test).span.f1;
  BaselineParams none;
  const double base_f1 = evaluate_tags(baseline_tag(text, hmong(), nullptr, nullptr, none).tagged, split.test).span.f1;
  CHECK(tagger_f1 > base_f1);
  CHECK(well_formed(t.tag(text)));

  const auto dir = eeorder::test::scratch("tagger");
  t.save(dir / "m.json");
  const auto back = WindowTagger::load(dir / "m.json");
  CHECK(format_tagged_corpus(back.tag(text)) == format_tagged_corpus(t.tag(text)));
  const auto wv = t.word_embeddings();
  CHECK(wv.source == "wv-tagger-standin");
  CHECK(wv.size() > 0);

  // Zero weights predict O everywhere.
  auto j = t.to_json();
  for (auto& f : j.at("features")) for (auto& w : f.at(1)) w = 0.0;
  const auto zero = WindowTagger::from_json(j);
  for (const auto& s : zero.tag(text).sentences)
    for (Tag g : s.tags) CHECK(g == Tag::kO);

  CHECK_THROWS_AS(train_window_tagger(TaggedCorpus{}, split.dev, tp), Error);
}

TEST_CASE("five-tag swap tagger emits real and fake spans") {
  fixtures::PlantedCorpusParams p;
  p.sentences = 2000;
  p.ees = 150;
  p.distractors = 300;
  p.component_reuse = true;
  p.pair_pool = 30;
  p.seed = 9;
  const auto pc = fixtures::planted_corpus(hmong(), p);
  const auto swapped = generate_swap_corpus(pc.gold, {}, 0.5, 4).corpus;
  const auto split = split_corpus_by_ee(swapped, CorpusRatios{0.8, 0.1, 0.1}, 1, 5)[0];
  TaggerParams tp;
  tp.max_epochs = 10;
  const auto t = train_window_tagger(split.train, split.dev, tp, &hmong());
  CHECK(t.num_tags() == 5);
  const auto pred = t.tag(split.train.untagged());
  std::size_t real = 0, fake = 0;
  for (const auto& s : pred.sentences)
    for (const auto& sp : spans(s.tags)) (sp.kind == Tag::kBFake ? fake : real)++;
  CHECK(real > 0);
  CHECK(fake > 0);
}
