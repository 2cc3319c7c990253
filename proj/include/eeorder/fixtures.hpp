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

#pragma once

// Synthetic data with known ground truth. Each generator is the oracle for
// the property it plants.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eeorder/corpus.hpp"
#include "eeorder/datasets.hpp"
#include "eeorder/embeddings.hpp"
#include "eeorder/phonology.hpp"
#include "eeorder/scales.hpp"

namespace eeorder::fixtures {

// A random total order over `n` of the profile's focal symbols; the rest are
// unranked.
Scale planted_scale(const LanguageProfile& profile, std::size_t n, std::uint64_t seed);

// Random syllables whose focal symbols are distinct and both ranked. Labels
// follow the scale; `noise` is the probability of flipping a label.
LabeledDataset planted_scale_pairs(const LanguageProfile& profile, const Scale& scale,
                                   std::size_t n, double noise, std::uint64_t seed);

// Attested AB1AB2 records whose B1 precedes B2 on the scale.
std::vector<PairRecord> planted_scale_records(const LanguageProfile& profile,
                                              const Scale& scale, std::size_t n,
                                              std::uint64_t seed);

struct PlantedCorpusParams {
  std::size_t sentences = 10000;
  std::size_t ees = 500;
  std::size_t distractors = 2000;
  std::size_t max_occurrences = 3;  // per EE, uniform in [1, max]
  std::size_t min_len = 8;
  std::size_t max_len = 16;
  std::size_t clusters = 40;
  std::size_t words_per_cluster = 24;
  std::size_t dim = 50;
  // Reuse mode: EEs draw their (B1, B2) from a fixed pool so that distinct
  // EEs share components, and reversed "B2 B1" bigrams appear in plain text
  // at `reversed_ratio` times the EE rate.
  bool component_reuse = false;
  std::size_t pair_pool = 100;
  std::size_t lookalike_pool = 40;
  double reversed_ratio = 1.0 / 9.0;
  // Share of real EE pairs that fail the similarity or scale filter.
  double exception_rate = 0.0;
  // Share of distractors that pass every baseline filter.
  double lookalike_share = 0.0;
  std::uint64_t seed = 1;
};

struct PlantedCorpus {
  TaggedCorpus gold;
  Scale scale;
  EmbeddingTable embeddings;  // planted cluster vectors
  std::vector<PairRecord> ees;
  std::size_t ee_occurrences = 0;
  std::size_t unparsable = 0;
  std::size_t dissimilar = 0;
  std::size_t scale_violating = 0;
  std::size_t lookalike = 0;
  std::size_t reversed_bigrams = 0;
};

PlantedCorpus planted_corpus(const LanguageProfile& profile, const PlantedCorpusParams& params);

struct CooccurrenceCorpus {
  Corpus corpus;
  std::vector<std::pair<std::string, std::string>> planted;
  std::vector<std::pair<std::string, std::string>> never;
};

// Ten pairs that share a topic and ten that never share one.
CooccurrenceCorpus cooccurrence_corpus(std::uint64_t seed, std::size_t sentences_per_word = 150);

// Hand-built trees with the shape of the reference Hmong and Middle Chinese
// trees, as scale-induction bundles.
nlohmann::json hmong_reference_tree(const PhonemeInventory& hmong);
nlohmann::json mc_reference_tree();

// Writes every fixture into `dir`; returns the written file names.
std::vector<std::string> write_all(const std::filesystem::path& dir,
                                   const LanguageProfile& hmong, std::uint64_t seed);

}  // namespace eeorder::fixtures
