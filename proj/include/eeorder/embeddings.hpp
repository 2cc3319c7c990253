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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eeorder/corpus.hpp"
#include "eeorder/rng.hpp"

namespace eeorder {

struct SkipGramParams {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  std::size_t min_count = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

// Word vectors with a dense vocabulary. `source` names the producer
// ("skipgram", "wv-tagger-standin", "csv", ...).
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> vocab, std::size_t dim,
                 std::vector<float> vectors);

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<float>& data() const { return vectors_; }

  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }
  std::span<const float> row(std::size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }
  std::optional<std::span<const float>> find(std::string_view word) const;

  SkipGramParams params;
  bool trained = false;
  std::string source = "skipgram";

  // Output (context) vectors from SGNS training; empty for loaded tables.
  std::vector<float> context;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
  std::vector<float> vectors_;
};

// Skip-gram with negative sampling, single worker, deterministic given the
// seed. Negatives are drawn from the unigram^0.75 distribution. The window
// is sampled uniformly in [1, window] per center word and the learning
// rate decays linearly over training. epochs == 0 returns the randomly
// initialised table with trained == false.
EmbeddingTable train_skipgram(const Corpus& corpus, const SkipGramParams& params);

// Draws vocabulary indices proportionally to count^power (alias method).
class UnigramSampler {
 public:
  UnigramSampler() = default;
  UnigramSampler(const std::vector<std::uint64_t>& counts, double power);
  std::size_t operator()(Rng& rng) const;
  double probability(std::size_t i) const { return prob_[i]; }
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<double> accept_;
  std::vector<std::size_t> alias_;
};

// Mean SGNS loss, -log s(u.v) - sum log s(-u.v_neg), over (center, context)
// pairs with freshly drawn negatives.
double sgns_loss(const EmbeddingTable& table,
                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                 std::size_t negatives, std::uint64_t seed);

// Throws Error(kOutOfVocabulary) when either word is missing. A zero vector
// gives 0.
double cosine(const EmbeddingTable& emb, std::string_view w1, std::string_view w2);
double cosine(std::span<const float> u, std::span<const float> v);

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

std::vector<Neighbor> neighbors(const EmbeddingTable& emb, std::string_view word,
                                std::size_t k);

// CSV: token followed by dim values per row, no header.
void export_csv(const EmbeddingTable& emb, const std::filesystem::path& path);
EmbeddingTable import_csv(const std::filesystem::path& path);

// Binary: "EEWV" magic, u32 version, u64 |V|, u64 dim, vocab as
// (u32 byte length, bytes)*, then |V| x dim little-endian float32.
void save_embeddings(const EmbeddingTable& emb, const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

}  // namespace eeorder
