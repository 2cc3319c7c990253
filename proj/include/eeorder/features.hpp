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

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "eeorder/datasets.hpp"
#include "eeorder/embeddings.hpp"
#include "eeorder/phonology.hpp"

namespace eeorder {

enum class Position { kB1 = 0, kB2 = 1 };

std::string_view to_string(Position p);

struct FeatureId {
  enum class Kind { kOneHot, kEmbedding };

  Kind kind = Kind::kOneHot;
  Position position = Position::kB1;
  PhonemeClass cls = PhonemeClass::kTone;  // one-hot only
  std::string symbol;                      // one-hot only
  std::size_t dim = 0;                     // embedding only

  static FeatureId one_hot(Position p, PhonemeClass c, std::string sym) {
    return {Kind::kOneHot, p, c, std::move(sym), 0};
  }
  static FeatureId embedding(Position p, std::size_t d) {
    return {Kind::kEmbedding, p, PhonemeClass::kTone, {}, d};
  }

  // "B1.tone=j", "B2.onset=∅", "B1.wv[17]".
  std::string name() const;
  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

enum class FeatureType { kTone = 0, kRhyme = 1, kOnset = 2, kEmbedding = 3 };
inline constexpr std::size_t kNumFeatureTypes = 4;
std::string_view to_string(FeatureType t);
FeatureType feature_type(const FeatureId& id);

enum class FeatureSet { kFocal, kAll, kAllEmbeddings, kEmbeddings };
std::string_view to_string(FeatureSet s);
FeatureSet feature_set_from_string(std::string_view s);

// Layout per position: onset block, rhyme block, tone block (in inventory
// order, restricted to the classes in use), then embedding dims; B1 first.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  explicit FeatureSpace(std::vector<FeatureId> entries);

  static FeatureSpace build(const PhonemeInventory& inv, FeatureSet set,
                            PhonemeClass focal, std::size_t embedding_dim = 0);

  std::size_t size() const { return entries_.size(); }
  const std::vector<FeatureId>& entries() const { return entries_; }
  const FeatureId& operator[](std::size_t i) const { return entries_[i]; }

  std::optional<std::size_t> one_hot_index(Position p, PhonemeClass c,
                                           std::string_view symbol) const;
  bool has_one_hot(Position p, PhonemeClass c) const;
  // First index of the embedding block for a position, if any.
  std::optional<std::size_t> embedding_offset(Position p) const;
  std::size_t embedding_dim() const { return embedding_dim_; }
  bool has_embeddings() const { return embedding_dim_ > 0; }

  nlohmann::json to_json() const;
  static FeatureSpace from_json(const nlohmann::json& j);

 private:
  std::vector<FeatureId> entries_;
  std::array<std::optional<std::size_t>, 2> emb_offset_{};
  std::size_t embedding_dim_ = 0;
};

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Indices strictly increasing.
struct SparseVec {
  std::vector<SparseEntry> entries;

  double dot(std::span<const double> w) const;
  friend bool operator==(const SparseVec&, const SparseVec&) = default;
};

// Exactly one active index per one-hot block of the space. Embedding blocks
// copy the B1/B2 word vectors; out-of-vocabulary words leave the block zero.
SparseVec encode(const OrderedPairExample& pair, const FeatureSpace& space,
                 const EmbeddingTable* emb = nullptr);

struct EncodedSet {
  std::vector<SparseVec> x;
  std::vector<Label> y;
  std::size_t dim = 0;

  std::size_t size() const { return x.size(); }
};

EncodedSet encode_all(const LabeledDataset& data, const FeatureSpace& space,
                      const EmbeddingTable* emb = nullptr);

// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

DenseMatrix to_dense(std::span<const SparseVec> x, std::size_t dim);

// Full 2x2 chi-square statistic of each (0/1) feature against the label:
// N (ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)); 0 when a margin is empty. Throws
// on a feature value other than 0 or 1.
std::vector<double> chi2_scores(std::span<const SparseVec> x,
                                std::span<const Label> y, std::size_t dim);

inline constexpr std::size_t kAllFeatures = std::numeric_limits<std::size_t>::max();

struct FeatureMask {
  std::vector<std::size_t> selected;  // ascending
  std::size_t k = 0;

  nlohmann::json to_json() const;
  static FeatureMask from_json(const nlohmann::json& j);
};

// The k highest scores; ties go to the lower index.
FeatureMask select_top_k(std::span<const double> scores, std::size_t k);

// Re-indexes x into the masked space.
SparseVec apply_mask(const SparseVec& x, const FeatureMask& mask);
EncodedSet apply_mask(const EncodedSet& set, const FeatureMask& mask);
FeatureSpace apply_mask(const FeatureSpace& space, const FeatureMask& mask);

using Predictor = std::function<Label(const SparseVec&)>;
using Trainer = std::function<Predictor(const EncodedSet&)>;

// Dev accuracy of the trainer on the top-k features for each grid value
// (kAllFeatures = every feature; values >= the feature count collapse to
// it). Returns the best k, ties to the smaller k.
std::size_t choose_k(const std::vector<std::size_t>& grid,
                     std::span<const double> scores, const EncodedSet& train,
                     const EncodedSet& dev, const Trainer& trainer);

double accuracy(const Predictor& predict, const EncodedSet& set);

struct RankedFeature {
  std::size_t index = 0;
  FeatureId id;
  double importance = 0.0;
};

// Descending |weight|, ties to the lower index.
std::vector<RankedFeature> linear_importance(std::span<const double> weights,
                                             const FeatureSpace& space);

// Share of each FeatureType among the top k ranked features.
std::array<double, kNumFeatureTypes> importance_proportions(
    const std::vector<RankedFeature>& ranked, std::size_t k);

}  // namespace eeorder
