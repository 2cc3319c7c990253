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

#include "eeorder/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "eeorder/error.hpp"
#include "eeorder/rng.hpp"

namespace eeorder {

std::string_view to_string(Position p) {
  return p == Position::kB1 ? "B1" : "B2";
}

std::string FeatureId::name() const {
  std::string out(to_string(position));
  if (kind == Kind::kEmbedding) return out + ".wv[" + std::to_string(dim) + "]";
  return out + "." + std::string(to_string(cls)) + "=" + display_symbol(symbol);
}

std::string_view to_string(FeatureType t) {
  switch (t) {
    case FeatureType::kTone: return "tone";
    case FeatureType::kRhyme: return "rhyme";
    case FeatureType::kOnset: return "onset";
    case FeatureType::kEmbedding: return "embedding";
  }
  return "?";
}

FeatureType feature_type(const FeatureId& id) {
  if (id.kind == FeatureId::Kind::kEmbedding) return FeatureType::kEmbedding;
  switch (id.cls) {
    case PhonemeClass::kOnset: return FeatureType::kOnset;
    case PhonemeClass::kRhyme: return FeatureType::kRhyme;
    case PhonemeClass::kTone: return FeatureType::kTone;
  }
  return FeatureType::kTone;
}

std::string_view to_string(FeatureSet s) {
  switch (s) {
    case FeatureSet::kFocal: return "focal";
    case FeatureSet::kAll: return "all";
    case FeatureSet::kAllEmbeddings: return "all+embeddings";
    case FeatureSet::kEmbeddings: return "embeddings";
  }
  return "?";
}

FeatureSet feature_set_from_string(std::string_view s) {
  if (s == "focal") return FeatureSet::kFocal;
  if (s == "all") return FeatureSet::kAll;
  if (s == "all+embeddings" || s == "all+wv") return FeatureSet::kAllEmbeddings;
  if (s == "embeddings" || s == "wv") return FeatureSet::kEmbeddings;
  fail(ErrorCode::kInvalidArgument, "unknown feature set '" + std::string(s) + "'");
}

FeatureSpace::FeatureSpace(std::vector<FeatureId> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> names;
  std::array<std::size_t, 2> emb_count{0, 0};
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const FeatureId& id = entries_[i];
    if (!names.insert(id.name()).second)
      fail(ErrorCode::kInvalidArgument, "duplicate feature " + id.name());
    if (id.kind == FeatureId::Kind::kEmbedding) {
      const int p = static_cast<int>(id.position);
      if (id.dim != emb_count[p])
        fail(ErrorCode::kInvalidArgument,
             "embedding dims must be contiguous and in order");
      if (!emb_offset_[p]) emb_offset_[p] = i;
      else if (*emb_offset_[p] + id.dim != i)
        fail(ErrorCode::kInvalidArgument, "embedding block is not contiguous");
      ++emb_count[p];
    }
  }
  if (emb_count[0] && emb_count[1] && emb_count[0] != emb_count[1])
    fail(ErrorCode::kInvalidArgument, "B1 and B2 embedding blocks differ in size");
  embedding_dim_ = std::max(emb_count[0], emb_count[1]);
}

FeatureSpace FeatureSpace::build(const PhonemeInventory& inv, FeatureSet set,
                                 PhonemeClass focal, std::size_t embedding_dim) {
  const bool phonemes = set != FeatureSet::kEmbeddings;
  const bool vectors = set == FeatureSet::kEmbeddings || set == FeatureSet::kAllEmbeddings;
  if (vectors && embedding_dim == 0)
    fail(ErrorCode::kInvalidArgument,
         "feature set " + std::string(to_string(set)) + " needs embeddings");
  std::vector<FeatureId> entries;
  for (Position p : {Position::kB1, Position::kB2}) {
    if (phonemes) {
      for (PhonemeClass c : kAllClasses) {
        if (set == FeatureSet::kFocal && c != focal) continue;
        for (const std::string& sym : inv.symbols(c))
          entries.push_back(FeatureId::one_hot(p, c, sym));
      }
    }
    if (vectors)
      for (std::size_t d = 0; d < embedding_dim; ++d)
        entries.push_back(FeatureId::embedding(p, d));
  }
  return FeatureSpace(std::move(entries));
}

std::optional<std::size_t> FeatureSpace::one_hot_index(Position p, PhonemeClass c,
                                                       std::string_view symbol) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const FeatureId& id = entries_[i];
    if (id.kind == FeatureId::Kind::kOneHot && id.position == p && id.cls == c &&
        id.symbol == symbol)
      return i;
  }
  return std::nullopt;
}

bool FeatureSpace::has_one_hot(Position p, PhonemeClass c) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const FeatureId& id) {
    return id.kind == FeatureId::Kind::kOneHot && id.position == p && id.cls == c;
  });
}

std::optional<std::size_t> FeatureSpace::embedding_offset(Position p) const {
  return emb_offset_[static_cast<int>(p)];
}

nlohmann::json FeatureSpace::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const FeatureId& id : entries_) {
    nlohmann::json e;
    e["position"] = std::string(to_string(id.position));
    if (id.kind == FeatureId::Kind::kEmbedding) {
      e["kind"] = "embedding";
      e["dim"] = id.dim;
    } else {
      e["kind"] = "onehot";
      e["class"] = std::string(to_string(id.cls));
      e["symbol"] = id.symbol;
    }
    arr.push_back(std::move(e));
  }
  return nlohmann::json{{"entries", std::move(arr)}};
}

FeatureSpace FeatureSpace::from_json(const nlohmann::json& j) {
  try {
    std::vector<FeatureId> entries;
    for (const auto& e : j.at("entries")) {
      const std::string pos = e.at("position").get<std::string>();
      if (pos != "B1" && pos != "B2")
        fail(ErrorCode::kFormat, "bad feature position '" + pos + "'");
      Position p = pos == "B1" ? Position::kB1 : Position::kB2;
      const std::string kind = e.at("kind").get<std::string>();
      if (kind == "embedding")
        entries.push_back(FeatureId::embedding(p, e.at("dim").get<std::size_t>()));
      else if (kind == "onehot")
        entries.push_back(FeatureId::one_hot(
            p, phoneme_class_from_string(e.at("class").get<std::string>()),
            e.at("symbol").get<std::string>()));
      else
        fail(ErrorCode::kFormat, "bad feature kind '" + kind + "'");
    }
    return FeatureSpace(std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("feature space JSON: ") + e.what());
  }
}

double SparseVec::dot(std::span<const double> w) const {
  double s = 0.0;
  for (const SparseEntry& e : entries) s += w[e.index] * e.value;
  return s;
}

SparseVec encode(const OrderedPairExample& pair, const FeatureSpace& space,
                 const EmbeddingTable* emb) {
  if (space.has_embeddings() && !emb)
    fail(ErrorCode::kInvalidArgument, "feature space needs an embedding table");
  if (emb && space.has_embeddings() && emb->dim() != space.embedding_dim())
    fail(ErrorCode::kInvalidArgument, "embedding dimension does not match the space");
  SparseVec out;
  for (Position p : {Position::kB1, Position::kB2}) {
    const Syllable& s = p == Position::kB1 ? pair.b1_syll : pair.b2_syll;
    for (PhonemeClass c : kAllClasses) {
      if (!space.has_one_hot(p, c)) continue;
      auto idx = space.one_hot_index(p, c, s.constituent(c));
      if (!idx)
        fail(ErrorCode::kInvalidArgument,
             std::string(to_string(c)) + " '" + display_symbol(s.constituent(c)) +
                 "' is not in the feature space");
      out.entries.push_back({static_cast<std::uint32_t>(*idx), 1.0});
    }
    if (auto off = space.embedding_offset(p)) {
      const std::string& word = p == Position::kB1 ? pair.b1 : pair.b2;
      if (auto v = emb->find(word))
        for (std::size_t d = 0; d < v->size(); ++d)
          out.entries.push_back({static_cast<std::uint32_t>(*off + d),
                                 static_cast<double>((*v)[d])});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return out;
}

EncodedSet encode_all(const LabeledDataset& data, const FeatureSpace& space,
                      const EmbeddingTable* emb) {
  EncodedSet out;
  out.dim = space.size();
  out.x.reserve(data.size());
  out.y.reserve(data.size());
  for (const auto& ex : data) {
    out.x.push_back(encode(ex, space, emb));
    out.y.push_back(ex.label);
  }
  return out;
}

DenseMatrix to_dense(std::span<const SparseVec> x, std::size_t dim) {
  DenseMatrix m{x.size(), dim, std::vector<double>(x.size() * dim, 0.0)};
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const SparseEntry& e : x[i].entries) m.data[i * dim + e.index] = e.value;
  return m;
}

std::vector<double> chi2_scores(std::span<const SparseVec> x,
                                std::span<const Label> y, std::size_t dim) {
  if (x.size() != y.size())
    fail(ErrorCode::kInvalidArgument, "chi2: feature and label counts differ");
  // Cell counts are integers, so the accumulation order does not matter.
  std::vector<std::uint64_t> active_att(dim, 0), active_un(dim, 0);
  std::uint64_t n_att = 0, n_un = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool att = y[i] == Label::kAttested;
    (att ? n_att : n_un) += 1;
    for (const SparseEntry& e : x[i].entries) {
      if (e.index >= dim) fail(ErrorCode::kInvalidArgument, "chi2: index out of range");
      if (e.value == 0.0) continue;
      if (e.value != 1.0)
        fail(ErrorCode::kInvalidArgument,
             "chi2 needs 0/1 features; feature " + std::to_string(e.index) +
                 " has value " + std::to_string(e.value));
      (att ? active_att : active_un)[e.index] += 1;
    }
  }
  std::vector<double> scores(dim, 0.0);
  const double n = static_cast<double>(n_att + n_un);
  for (std::size_t j = 0; j < dim; ++j) {
    const double a = static_cast<double>(active_att[j]);
    const double b = static_cast<double>(active_un[j]);
    const double c = static_cast<double>(n_att) - a;
    const double d = static_cast<double>(n_un) - b;
    const double denom = (a + b) * (c + d) * (a + c) * (b + d);
    if (denom == 0.0) continue;
    const double diff = a * d - b * c;
    scores[j] = n * diff * diff / denom;
  }
  return scores;
}

nlohmann::json FeatureMask::to_json() const {
  return nlohmann::json{{"k", k}, {"selected", selected}};
}

FeatureMask FeatureMask::from_json(const nlohmann::json& j) {
  try {
    FeatureMask m;
    m.k = j.at("k").get<std::size_t>();
    m.selected = j.at("selected").get<std::vector<std::size_t>>();
    if (m.selected.size() != m.k ||
        !std::is_sorted(m.selected.begin(), m.selected.end()))
      fail(ErrorCode::kFormat, "mask must list k ascending indices");
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("mask JSON: ") + e.what());
  }
}

FeatureMask select_top_k(std::span<const double> scores, std::size_t k) {
  if (k == kAllFeatures) k = scores.size();
  if (k > scores.size())
    fail(ErrorCode::kInvalidArgument, "k = " + std::to_string(k) + " exceeds the " +
                                          std::to_string(scores.size()) + " features");
  std::vector<std::size_t> order = iota_indices(scores.size());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  FeatureMask m;
  m.k = k;
  m.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(m.selected.begin(), m.selected.end());
  return m;
}

SparseVec apply_mask(const SparseVec& x, const FeatureMask& mask) {
  SparseVec out;
  std::size_t j = 0;
  for (const SparseEntry& e : x.entries) {
    while (j < mask.selected.size() && mask.selected[j] < e.index) ++j;
    if (j < mask.selected.size() && mask.selected[j] == e.index)
      out.entries.push_back({static_cast<std::uint32_t>(j), e.value});
  }
  return out;
}

EncodedSet apply_mask(const EncodedSet& set, const FeatureMask& mask) {
  EncodedSet out;
  out.dim = mask.k;
  out.y = set.y;
  out.x.reserve(set.x.size());
  for (const SparseVec& v : set.x) out.x.push_back(apply_mask(v, mask));
  return out;
}

FeatureSpace apply_mask(const FeatureSpace& space, const FeatureMask& mask) {
  std::vector<FeatureId> entries;
  for (std::size_t i : mask.selected) {
    FeatureId id = space[i];
    entries.push_back(std::move(id));
  }
  // Masked embedding blocks may be partial; renumber them contiguously.
  std::array<std::size_t, 2> next{0, 0};
  for (FeatureId& id : entries)
    if (id.kind == FeatureId::Kind::kEmbedding)
      id.dim = next[static_cast<int>(id.position)]++;
  return FeatureSpace(std::move(entries));
}

double accuracy(const Predictor& predict, const EncodedSet& set) {
  if (set.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    correct += predict(set.x[i]) == set.y[i];
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

std::size_t choose_k(const std::vector<std::size_t>& grid,
                     std::span<const double> scores, const EncodedSet& train,
                     const EncodedSet& dev, const Trainer& trainer) {
  if (grid.empty()) fail(ErrorCode::kInvalidArgument, "empty K grid");
  std::set<std::size_t> ks;
  for (std::size_t k : grid) ks.insert(std::min(k, scores.size()));
  std::size_t best_k = 0;
  double best = -1.0;
  for (std::size_t k : ks) {
    if (k == 0) continue;
    FeatureMask mask = select_top_k(scores, k);
    Predictor p = trainer(apply_mask(train, mask));
    const double acc = accuracy([&](const SparseVec& v) { return p(apply_mask(v, mask)); }, dev);
    if (acc > best) {
      best = acc;
      best_k = k;
    }
  }
  if (best_k == 0) fail(ErrorCode::kInvalidArgument, "K grid has no positive value");
  return best_k;
}

std::vector<RankedFeature> linear_importance(std::span<const double> weights,
                                             const FeatureSpace& space) {
  if (weights.size() != space.size())
    fail(ErrorCode::kInvalidArgument, "weight vector has " +
                                          std::to_string(weights.size()) +
                                          " dims, space has " +
                                          std::to_string(space.size()));
  std::vector<RankedFeature> out;
  out.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    out.push_back({i, space[i], std::abs(weights[i])});
  std::stable_sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    return a.importance > b.importance;
  });
  return out;
}

std::array<double, kNumFeatureTypes> importance_proportions(
    const std::vector<RankedFeature>& ranked, std::size_t k) {
  k = std::min(k, ranked.size());
  std::array<double, kNumFeatureTypes> out{};
  if (k == 0) return out;
  for (std::size_t i = 0; i < k; ++i)
    out[static_cast<std::size_t>(feature_type(ranked[i].id))] += 1.0;
  for (double& v : out) v /= static_cast<double>(k);
  return out;
}

}  // namespace eeorder
