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
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "eeorder/corpus.hpp"
#include "eeorder/embeddings.hpp"
#include "eeorder/phonology.hpp"
#include "eeorder/scales.hpp"

namespace eeorder {

struct CandidateSpan {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::array<std::string, kSpanLength> tokens;
  bool parsable = false;
  std::optional<double> cos_sim;
  std::optional<bool> scale_ok;
};

// Every offset i with w[i] == w[i+2]; overlapping candidates are all kept.
std::vector<CandidateSpan> find_candidates(const Sentence& sentence,
                                           bool exclude_equal_b = true);

enum Stage : unsigned {
  kStageNone = 0,
  kStageParsable = 1u << 0,
  kStageSimilarity = 1u << 1,
  kStageScale = 1u << 2,
};

// "none", or a comma list of parsable, sim, scale.
unsigned parse_stages(std::string_view spec);
std::string stages_to_string(unsigned stages);

struct BaselineParams {
  unsigned stages = kStageNone;
  double alpha = 0.4;
  bool exclude_equal_b = true;
};

struct BaselineResult {
  TaggedCorpus tagged;
  std::vector<CandidateSpan> candidates;
  std::size_t rejected_parsable = 0;
  std::size_t rejected_similarity = 0;
  std::size_t rejected_scale = 0;
  std::size_t skipped_overlap = 0;
  std::size_t accepted = 0;
};

BaselineResult baseline_tag(const Corpus& corpus, const LanguageProfile& profile,
                            const EmbeddingTable* emb, const Scale* scale,
                            const BaselineParams& params);

using ConfusionMatrix = std::array<std::array<std::size_t, kNumTags>, kNumTags>;

struct PRF {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PRF make_prf(std::size_t tp, std::size_t fp, std::size_t fn);
double f1_score(double precision, double recall);

struct TagMetrics {
  PRF token;  // micro-averaged over non-O tags
  PRF span;   // exact start + kind
  ConfusionMatrix confusion{};  // [gold][pred]
  std::size_t tokens = 0;
};

TagMetrics evaluate_tags(const TaggedCorpus& pred, const TaggedCorpus& gold);

double in_context_accuracy(const ConfusionMatrix& cm);
double in_context_accuracy(std::size_t real_real, std::size_t fake_fake,
                           std::size_t real_fake, std::size_t fake_real);

std::string metrics_table(const TagMetrics& m, std::string_view label);
nlohmann::json metrics_json(const TagMetrics& m);
std::string confusion_csv(const ConfusionMatrix& cm);

struct RepairCounts {
  std::size_t orphan_inside = 0;
  std::size_t incomplete = 0;
  std::size_t trimmed = 0;
  std::size_t relabeled = 0;

  std::size_t total() const { return orphan_inside + incomplete + trimmed + relabeled; }
};

// Orphan I -> O, spans shorter than four dropped, longer runs trimmed, inside
// tags relabeled to match their B.
std::vector<Tag> repair_tags(const std::vector<Tag>& raw, RepairCounts* counts = nullptr);

class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}
  // Records the score of `epoch`; returns true once training should stop.
  bool update(double score, std::size_t epoch);
  bool improved() const { return improved_; }
  double best() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }

 private:
  std::size_t patience_;
  double best_ = -1.0;
  std::size_t best_epoch_ = 0;
  bool improved_ = false;
};

struct TaggerParams {
  double learning_rate = 0.05;
  double l2 = 1e-6;
  std::size_t max_epochs = 60;
  std::size_t patience = 10;
  double negative_share = 0.9;
  bool phoneme_features = false;
  std::uint64_t seed = 1;
};

struct TaggerHistory {
  std::vector<double> dev_span_f1;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
};

class WindowTagger {
 public:
  WindowTagger() = default;

  std::size_t num_tags() const { return num_tags_; }
  std::size_t num_features() const { return names_.size(); }
  const TaggerParams& params() const { return params_; }
  const TaggerHistory& history() const { return history_; }
  const std::vector<float>& weights() const { return weights_; }

  std::vector<Tag> predict_raw(const Sentence& s) const;
  TaggedCorpus tag(const Corpus& corpus, RepairCounts* counts = nullptr) const;

  nlohmann::json to_json() const;
  static WindowTagger from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static WindowTagger load(const std::filesystem::path& path,
                           const std::filesystem::path& data_dir = default_data_dir());

  // Word vectors read off the learned word-identity weights.
  EmbeddingTable word_embeddings() const;

 private:
  friend WindowTagger train_window_tagger(const TaggedCorpus&, const TaggedCorpus&,
                                          const TaggerParams&, const LanguageProfile*);

  std::vector<std::vector<std::uint32_t>> featurize(const Sentence& s, bool grow);
  std::vector<std::vector<std::uint32_t>> featurize(const Sentence& s) const;
  void scores(const std::vector<std::uint32_t>& feats, std::vector<double>& out) const;

  std::size_t num_tags_ = 3;
  TaggerParams params_;
  TaggerHistory history_;
  std::optional<LanguageProfile> profile_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<float> weights_;  // [feature][tag]
};

WindowTagger train_window_tagger(const TaggedCorpus& train, const TaggedCorpus& dev,
                                 const TaggerParams& params,
                                 const LanguageProfile* profile = nullptr);

}  // namespace eeorder
