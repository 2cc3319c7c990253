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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eeorder/datasets.hpp"
#include "eeorder/embeddings.hpp"
#include "eeorder/features.hpp"
#include "eeorder/scales.hpp"
#include "eeorder/svm.hpp"
#include "eeorder/tree.hpp"

namespace eeorder {

enum class ClassifierKind { kRules, kTree, kLinearSvm, kRbfSvm };

std::string_view to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(std::string_view s);

struct ExperimentRow {
  ClassifierKind classifier = ClassifierKind::kRules;
  FeatureSet features = FeatureSet::kFocal;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  SplitSpec split;
  std::vector<std::size_t> k_grid{kAllFeatures};
  bool unique_pairs = false;
  int reps = 10;
  TreeParams tree;
  LinearSvmParams linear;
  RbfSvmParams rbf;
  TiePolicy tie = TiePolicy::expected_half();
  // Top-k cut for the linear-model importance proportions.
  std::size_t importance_k = 20;
  std::vector<ExperimentRow> rows;
  unsigned jobs = 1;
};

struct ExperimentInputs {
  LanguageProfile profile;
  std::vector<PairRecord> records;
  // Rules without a scale fall back to exhaustive search on train+dev.
  std::optional<Scale> scale;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::string embedding_label = "skipgram";
};

struct ExperimentResult {
  std::string language;
  ExperimentRow row;
  std::string embedding_label;  // empty when no embeddings are used
  std::string mode;             // "split" or "unique-pairs"
  std::size_t runs = 0;
  std::size_t n = 0;            // augmented examples per run (mean, rounded)
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<std::size_t> chosen_k;
  std::string scale;            // rules rows: the scale applied
  std::optional<std::array<double, kNumFeatureTypes>> importance;
  // Tree rows: the last run's tree with its (masked) feature space.
  std::optional<nlohmann::json> model;
  std::vector<std::string> notes;
};

ExperimentResult run_experiment_row(const ExperimentConfig& config,
                                    const ExperimentInputs& inputs,
                                    const ExperimentRow& row);

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& config,
                                             const ExperimentInputs& inputs);

std::string report_csv(const std::vector<ExperimentResult>& results);
std::string report_table(const std::vector<ExperimentResult>& results);
nlohmann::json report_json(const ExperimentConfig& config,
                           const std::vector<ExperimentResult>& results);

// Serialized tree + feature space, the input of scale induction.
nlohmann::json tree_bundle(const DecisionTree& tree, const FeatureSpace& space,
                           PhonemeClass focal);
Scale induce_scale_from_bundle(const nlohmann::json& bundle);

// A declarative experiment file (JSON). Relative paths resolve against the
// file's directory.
struct ExperimentFile {
  ExperimentConfig config;
  ExperimentInputs inputs;
  nlohmann::json echo;
};

ExperimentFile load_experiment_file(const std::filesystem::path& path);
ExperimentFile parse_experiment_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir);

}  // namespace eeorder
