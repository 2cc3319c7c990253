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
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "eeorder/datasets.hpp"
#include "eeorder/features.hpp"
#include "eeorder/phonology.hpp"
#include "eeorder/rng.hpp"
#include "eeorder/tree.hpp"

namespace eeorder {

// A linear order over focal phonemes. Each group is one rank (a set of
// tied symbols); unranked symbols tie with everything. Symbols use the
// inventory spelling, with the null phoneme as "".
class Scale {
 public:
  Scale() = default;
  Scale(std::vector<std::vector<std::string>> groups,
        std::set<std::string> unranked, PhonemeClass focal);

  static Scale from_order(const std::vector<std::string>& order,
                          PhonemeClass focal,
                          std::set<std::string> unranked = {});

  // One rank per line, tied symbols comma-separated, optional
  // "focal: tone|rhyme" and "unranked: a, b" lines, "#" comments. "∅" and
  // "0" denote the null phoneme.
  static Scale parse(std::string_view text);
  static Scale load(const std::filesystem::path& path);
  std::string format() const;
  void save(const std::filesystem::path& path) const;

  // "j < b < m < s < v < g < ∅"; tied groups render as "{a, b}".
  std::string to_string() const;

  const std::vector<std::vector<std::string>>& groups() const { return groups_; }
  const std::set<std::string>& unranked() const { return unranked_; }
  PhonemeClass focal() const { return focal_; }
  bool empty() const { return groups_.empty(); }

  // nullopt for unranked symbols; throws for symbols the scale never saw.
  std::optional<std::size_t> rank(std::string_view symbol) const;
  bool knows(std::string_view symbol) const;

  Scale reversed() const;
  friend bool operator==(const Scale& a, const Scale& b) {
    return a.groups_ == b.groups_ && a.unranked_ == b.unranked_ &&
           a.focal_ == b.focal_;
  }

 private:
  std::vector<std::vector<std::string>> groups_;
  std::set<std::string> unranked_;
  PhonemeClass focal_ = PhonemeClass::kTone;
  std::unordered_map<std::string, std::size_t> rank_;
};

enum class RuleOutcome { kAttested, kUnattested, kTie };

// Lower rank first is Attested; equal rank or an unranked symbol is a tie.
RuleOutcome rule_decide(const Scale& scale, const Syllable& b1, const Syllable& b2);

struct TiePolicy {
  enum class Mode { kExpectedHalf, kRandomCoin };
  Mode mode = Mode::kExpectedHalf;
  std::uint64_t seed = 0;

  static TiePolicy expected_half() { return {Mode::kExpectedHalf, 0}; }
  static TiePolicy random_coin(std::uint64_t seed) { return {Mode::kRandomCoin, seed}; }
};

// Ties are settled by a fair coin drawn from `coin`.
Label rule_predict(const Scale& scale, const OrderedPairExample& pair, Rng& coin);

// Mean correctness. Under kExpectedHalf a tie scores 0.5; under
// kRandomCoin one seeded coin per tie, in dataset order.
double rule_accuracy(const Scale& scale, const LabeledDataset& data,
                     const TiePolicy& policy = TiePolicy::expected_half());

struct ScaleSearchResult {
  Scale scale;
  double train_accuracy = 0.0;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxSearchSymbols = 10;

// Scores every total order of `symbols` with ExpectedHalf ties and returns
// the best; equal scores go to the lexicographically first permutation of
// the given symbol order. Every focal symbol in the data must be listed.
ScaleSearchResult search_best_scale(const LabeledDataset& train,
                                    const std::vector<std::string>& symbols,
                                    PhonemeClass focal, unsigned threads = 1);

// The members of `symbols` that occur as a focal constituent in `data`, in
// the given order. Symbols absent from the data stay unranked when searching.
std::vector<std::string> observed_symbols(const LabeledDataset& data,
                                          const std::vector<std::string>& symbols,
                                          PhonemeClass focal);

// Walks the "no" branches from the root. At every split on a focal one-hot
// the "yes" child's majority decides the placement: B1 with majority
// Attested or B2 with majority Unattested pushes the symbol onto the front
// block; the mirrored cases push onto the back block, filled from the end
// inwards. Placed symbols, non-focal splits, and exact 50/50 children are
// skipped. Focal symbols of the space that were never placed are unranked.
Scale induce_scale_from_tree(const DecisionTree& tree, const FeatureSpace& space,
                             PhonemeClass focal);

}  // namespace eeorder
