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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eeorder/phonology.hpp"

namespace eeorder {

// AB1AB2 and B1AB2A are elaborate expressions; kCompound is a B1B2
// coordinate compound with no repeated word.
enum class RecordForm { kAB1AB2, kB1AB2A, kCompound };

std::string_view to_string(RecordForm form);
RecordForm record_form_from_string(std::string_view code);

// One attested EE or CC. `a` is empty for compounds.
struct PairRecord {
  std::string language;
  RecordForm form = RecordForm::kAB1AB2;
  std::string a;
  std::string b1;
  std::string b2;
  std::optional<Syllable> a_syll;
  Syllable b1_syll;
  Syllable b2_syll;
};

enum class Label { kAttested = 0, kUnattested = 1 };

inline int to_sign(Label l) { return l == Label::kAttested ? 1 : -1; }
inline Label flip(Label l) {
  return l == Label::kAttested ? Label::kUnattested : Label::kAttested;
}
std::string_view to_string(Label l);

struct OrderedPairExample {
  std::size_t id = 0;
  std::string a;
  std::string b1;
  std::string b2;
  Syllable b1_syll;
  Syllable b2_syll;
  Label label = Label::kAttested;
  std::size_t source_id = 0;
};

using LabeledDataset = std::vector<OrderedPairExample>;

struct LoadReport {
  std::size_t rows = 0;
  std::size_t kept = 0;
  std::size_t dropped_unparsable = 0;
  std::size_t dropped_identical = 0;
  std::size_t duplicates_removed = 0;
};

struct RecordList {
  std::vector<PairRecord> records;
  LoadReport report;
};

// EE list TSV: language, form, a, b1, b2 and optionally nine segmentation
// columns a_on, a_rh, a_tn, b1_on, b1_rh, b1_tn, b2_on, b2_rh, b2_tn.
// Rows whose B words neither parse nor carry segmentation are dropped and
// counted; rows with b1 == b2 are dropped and counted; exact duplicates are
// removed. Malformed rows and unknown form codes throw.
RecordList load_ee_list(const std::filesystem::path& path,
                        const LanguageProfile& profile);
RecordList parse_ee_list(std::string_view content,
                         const LanguageProfile& profile);

// CC list TSV: language, b1, b2 and optionally six segmentation columns
// b1_on, b1_rh, b1_tn, b2_on, b2_rh, b2_tn. With a Middle Chinese lexicon
// the syllables are looked up by character.
RecordList load_cc_list(const std::filesystem::path& path,
                        const LanguageProfile& profile,
                        const MCLexicon* lexicon = nullptr);
RecordList parse_cc_list(std::string_view content,
                         const LanguageProfile& profile,
                         const MCLexicon* lexicon = nullptr);

std::string format_ee_list(const std::vector<PairRecord>& records,
                           bool with_segmentation = false);
std::string format_cc_list(const std::vector<PairRecord>& records,
                           bool with_segmentation = false);

// One Attested example per record and its mirrored Unattested example,
// except when the reversed (b2, b1) order is itself attested somewhere in
// the input; then neither direction gets an Unattested example. The result
// is shuffled with `seed`.
LabeledDataset augment_with_swaps(const std::vector<PairRecord>& attested,
                                  std::uint64_t seed);

struct SplitSpec {
  double train_frac = 0.56;
  double dev_frac = 0.14;
  double test_frac = 0.30;
  std::uint64_t seed = 0;
  int repetitions = 1;

  void validate() const;
};

struct DatasetSplit {
  std::vector<PairRecord> train_records;
  std::vector<PairRecord> dev_records;
  std::vector<PairRecord> test_records;
  LabeledDataset train;
  LabeledDataset dev;
  LabeledDataset test;
  // Unordered {b1, b2} pairs present in both train/dev and test (with
  // different A words).
  std::size_t straddling_pairs = 0;
};

// Shuffles the attested records, partitions them, then augments every
// partition independently.
DatasetSplit split_then_augment(const std::vector<PairRecord>& attested,
                                const SplitSpec& spec);

// Each subset keeps one uniformly chosen record per unordered {b1, b2}.
std::vector<std::vector<PairRecord>> sample_unique_pairs(
    const std::vector<PairRecord>& records, std::uint64_t seed,
    int repetitions = 10);

using BigramCounts = std::map<std::pair<std::string, std::string>, std::size_t>;

struct OverlapRow {
  std::string a, b1, b2;
  std::size_t same_order_ee = 0;
  std::size_t reversed_ee = 0;
  std::size_t same_order_cc = 0;
  std::size_t reversed_cc = 0;
};

struct OverlapCounts {
  std::size_t same_order_ee = 0;
  std::size_t reversed_ee = 0;
  std::size_t same_order_cc = 0;
  std::size_t reversed_cc = 0;
  std::vector<OverlapRow> rows;
};

// For each test (A, b1, b2) counts training EEs X b1 X b2 (same order) and
// X b2 X b1 (reversed) with X != A and, when bigrams are supplied, adjacent
// b1 b2 versus b2 b1 occurrences.
OverlapCounts component_overlap_analysis(const std::vector<PairRecord>& train,
                                         const std::vector<PairRecord>& test,
                                         const BigramCounts* bigrams = nullptr);

BigramCounts bigram_counts(const std::vector<PairRecord>& compounds);
BigramCounts bigram_counts(const std::vector<std::vector<std::string>>& corpus);

}  // namespace eeorder
