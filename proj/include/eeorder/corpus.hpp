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
#include <string>
#include <vector>

namespace eeorder {

enum class Tag { kO = 0, kB = 1, kI = 2, kBFake = 3, kIFake = 4 };

inline constexpr std::size_t kNumTags = 5;
inline constexpr std::size_t kSpanLength = 4;

std::string_view to_string(Tag t);
Tag tag_from_string(std::string_view s);

inline bool is_begin(Tag t) { return t == Tag::kB || t == Tag::kBFake; }
inline bool is_inside(Tag t) { return t == Tag::kI || t == Tag::kIFake; }
inline Tag inside_of(Tag begin) {
  return begin == Tag::kBFake ? Tag::kIFake : Tag::kI;
}

using Sentence = std::vector<std::string>;
using Corpus = std::vector<Sentence>;

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
};

struct TaggedCorpus {
  std::vector<TaggedSentence> sentences;

  std::size_t token_count() const;
  Corpus untagged() const;
};

// Every B (B-fake) starts a run of exactly three I (I-fake) and no I
// appears outside such a run.
bool well_formed(const std::vector<Tag>& tags);
bool well_formed(const TaggedCorpus& corpus);

struct Span {
  std::size_t start = 0;
  Tag kind = Tag::kB;  // kB or kBFake
  friend bool operator==(const Span&, const Span&) = default;
};

// Spans of a well-formed sentence, left to right.
std::vector<Span> spans(const std::vector<Tag>& tags);

// Identity of an EE occurrence: its four tokens joined by spaces.
std::string span_key(const std::vector<std::string>& tokens, std::size_t start);

// One sentence per line, space separated.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// token<TAB>tag lines, blank line between sentences.
TaggedCorpus load_tagged_corpus(const std::filesystem::path& path);
TaggedCorpus parse_tagged_corpus(std::string_view content);
std::string format_tagged_corpus(const TaggedCorpus& corpus);
void save_tagged_corpus(const TaggedCorpus& corpus,
                        const std::filesystem::path& path);

struct SwapCorpusResult {
  TaggedCorpus corpus;
  std::vector<std::string> swapped;  // keys of swapped EEs (original order)
  std::vector<std::string> kept;
};

// Partitions the distinct EEs (the catalog, or every EE span in the corpus
// when the catalog is empty) into swap / keep with proportion swap_frac.
// Every occurrence of a swapped EE has tokens 2 and 4 exchanged and is
// retagged B-fake I-fake I-fake I-fake.
SwapCorpusResult generate_swap_corpus(const TaggedCorpus& tagged,
                                      const std::vector<std::string>& catalog,
                                      double swap_frac, std::uint64_t seed);

struct CorpusRatios {
  double train = 0.91;
  double dev = 0.045;
  double test = 0.045;
};

struct CorpusSplit {
  TaggedCorpus train;
  TaggedCorpus dev;
  TaggedCorpus test;
  std::vector<std::string> train_ees, dev_ees, test_ees;
  // Spans re-annotated as O because their sentence went to another
  // partition.
  std::size_t conflicts = 0;
};

// Distinct EEs are partitioned into disjoint train/dev/test sets per split.
// A sentence goes to the highest-priority partition (test > dev > train) of
// any EE it contains; spans of EEs from other partitions in that sentence
// are retagged O. Sentences without EEs are split by the same ratios.
std::vector<CorpusSplit> split_corpus_by_ee(const TaggedCorpus& tagged,
                                            const CorpusRatios& ratios,
                                            int n_splits, std::uint64_t seed);

}  // namespace eeorder
