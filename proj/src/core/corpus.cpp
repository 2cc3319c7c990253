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

#include "eeorder/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "eeorder/error.hpp"
#include "eeorder/rng.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::kO: return "O";
    case Tag::kB: return "B";
    case Tag::kI: return "I";
    case Tag::kBFake: return "B-fake";
    case Tag::kIFake: return "I-fake";
  }
  return "?";
}

Tag tag_from_string(std::string_view s) {
  if (s == "O" || s == "0") return Tag::kO;
  if (s == "B") return Tag::kB;
  if (s == "I") return Tag::kI;
  if (s == "B-fake") return Tag::kBFake;
  if (s == "I-fake") return Tag::kIFake;
  fail(ErrorCode::kFormat, "unknown tag '" + std::string(s) + "'");
}

std::size_t TaggedCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

Corpus TaggedCorpus::untagged() const {
  Corpus out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(s.tokens);
  return out;
}

bool well_formed(const std::vector<Tag>& tags) {
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i] == Tag::kO) {
      ++i;
      continue;
    }
    if (!is_begin(tags[i]) || i + kSpanLength > tags.size()) return false;
    const Tag inside = inside_of(tags[i]);
    for (std::size_t k = 1; k < kSpanLength; ++k)
      if (tags[i + k] != inside) return false;
    i += kSpanLength;
    // A fourth I would continue the run past the span.
    if (i < tags.size() && is_inside(tags[i])) return false;
  }
  return true;
}

bool well_formed(const TaggedCorpus& corpus) {
  return std::all_of(corpus.sentences.begin(), corpus.sentences.end(),
                     [](const TaggedSentence& s) {
                       return s.tokens.size() == s.tags.size() &&
                              well_formed(s.tags);
                     });
}

std::vector<Span> spans(const std::vector<Tag>& tags) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (is_begin(tags[i])) out.push_back({i, tags[i]});
  return out;
}

std::string span_key(const std::vector<std::string>& tokens, std::size_t start) {
  std::string key = tokens.at(start);
  for (std::size_t k = 1; k < kSpanLength; ++k) {
    key += ' ';
    key += tokens.at(start + k);
  }
  return key;
}

Corpus load_corpus(const std::filesystem::path& path) {
  Corpus out;
  for (const std::string& line : text::read_lines(path)) {
    auto toks = text::split_ws(line);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::string out;
  for (const auto& s : corpus) {
    out += text::join(s, " ");
    out += '\n';
  }
  text::write_file(path, out);
}

TaggedCorpus parse_tagged_corpus(std::string_view content) {
  TaggedCorpus out;
  TaggedSentence cur;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) out.sentences.push_back(std::move(cur));
    cur = {};
  };
  for (const std::string& raw : text::split(content, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty())
      fail(ErrorCode::kFormat, "line " + std::to_string(lineno) +
                                   ": expected token<TAB>tag");
    cur.tokens.push_back(cols[0]);
    cur.tags.push_back(tag_from_string(text::trim(cols[1])));
  }
  flush();
  return out;
}

TaggedCorpus load_tagged_corpus(const std::filesystem::path& path) {
  try {
    return parse_tagged_corpus(text::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_tagged_corpus(const TaggedCorpus& corpus) {
  std::string out;
  for (const auto& s : corpus.sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out += s.tokens[i];
      out += '\t';
      out += to_string(s.tags[i]);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void save_tagged_corpus(const TaggedCorpus& corpus,
                        const std::filesystem::path& path) {
  text::write_file(path, format_tagged_corpus(corpus));
}

namespace {

void require_well_formed(const TaggedCorpus& corpus) {
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    if (s.tokens.size() != s.tags.size() || !well_formed(s.tags))
      fail(ErrorCode::kFormat, "sentence " + std::to_string(i) +
                                   ": EE spans must be B I I I (4 tokens)");
  }
}

std::vector<std::string> distinct_keys(const TaggedCorpus& corpus) {
  std::set<std::string> keys;
  for (const auto& s : corpus.sentences)
    for (const Span& sp : spans(s.tags)) keys.insert(span_key(s.tokens, sp.start));
  return {keys.begin(), keys.end()};
}

}  // namespace

SwapCorpusResult generate_swap_corpus(const TaggedCorpus& tagged,
                                      const std::vector<std::string>& catalog,
                                      double swap_frac, std::uint64_t seed) {
  if (!(swap_frac >= 0.0 && swap_frac <= 1.0))
    fail(ErrorCode::kInvalidArgument, "swap fraction must lie in [0, 1]");
  require_well_formed(tagged);

  std::vector<std::string> keys;
  if (catalog.empty()) {
    keys = distinct_keys(tagged);
  } else {
    std::set<std::string> uniq(catalog.begin(), catalog.end());
    keys.assign(uniq.begin(), uniq.end());
  }
  Rng rng(seed);
  shuffle(keys, rng);
  const auto n_swap = static_cast<std::size_t>(std::llround(keys.size() * swap_frac));
  std::set<std::string> swap_set(keys.begin(), keys.begin() + n_swap);

  SwapCorpusResult out;
  out.swapped.assign(swap_set.begin(), swap_set.end());
  for (std::size_t i = n_swap; i < keys.size(); ++i) out.kept.push_back(keys[i]);
  std::sort(out.kept.begin(), out.kept.end());

  out.corpus = tagged;
  for (auto& s : out.corpus.sentences) {
    for (const Span& sp : spans(s.tags)) {
      if (!swap_set.count(span_key(s.tokens, sp.start))) continue;
      std::swap(s.tokens[sp.start + 1], s.tokens[sp.start + 3]);
      s.tags[sp.start] = Tag::kBFake;
      for (std::size_t k = 1; k < kSpanLength; ++k)
        s.tags[sp.start + k] = Tag::kIFake;
    }
  }
  return out;
}

namespace {

enum Part { kTrain = 0, kDev = 1, kTest = 2 };

std::pair<std::size_t, std::size_t> part_sizes(std::size_t n,
                                               const CorpusRatios& r) {
  return {static_cast<std::size_t>(std::llround(n * r.dev)),
          static_cast<std::size_t>(std::llround(n * r.test))};
}

}  // namespace

std::vector<CorpusSplit> split_corpus_by_ee(const TaggedCorpus& tagged,
                                            const CorpusRatios& ratios,
                                            int n_splits, std::uint64_t seed) {
  for (double f : {ratios.train, ratios.dev, ratios.test})
    if (!(f >= 0.0 && f <= 1.0))
      fail(ErrorCode::kInvalidArgument, "ratios must lie in [0, 1]");
  if (std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9)
    fail(ErrorCode::kInvalidArgument, "ratios must sum to 1");
  if (n_splits < 1) fail(ErrorCode::kInvalidArgument, "n_splits must be >= 1");
  require_well_formed(tagged);

  const std::vector<std::string> keys = distinct_keys(tagged);
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < tagged.sentences.size(); ++i)
    if (spans(tagged.sentences[i].tags).empty()) negatives.push_back(i);

  std::vector<CorpusSplit> out;
  for (int split = 0; split < n_splits; ++split) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(split)));
    std::vector<std::string> order = keys;
    shuffle(order, rng);
    auto [n_dev, n_test] = part_sizes(order.size(), ratios);
    std::map<std::string, Part> part_of;
    CorpusSplit cs;
    for (std::size_t i = 0; i < order.size(); ++i) {
      Part p = i < n_test ? kTest : (i < n_test + n_dev ? kDev : kTrain);
      part_of[order[i]] = p;
      (p == kTest ? cs.test_ees : p == kDev ? cs.dev_ees : cs.train_ees)
          .push_back(order[i]);
    }
    for (auto* v : {&cs.train_ees, &cs.dev_ees, &cs.test_ees})
      std::sort(v->begin(), v->end());

    std::vector<Part> sentence_part(tagged.sentences.size(), kTrain);
    std::vector<std::size_t> neg = negatives;
    shuffle(neg, rng);
    auto [neg_dev, neg_test] = part_sizes(neg.size(), ratios);
    for (std::size_t i = 0; i < neg.size(); ++i)
      sentence_part[neg[i]] = i < neg_test ? kTest : (i < neg_test + neg_dev ? kDev : kTrain);

    for (std::size_t si = 0; si < tagged.sentences.size(); ++si) {
      TaggedSentence s = tagged.sentences[si];
      auto sp = spans(s.tags);
      if (!sp.empty()) {
        Part best = kTrain;
        for (const Span& x : sp)
          best = std::max(best, part_of.at(span_key(s.tokens, x.start)));
        sentence_part[si] = best;
        for (const Span& x : sp) {
          if (part_of.at(span_key(s.tokens, x.start)) == best) continue;
          std::fill_n(s.tags.begin() + static_cast<std::ptrdiff_t>(x.start),
                      kSpanLength, Tag::kO);
          ++cs.conflicts;
        }
      }
      TaggedCorpus& dst = sentence_part[si] == kTest  ? cs.test
                          : sentence_part[si] == kDev ? cs.dev
                                                      : cs.train;
      dst.sentences.push_back(std::move(s));
    }
    out.push_back(std::move(cs));
  }
  return out;
}

}  // namespace eeorder
