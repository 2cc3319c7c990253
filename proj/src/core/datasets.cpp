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

#include "eeorder/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "eeorder/error.hpp"
#include "eeorder/rng.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

std::string_view to_string(RecordForm form) {
  switch (form) {
    case RecordForm::kAB1AB2: return "AB1AB2";
    case RecordForm::kB1AB2A: return "B1AB2A";
    case RecordForm::kCompound: return "CC";
  }
  return "?";
}

RecordForm record_form_from_string(std::string_view code) {
  if (code == "AB1AB2" || code == "ABAC") return RecordForm::kAB1AB2;
  if (code == "B1AB2A" || code == "BACA") return RecordForm::kB1AB2A;
  if (code == "CC" || code == "B1B2") return RecordForm::kCompound;
  fail(ErrorCode::kFormat, "unknown form code '" + std::string(code) + "'");
}

std::string_view to_string(Label l) {
  return l == Label::kAttested ? "attested" : "unattested";
}

namespace {

std::string row_context(std::size_t lineno) {
  return "row " + std::to_string(lineno) + ": ";
}

Syllable segmented(const LanguageProfile& profile,
                   const std::vector<std::string>& cols, std::size_t first,
                   std::size_t lineno) {
  Syllable s{normalize_symbol(text::trim(cols[first])),
             normalize_symbol(text::trim(cols[first + 1])),
             normalize_symbol(text::trim(cols[first + 2]))};
  if (!profile.inventory.valid(s))
    fail(ErrorCode::kNoParse,
         row_context(lineno) + "segmentation not in the inventory");
  return s;
}

std::optional<Syllable> resolve(const LanguageProfile& profile,
                                const MCLexicon* lexicon,
                                const std::string& token) {
  if (lexicon) {
    auto it = lexicon->syllables.find(token);
    if (it == lexicon->syllables.end()) return std::nullopt;
    return it->second;
  }
  return profile.inventory.try_parse(token);
}

bool header_row(const std::vector<std::string>& cols) {
  return !cols.empty() && text::trim(cols[0]) == "language";
}

void finish(RecordList& out, std::vector<PairRecord>& parsed) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (PairRecord& r : parsed) {
    if (!seen.emplace(r.a, r.b1, r.b2).second) {
      ++out.report.duplicates_removed;
      continue;
    }
    out.records.push_back(std::move(r));
  }
  out.report.kept = out.records.size();
}

}  // namespace

RecordList parse_ee_list(std::string_view content,
                         const LanguageProfile& profile) {
  RecordList out;
  std::vector<PairRecord> parsed;
  std::size_t lineno = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (lineno == 1 && header_row(cols)) continue;
    if (cols.size() != 5 && cols.size() != 14)
      fail(ErrorCode::kFormat, row_context(lineno) + "expected 5 or 14 columns, got " +
                                   std::to_string(cols.size()));
    ++out.report.rows;
    PairRecord r;
    r.language = std::string(text::trim(cols[0]));
    r.form = record_form_from_string(text::trim(cols[1]));
    if (r.form == RecordForm::kCompound)
      fail(ErrorCode::kFormat, row_context(lineno) + "CC form in an EE list");
    r.a = std::string(text::trim(cols[2]));
    r.b1 = std::string(text::trim(cols[3]));
    r.b2 = std::string(text::trim(cols[4]));
    if (r.a.empty() || r.b1.empty() || r.b2.empty())
      fail(ErrorCode::kFormat, row_context(lineno) + "empty word");
    if (r.b1 == r.b2) {
      ++out.report.dropped_identical;
      continue;
    }
    if (cols.size() == 14) {
      r.a_syll = segmented(profile, cols, 5, lineno);
      r.b1_syll = segmented(profile, cols, 8, lineno);
      r.b2_syll = segmented(profile, cols, 11, lineno);
    } else {
      auto b1 = profile.inventory.try_parse(r.b1);
      auto b2 = profile.inventory.try_parse(r.b2);
      if (!b1 || !b2) {
        ++out.report.dropped_unparsable;
        continue;
      }
      r.b1_syll = *b1;
      r.b2_syll = *b2;
      r.a_syll = profile.inventory.try_parse(r.a);
    }
    parsed.push_back(std::move(r));
  }
  finish(out, parsed);
  return out;
}

RecordList load_ee_list(const std::filesystem::path& path,
                        const LanguageProfile& profile) {
  try {
    return parse_ee_list(text::read_file(path), profile);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

RecordList parse_cc_list(std::string_view content,
                         const LanguageProfile& profile,
                         const MCLexicon* lexicon) {
  RecordList out;
  std::vector<PairRecord> parsed;
  std::size_t lineno = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (lineno == 1 && header_row(cols)) continue;
    if (cols.size() != 3 && cols.size() != 9)
      fail(ErrorCode::kFormat, row_context(lineno) + "expected 3 or 9 columns, got " +
                                   std::to_string(cols.size()));
    ++out.report.rows;
    PairRecord r;
    r.language = std::string(text::trim(cols[0]));
    r.form = RecordForm::kCompound;
    r.b1 = std::string(text::trim(cols[1]));
    r.b2 = std::string(text::trim(cols[2]));
    if (r.b1.empty() || r.b2.empty())
      fail(ErrorCode::kFormat, row_context(lineno) + "empty word");
    if (r.b1 == r.b2) {
      ++out.report.dropped_identical;
      continue;
    }
    if (cols.size() == 9) {
      r.b1_syll = segmented(profile, cols, 3, lineno);
      r.b2_syll = segmented(profile, cols, 6, lineno);
    } else {
      auto b1 = resolve(profile, lexicon, r.b1);
      auto b2 = resolve(profile, lexicon, r.b2);
      if (!b1 || !b2) {
        ++out.report.dropped_unparsable;
        continue;
      }
      r.b1_syll = *b1;
      r.b2_syll = *b2;
    }
    parsed.push_back(std::move(r));
  }
  finish(out, parsed);
  return out;
}

RecordList load_cc_list(const std::filesystem::path& path,
                        const LanguageProfile& profile,
                        const MCLexicon* lexicon) {
  try {
    return parse_cc_list(text::read_file(path), profile, lexicon);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

namespace {
void append_segmentation(std::string& out, const Syllable& s) {
  for (PhonemeClass cls : kAllClasses) {
    out += '\t';
    out += s.constituent(cls).empty() ? "0" : s.constituent(cls);
  }
}
}  // namespace

std::string format_ee_list(const std::vector<PairRecord>& records,
                           bool with_segmentation) {
  std::string out = "language\tform\ta\tb1\tb2";
  if (with_segmentation)
    out += "\ta_on\ta_rh\ta_tn\tb1_on\tb1_rh\tb1_tn\tb2_on\tb2_rh\tb2_tn";
  out += '\n';
  for (const PairRecord& r : records) {
    out += r.language + '\t' + std::string(to_string(r.form)) + '\t' + r.a +
           '\t' + r.b1 + '\t' + r.b2;
    if (with_segmentation) {
      append_segmentation(out, r.a_syll.value_or(Syllable{}));
      append_segmentation(out, r.b1_syll);
      append_segmentation(out, r.b2_syll);
    }
    out += '\n';
  }
  return out;
}

std::string format_cc_list(const std::vector<PairRecord>& records,
                           bool with_segmentation) {
  std::string out = "language\tb1\tb2";
  if (with_segmentation) out += "\tb1_on\tb1_rh\tb1_tn\tb2_on\tb2_rh\tb2_tn";
  out += '\n';
  for (const PairRecord& r : records) {
    out += r.language + '\t' + r.b1 + '\t' + r.b2;
    if (with_segmentation) {
      append_segmentation(out, r.b1_syll);
      append_segmentation(out, r.b2_syll);
    }
    out += '\n';
  }
  return out;
}

LabeledDataset augment_with_swaps(const std::vector<PairRecord>& attested,
                                  std::uint64_t seed) {
  std::set<std::pair<std::string, std::string>> orders;
  for (const PairRecord& r : attested) orders.emplace(r.b1, r.b2);

  LabeledDataset out;
  out.reserve(attested.size() * 2);
  for (std::size_t i = 0; i < attested.size(); ++i) {
    const PairRecord& r = attested[i];
    OrderedPairExample ex;
    ex.a = r.a;
    ex.b1 = r.b1;
    ex.b2 = r.b2;
    ex.b1_syll = r.b1_syll;
    ex.b2_syll = r.b2_syll;
    ex.label = Label::kAttested;
    ex.source_id = i;
    out.push_back(ex);
    if (orders.count({r.b2, r.b1})) continue;
    std::swap(ex.b1, ex.b2);
    std::swap(ex.b1_syll, ex.b2_syll);
    ex.label = Label::kUnattested;
    out.push_back(std::move(ex));
  }
  Rng rng(seed);
  shuffle(out, rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = i;
  return out;
}

void SplitSpec::validate() const {
  for (double f : {train_frac, dev_frac, test_frac})
    if (!(f >= 0.0 && f <= 1.0))
      fail(ErrorCode::kInvalidArgument, "split fractions must lie in [0, 1]");
  if (std::abs(train_frac + dev_frac + test_frac - 1.0) > 1e-9)
    fail(ErrorCode::kInvalidArgument, "split fractions must sum to 1");
  if (repetitions < 1)
    fail(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
}

namespace {
std::pair<std::string, std::string> unordered(const PairRecord& r) {
  return r.b1 < r.b2 ? std::pair{r.b1, r.b2} : std::pair{r.b2, r.b1};
}
}  // namespace

DatasetSplit split_then_augment(const std::vector<PairRecord>& attested,
                                const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = attested.size();
  const auto n_test = static_cast<std::size_t>(std::llround(n * spec.test_frac));
  const auto n_dev = static_cast<std::size_t>(std::llround(n * spec.dev_frac));
  if (n_test == 0 || n_test + n_dev >= n)
    fail(ErrorCode::kInvalidArgument,
         "split of " + std::to_string(n) + " records leaves an empty partition");

  auto order = iota_indices(n);
  Rng rng(spec.seed);
  shuffle(order, rng);

  DatasetSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    const PairRecord& r = attested[order[i]];
    if (i < n_test) out.test_records.push_back(r);
    else if (i < n_test + n_dev) out.dev_records.push_back(r);
    else out.train_records.push_back(r);
  }
  out.train = augment_with_swaps(out.train_records, mix_seed(spec.seed, 1));
  out.dev = augment_with_swaps(out.dev_records, mix_seed(spec.seed, 2));
  out.test = augment_with_swaps(out.test_records, mix_seed(spec.seed, 3));

  std::set<std::pair<std::string, std::string>> fit_pairs, test_pairs;
  for (const auto& r : out.train_records) fit_pairs.insert(unordered(r));
  for (const auto& r : out.dev_records) fit_pairs.insert(unordered(r));
  for (const auto& r : out.test_records) test_pairs.insert(unordered(r));
  for (const auto& p : test_pairs) out.straddling_pairs += fit_pairs.count(p);
  return out;
}

std::vector<std::vector<PairRecord>> sample_unique_pairs(
    const std::vector<PairRecord>& records, std::uint64_t seed,
    int repetitions) {
  if (repetitions < 1)
    fail(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> group_of;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = group_of.emplace(unordered(records[i]), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  std::vector<std::vector<PairRecord>> out;
  Rng rng(seed);
  for (int rep = 0; rep < repetitions; ++rep) {
    std::vector<PairRecord> subset;
    subset.reserve(groups.size());
    for (const auto& g : groups)
      subset.push_back(records[g[uniform_index(rng, g.size())]]);
    out.push_back(std::move(subset));
  }
  return out;
}

OverlapCounts component_overlap_analysis(const std::vector<PairRecord>& train,
                                         const std::vector<PairRecord>& test,
                                         const BigramCounts* bigrams) {
  // (b1, b2) -> A words of training EEs with that order.
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> ees;
  for (const PairRecord& r : train)
    if (r.form != RecordForm::kCompound) ees[{r.b1, r.b2}].push_back(r.a);

  auto count_other = [&](const std::string& x, const std::string& y,
                         const std::string& a) {
    auto it = ees.find({x, y});
    if (it == ees.end()) return std::size_t{0};
    return static_cast<std::size_t>(
        std::count_if(it->second.begin(), it->second.end(),
                      [&](const std::string& q) { return q != a; }));
  };
  auto bigram = [&](const std::string& x, const std::string& y) {
    if (!bigrams) return std::size_t{0};
    auto it = bigrams->find({x, y});
    return it == bigrams->end() ? std::size_t{0} : it->second;
  };

  OverlapCounts out;
  for (const PairRecord& r : test) {
    OverlapRow row{r.a, r.b1, r.b2};
    row.same_order_ee = count_other(r.b1, r.b2, r.a);
    row.reversed_ee = count_other(r.b2, r.b1, r.a);
    row.same_order_cc = bigram(r.b1, r.b2);
    row.reversed_cc = bigram(r.b2, r.b1);
    out.same_order_ee += row.same_order_ee;
    out.reversed_ee += row.reversed_ee;
    out.same_order_cc += row.same_order_cc;
    out.reversed_cc += row.reversed_cc;
    out.rows.push_back(std::move(row));
  }
  return out;
}

BigramCounts bigram_counts(const std::vector<PairRecord>& compounds) {
  BigramCounts out;
  for (const PairRecord& r : compounds) ++out[{r.b1, r.b2}];
  return out;
}

BigramCounts bigram_counts(const std::vector<std::vector<std::string>>& corpus) {
  BigramCounts out;
  for (const auto& s : corpus)
    for (std::size_t i = 0; i + 1 < s.size(); ++i) ++out[{s[i], s[i + 1]}];
  return out;
}

}  // namespace eeorder
