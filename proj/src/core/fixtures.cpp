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

#include "eeorder/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "eeorder/error.hpp"
#include "eeorder/features.hpp"
#include "eeorder/rng.hpp"
#include "eeorder/tagging.hpp"
#include "eeorder/text.hpp"
#include "eeorder/tree.hpp"

namespace eeorder::fixtures {

namespace {

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[uniform_index(rng, v.size())];
}

double gaussian(Rng& rng) {
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// A fresh syllable whose rendering parses back to itself.
struct WordMaker {
  const PhonemeInventory& inv;
  std::set<std::string> used;

  std::optional<std::pair<std::string, Syllable>> make(Rng& rng, const std::string& tone) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      Syllable s{pick(inv.symbols(PhonemeClass::kOnset), rng),
                 pick(inv.symbols(PhonemeClass::kRhyme), rng), tone};
      const std::string w = render_syllable(inv, s);
      if (used.count(w)) continue;
      auto back = inv.try_parse(w);
      if (!back || !(*back == s)) continue;
      used.insert(w);
      return std::make_pair(w, s);
    }
    return std::nullopt;
  }
};

std::vector<std::string> ranked_symbols(const Scale& scale) {
  std::vector<std::string> out;
  for (const auto& g : scale.groups()) out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::size_t rank_of(const Scale& scale, const std::string& sym) { return *scale.rank(sym); }

}  // namespace

Scale planted_scale(const LanguageProfile& profile, std::size_t n, std::uint64_t seed) {
  std::vector<std::string> symbols = profile.inventory.symbols(profile.focal);
  if (n == 0 || n > symbols.size())
    fail(ErrorCode::kInvalidArgument, "cannot plant a scale over " + std::to_string(n) + " of " +
                                          std::to_string(symbols.size()) + " symbols");
  Rng rng(seed);
  shuffle(symbols, rng);
  std::vector<std::string> order(symbols.begin(), symbols.begin() + static_cast<long>(n));
  std::set<std::string> rest(symbols.begin() + static_cast<long>(n), symbols.end());
  return Scale::from_order(order, profile.focal, std::move(rest));
}

LabeledDataset planted_scale_pairs(const LanguageProfile& profile, const Scale& scale,
                                   std::size_t n, double noise, std::uint64_t seed) {
  const auto ranked = ranked_symbols(scale);
  if (ranked.size() < 2) fail(ErrorCode::kInvalidArgument, "scale needs two ranked symbols");
  const PhonemeInventory& inv = profile.inventory;
  const PhonemeClass focal = scale.focal();
  Rng rng(seed);
  auto syllable = [&](const std::string& sym) {
    Syllable s{pick(inv.symbols(PhonemeClass::kOnset), rng), pick(inv.symbols(PhonemeClass::kRhyme), rng),
               pick(inv.symbols(PhonemeClass::kTone), rng)};
    (focal == PhonemeClass::kTone ? s.tone : focal == PhonemeClass::kRhyme ? s.rhyme : s.onset) = sym;
    return s;
  };
  LabeledDataset out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = uniform_index(rng, ranked.size());
    std::size_t y = uniform_index(rng, ranked.size() - 1);
    if (y >= x) ++y;
    OrderedPairExample ex;
    ex.id = i;
    ex.source_id = i;
    ex.b1_syll = syllable(ranked[x]);
    ex.b2_syll = syllable(ranked[y]);
    ex.b1 = render_syllable(inv, ex.b1_syll);
    ex.b2 = render_syllable(inv, ex.b2_syll);
    ex.label = x < y ? Label::kAttested : Label::kUnattested;
    if (noise > 0.0 && uniform01(rng) < noise) ex.label = flip(ex.label);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<PairRecord> planted_scale_records(const LanguageProfile& profile, const Scale& scale,
                                              std::size_t n, std::uint64_t seed) {
  const LabeledDataset pairs = planted_scale_pairs(profile, scale, n, 0.0, seed);
  Rng rng(mix_seed(seed, 1));
  const PhonemeInventory& inv = profile.inventory;
  std::vector<PairRecord> out;
  for (const auto& p : pairs) {
    PairRecord r;
    r.language = profile.language;
    r.form = RecordForm::kAB1AB2;
    Syllable a{pick(inv.symbols(PhonemeClass::kOnset), rng), pick(inv.symbols(PhonemeClass::kRhyme), rng),
               pick(inv.symbols(PhonemeClass::kTone), rng)};
    r.a = render_syllable(inv, a);
    r.a_syll = a;
    const bool attested = p.label == Label::kAttested;
    r.b1 = attested ? p.b1 : p.b2;
    r.b2 = attested ? p.b2 : p.b1;
    r.b1_syll = attested ? p.b1_syll : p.b2_syll;
    r.b2_syll = attested ? p.b2_syll : p.b1_syll;
    out.push_back(std::move(r));
  }
  return out;
}

PlantedCorpus planted_corpus(const LanguageProfile& profile, const PlantedCorpusParams& p) {
  if (profile.focal != PhonemeClass::kTone)
    fail(ErrorCode::kInvalidArgument, "planted corpora use a tone-focal profile");
  if (p.clusters < 2 || p.words_per_cluster < 4 || p.dim == 0 || p.min_len < kSpanLength + 2 ||
      p.max_len < p.min_len)
    fail(ErrorCode::kInvalidArgument, "planted corpus parameters are too small");
  const PhonemeInventory& inv = profile.inventory;
  Rng rng(p.seed);
  PlantedCorpus out;
  const auto& tones = inv.symbols(PhonemeClass::kTone);
  out.scale = planted_scale(profile, std::min<std::size_t>(7, tones.size()), mix_seed(p.seed, 1));

  // Clustered vocabulary with planted vectors.
  WordMaker maker{inv, {}};
  std::vector<std::vector<std::string>> clusters(p.clusters);
  std::map<std::string, Syllable> syll;
  std::vector<std::string> vocab;
  std::vector<float> vectors;
  for (std::size_t c = 0; c < p.clusters; ++c) {
    std::vector<double> centroid(p.dim);
    double norm = 0.0;
    for (double& x : centroid) {
      x = gaussian(rng);
      norm += x * x;
    }
    for (double& x : centroid) x /= std::sqrt(norm);
    for (std::size_t k = 0; k < p.words_per_cluster; ++k) {
      auto w = maker.make(rng, tones[k % tones.size()]);
      if (!w) fail(ErrorCode::kRuntime, "inventory too small for the planted vocabulary");
      clusters[c].push_back(w->first);
      syll[w->first] = w->second;
      vocab.push_back(w->first);
      for (std::size_t d = 0; d < p.dim; ++d)
        vectors.push_back(static_cast<float>(centroid[d] + 0.35 * gaussian(rng) / std::sqrt(double(p.dim))));
    }
  }
  // Unparsable tokens (digits are in no inventory).
  std::vector<std::string> junk;
  for (std::size_t k = 0; k < p.words_per_cluster; ++k) {
    junk.push_back("x" + std::to_string(10 + k) + "q");
    vocab.push_back(junk.back());
    for (std::size_t d = 0; d < p.dim; ++d)
      vectors.push_back(static_cast<float>(gaussian(rng) / std::sqrt(double(p.dim))));
  }
  out.embeddings = EmbeddingTable(vocab, p.dim, std::move(vectors));
  out.embeddings.trained = true;
  out.embeddings.source = "planted";

  const Scale& scale = out.scale;
  auto ranked = [&](const std::string& w) { return scale.rank(syll.at(w).tone).has_value(); };
  auto before = [&](const std::string& x, const std::string& y) {
    return rank_of(scale, syll.at(x).tone) < rank_of(scale, syll.at(y).tone);
  };
  // Two same-cluster words with distinct ranked tones, ordered by `obey`.
  auto cluster_pair = [&](bool obey) {
    for (;;) {
      const auto& cl = pick(clusters, rng);
      const std::string& x = pick(cl, rng);
      const std::string& y = pick(cl, rng);
      if (x == y || !ranked(x) || !ranked(y) || syll.at(x).tone == syll.at(y).tone) continue;
      return before(x, y) == obey ? std::make_pair(x, y) : std::make_pair(y, x);
    }
  };
  auto cross_pair = [&]() {
    for (;;) {
      const std::size_t c1 = uniform_index(rng, clusters.size());
      const std::size_t c2 = uniform_index(rng, clusters.size());
      if (c1 == c2) continue;
      const std::string& x = pick(clusters[c1], rng);
      const std::string& y = pick(clusters[c2], rng);
      if (cosine(out.embeddings, x, y) > 0.2) continue;
      if (ranked(x) && ranked(y) && syll.at(x).tone != syll.at(y).tone && !before(x, y))
        return std::make_pair(y, x);
      return std::make_pair(x, y);
    }
  };
  auto any_word = [&]() -> const std::string& { return pick(pick(clusters, rng), rng); };

  // Real EE pairs: clean pairs obey the scale within a cluster; exceptions
  // fail either the similarity or the scale filter.
  auto ee_pair = [&]() {
    if (p.exception_rate > 0.0 && uniform01(rng) < p.exception_rate)
      return coin(rng) ? cross_pair() : cluster_pair(false);
    return cluster_pair(true);
  };
  std::vector<std::pair<std::string, std::string>> pool, lookalikes;
  std::set<std::pair<std::string, std::string>> taken;
  auto fresh = [&](auto&& gen) {
    for (;;) {
      auto pr = gen();
      if (taken.count(pr) || taken.count({pr.second, pr.first})) continue;
      taken.insert(pr);
      return pr;
    }
  };
  if (p.component_reuse) {
    for (std::size_t i = 0; i < p.pair_pool; ++i) pool.push_back(fresh(ee_pair));
    for (std::size_t i = 0; i < p.lookalike_pool; ++i) lookalikes.push_back(fresh([&] { return cluster_pair(true); }));
  }

  std::set<std::string> ee_keys;
  while (out.ees.size() < p.ees) {
    auto [b1, b2] = p.component_reuse ? pick(pool, rng) : fresh(ee_pair);
    const std::string& a = any_word();
    if (a == b1 || a == b2) continue;
    if (!ee_keys.insert(a + " " + b1 + " " + a + " " + b2).second) continue;
    PairRecord r;
    r.language = profile.language;
    r.a = a;
    r.b1 = b1;
    r.b2 = b2;
    r.a_syll = syll.at(a);
    r.b1_syll = syll.at(b1);
    r.b2_syll = syll.at(b2);
    out.ees.push_back(std::move(r));
  }

  // 4-grams to embed: (tokens, is_ee).
  std::vector<std::pair<std::array<std::string, 4>, bool>> items;
  for (const auto& r : out.ees) {
    const std::size_t occ = 1 + uniform_index(rng, std::max<std::size_t>(1, p.max_occurrences));
    for (std::size_t k = 0; k < occ; ++k) items.push_back({{r.a, r.b1, r.a, r.b2}, true});
    out.ee_occurrences += occ;
  }
  for (std::size_t d = 0; d < p.distractors; ++d) {
    std::pair<std::string, std::string> pr;
    std::string a = any_word();
    if (p.lookalike_share > 0.0 && uniform01(rng) < p.lookalike_share) {
      pr = p.component_reuse ? pick(lookalikes, rng) : cluster_pair(true);
      ++out.lookalike;
    } else {
      switch (d % 3) {
        case 0:
          pr = cluster_pair(true);
          (coin(rng) ? pr.first : a) = pick(junk, rng);
          ++out.unparsable;
          break;
        case 1:
          pr = cross_pair();
          ++out.dissimilar;
          break;
        default:
          pr = cluster_pair(false);
          ++out.scale_violating;
          break;
      }
    }
    if (a == pr.first || a == pr.second || ee_keys.count(a + " " + pr.first + " " + a + " " + pr.second)) {
      --d;
      continue;
    }
    items.push_back({{a, pr.first, a, pr.second}, false});
  }
  if (items.size() > p.sentences)
    fail(ErrorCode::kInvalidArgument, "more planted 4-grams than sentences");

  std::vector<std::pair<std::string, std::string>> reversed;
  if (p.component_reuse && p.reversed_ratio > 0.0) {
    const auto n_rev = static_cast<std::size_t>(
        std::llround(p.reversed_ratio * static_cast<double>(out.ee_occurrences)));
    for (std::size_t k = 0; k < n_rev; ++k) {
      const auto& r = pick(out.ees, rng);
      reversed.emplace_back(r.b2, r.b1);
    }
  }
  out.reversed_bigrams = reversed.size();

  // Filler sentences with exactly the planted candidate (or none).
  auto filler = [&](std::size_t len) {
    Sentence s;
    const auto& topic = pick(clusters, rng);
    for (std::size_t k = 0; k < len; ++k) s.push_back(uniform01(rng) < 0.7 ? pick(topic, rng) : any_word());
    return s;
  };
  std::vector<TaggedSentence> sentences;
  const std::size_t span = p.max_len - p.min_len + 1;
  for (std::size_t i = 0; i < p.sentences; ++i) {
    const bool has_item = i < items.size();
    const bool has_rev = !has_item && i - items.size() < reversed.size();
    for (;;) {
      const std::size_t len = p.min_len + uniform_index(rng, span);
      Sentence s = filler(len);
      std::vector<Tag> tags(len, Tag::kO);
      std::size_t at = 0;
      if (has_item) {
        at = uniform_index(rng, len - kSpanLength + 1);
        for (std::size_t k = 0; k < kSpanLength; ++k) s[at + k] = items[i].first[k];
        if (items[i].second) {
          tags[at] = Tag::kB;
          for (std::size_t k = 1; k < kSpanLength; ++k) tags[at + k] = Tag::kI;
        }
      } else if (has_rev) {
        at = uniform_index(rng, len - 1);
        s[at] = reversed[i - items.size()].first;
        s[at + 1] = reversed[i - items.size()].second;
      }
      const auto cands = find_candidates(s, false);
      const bool ok = has_item ? cands.size() == 1 && cands[0].start == at : cands.empty();
      if (!ok) continue;
      sentences.push_back({std::move(s), std::move(tags)});
      break;
    }
  }
  shuffle(sentences, rng);
  out.gold.sentences = std::move(sentences);
  return out;
}

CooccurrenceCorpus cooccurrence_corpus(std::uint64_t seed, std::size_t sentences_per_word) {
  constexpr std::size_t kPairs = 10, kTopicWords = 12, kSentenceLen = 8;
  Rng rng(seed);
  CooccurrenceCorpus out;
  // Topics 0..9 host the planted pairs; 10..29 host one never-pair word each.
  auto topic_word = [](std::size_t t, std::size_t k) {
    return "t" + std::to_string(t) + "w" + std::to_string(k);
  };
  auto emit = [&](const std::string& focus, std::size_t topic) {
    for (std::size_t n = 0; n < sentences_per_word; ++n) {
      Sentence s;
      const std::size_t at = uniform_index(rng, kSentenceLen);
      for (std::size_t k = 0; k < kSentenceLen; ++k)
        s.push_back(k == at ? focus : topic_word(topic, uniform_index(rng, kTopicWords)));
      out.corpus.push_back(std::move(s));
    }
  };
  for (std::size_t i = 0; i < kPairs; ++i) {
    const std::string pw = "p" + std::to_string(i), qw = "q" + std::to_string(i);
    out.planted.emplace_back(pw, qw);
    emit(pw, i);
    emit(qw, i);
  }
  for (std::size_t i = 0; i < kPairs; ++i) {
    const std::string rw = "r" + std::to_string(i), sw = "s" + std::to_string(i);
    out.never.emplace_back(rw, sw);
    emit(rw, kPairs + i);
    emit(sw, 2 * kPairs + i);
  }
  // Background sentences mix topic words across topics, so only the focus
  // words keep a single-topic context distribution.
  constexpr std::size_t kTopics = 3 * kPairs;
  const std::size_t background = 2 * kTopics * kTopicWords * sentences_per_word / kSentenceLen;
  for (std::size_t n = 0; n < background; ++n) {
    Sentence s;
    for (std::size_t k = 0; k < kSentenceLen; ++k)
      s.push_back(topic_word(uniform_index(rng, kTopics), uniform_index(rng, kTopicWords)));
    out.corpus.push_back(std::move(s));
  }
  shuffle(out.corpus, rng);
  return out;
}

namespace {

// A chain of "no" branches; each step is (feature index, yes-leaf counts).
nlohmann::json chain_bundle(const FeatureSpace& space,
                            const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& steps,
                            std::pair<std::size_t, std::size_t> tail, PhonemeClass focal) {
  std::vector<TreeNode> nodes;
  std::size_t total_a = tail.first, total_u = tail.second;
  for (const auto& [f, a, u] : steps) {
    total_a += a;
    total_u += u;
  }
  // Node layout: chain node k at 2k, its yes leaf at 2k+1.
  std::size_t rem_a = total_a, rem_u = total_u;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& [f, a, u] = steps[k];
    TreeNode node;
    node.feature = static_cast<int>(f);
    node.attested = rem_a;
    node.unattested = rem_u;
    node.yes_child = static_cast<int>(2 * k + 1);
    node.no_child = static_cast<int>(2 * k + 2);
    nodes.push_back(node);
    TreeNode leaf;
    leaf.attested = a;
    leaf.unattested = u;
    nodes.push_back(leaf);
    rem_a -= a;
    rem_u -= u;
  }
  TreeNode last;
  last.attested = rem_a;
  last.unattested = rem_u;
  nodes.push_back(last);
  TreeParams params;
  params.max_depth = std::max<std::size_t>(params.max_depth, steps.size());
  const DecisionTree tree(std::move(nodes), space.size(), params);
  return {{"tree", tree.to_json()}, {"space", space.to_json()},
          {"focal", std::string(to_string(focal))}};
}

}  // namespace

nlohmann::json hmong_reference_tree(const PhonemeInventory& hmong) {
  const FeatureSpace space = FeatureSpace::build(hmong, FeatureSet::kAll, PhonemeClass::kTone);
  auto idx = [&](Position p, const char* sym) {
    auto i = space.one_hot_index(p, PhonemeClass::kTone, normalize_symbol(sym));
    if (!i) fail(ErrorCode::kInvalidArgument, std::string("inventory lacks tone ") + sym);
    return *i;
  };
  using P = Position;
  // Root counts match the reference Hmong tree; the rest are illustrative.
  return chain_bundle(space,
                      {{idx(P::kB1, "j"), 255, 15},
                       {idx(P::kB1, "b"), 273, 61},
                       {idx(P::kB2, "0"), 301, 88},
                       {idx(P::kB2, "g"), 190, 72},
                       {idx(P::kB2, "s"), 150, 60},
                       {idx(P::kB2, "j"), 20, 140},
                       {idx(P::kB2, "b"), 25, 120},
                       {idx(P::kB1, "m"), 120, 50},
                       {idx(P::kB2, "v"), 90, 40}},
                      {400, 1100}, PhonemeClass::kTone);
}

nlohmann::json mc_reference_tree() {
  std::vector<FeatureId> ids;
  for (Position p : {Position::kB1, Position::kB2})
    for (const char* t : {"ping", "shang", "qu", "ru"})
      ids.push_back(FeatureId::one_hot(p, PhonemeClass::kTone, t));
  const FeatureSpace space(ids);
  return chain_bundle(space, {{0, 410, 150}, {7, 260, 90}, {1, 180, 70}, {6, 120, 60}}, {300, 900},
                      PhonemeClass::kTone);
}

std::vector<std::string> write_all(const std::filesystem::path& dir, const LanguageProfile& hmong,
                                   std::uint64_t seed) {
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& content) {
    text::write_file(dir / name, content);
    written.push_back(name);
  };

  const Scale scale = planted_scale(hmong, 7, seed);
  put("planted.scale", scale.format());
  put("planted_records.tsv", format_ee_list(planted_scale_records(hmong, scale, 1500, mix_seed(seed, 2))));

  nlohmann::json cfg{{"language", "hmong"},
                     {"records", "planted_records.tsv"},
                     {"seed", seed},
                     {"k_grid", {"all"}},
                     {"rows", {{{"classifier", "rules"}, {"features", "focal"}},
                               {{"classifier", "tree"}, {"features", "focal"}},
                               {{"classifier", "tree"}, {"features", "all"}}}}};
  put("planted_config.json", cfg.dump(2) + "\n");
  cfg["scale"] = "planted.scale";
  put("planted_rules_config.json", cfg.dump(2) + "\n");

  PlantedCorpusParams cp;
  cp.seed = mix_seed(seed, 3);
  const PlantedCorpus pc = planted_corpus(hmong, cp);
  put("planted_corpus.tags", format_tagged_corpus(pc.gold));
  std::string raw;
  for (const auto& s : pc.gold.sentences) raw += text::join(s.tokens, " ") + "\n";
  put("planted_corpus.txt", raw);
  put("planted_corpus.scale", pc.scale.format());
  put("planted_ees.tsv", format_ee_list(pc.ees));
  save_embeddings(pc.embeddings, dir / "planted_corpus.eewv");
  written.push_back("planted_corpus.eewv");

  const CooccurrenceCorpus cc = cooccurrence_corpus(mix_seed(seed, 4));
  std::string toy;
  for (const auto& s : cc.corpus) toy += text::join(s, " ") + "\n";
  put("cooccurrence.txt", toy);
  std::string pairs;
  for (const auto& [x, y] : cc.planted) pairs += "planted\t" + x + "\t" + y + "\n";
  for (const auto& [x, y] : cc.never) pairs += "never\t" + x + "\t" + y + "\n";
  put("cooccurrence_pairs.tsv", pairs);

  put("hmong_tree.json", hmong_reference_tree(hmong.inventory).dump(2) + "\n");
  put("mc_tree.json", mc_reference_tree().dump(2) + "\n");
  return written;
}

}  // namespace eeorder::fixtures
