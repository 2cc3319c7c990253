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

#include "eeorder/tagging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "eeorder/error.hpp"
#include "eeorder/rng.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

std::vector<CandidateSpan> find_candidates(const Sentence& s, bool exclude_equal_b) {
  std::vector<CandidateSpan> out;
  for (std::size_t i = 0; i + kSpanLength <= s.size(); ++i) {
    if (s[i] != s[i + 2]) continue;
    if (exclude_equal_b && s[i + 1] == s[i + 3]) continue;
    CandidateSpan c;
    c.start = i;
    for (std::size_t k = 0; k < kSpanLength; ++k) c.tokens[k] = s[i + k];
    out.push_back(std::move(c));
  }
  return out;
}

unsigned parse_stages(std::string_view spec) {
  spec = text::trim(spec);
  if (spec.empty() || spec == "none") return kStageNone;
  unsigned out = kStageNone;
  for (const std::string& part : text::split(spec, ',')) {
    const std::string_view p = text::trim(part);
    if (p == "parsable") out |= kStageParsable;
    else if (p == "sim" || p == "similarity") out |= kStageSimilarity;
    else if (p == "scale") out |= kStageScale;
    else if (p == "all") out |= kStageParsable | kStageSimilarity | kStageScale;
    else fail(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(p) + "'");
  }
  return out;
}

std::string stages_to_string(unsigned stages) {
  std::vector<std::string> parts;
  if (stages & kStageParsable) parts.emplace_back("parsable");
  if (stages & kStageSimilarity) parts.emplace_back("sim");
  if (stages & kStageScale) parts.emplace_back("scale");
  return parts.empty() ? "none" : text::join(parts, ",");
}

BaselineResult baseline_tag(const Corpus& corpus, const LanguageProfile& profile,
                            const EmbeddingTable* emb, const Scale* scale,
                            const BaselineParams& params) {
  if ((params.stages & kStageSimilarity) && !emb)
    fail(ErrorCode::kInvalidArgument, "the similarity stage needs embeddings");
  if ((params.stages & kStageScale) && !scale)
    fail(ErrorCode::kInvalidArgument, "the scale stage needs a scale");
  const PhonemeInventory& inv = profile.inventory;
  BaselineResult out;
  out.tagged.sentences.reserve(corpus.size());
  for (std::size_t si = 0; si < corpus.size(); ++si) {
    const Sentence& s = corpus[si];
    TaggedSentence ts{s, std::vector<Tag>(s.size(), Tag::kO)};
    for (CandidateSpan& c : find_candidates(s, params.exclude_equal_b)) {
      c.sentence = si;
      const auto a = inv.try_parse(c.tokens[0]);
      const auto b1 = inv.try_parse(c.tokens[1]);
      const auto b2 = inv.try_parse(c.tokens[3]);
      c.parsable = a && b1 && b2;
      if (emb && emb->contains(c.tokens[1]) && emb->contains(c.tokens[3]))
        c.cos_sim = cosine(*emb, c.tokens[1], c.tokens[3]);
      if (scale && b1 && b2 && scale->knows(b1->constituent(scale->focal())) &&
          scale->knows(b2->constituent(scale->focal())))
        // Ties (equal or unranked focal phonemes) are not evidence against.
        c.scale_ok = rule_decide(*scale, *b1, *b2) != RuleOutcome::kUnattested;

      bool keep = true;
      if ((params.stages & kStageParsable) && !c.parsable) {
        ++out.rejected_parsable;
        keep = false;
      } else if ((params.stages & kStageSimilarity) && !(c.cos_sim && *c.cos_sim > params.alpha)) {
        ++out.rejected_similarity;
        keep = false;
      } else if ((params.stages & kStageScale) && !c.scale_ok.value_or(false)) {
        ++out.rejected_scale;
        keep = false;
      }
      if (keep) {
        bool free = true;
        for (std::size_t k = 0; k < kSpanLength; ++k) free = free && ts.tags[c.start + k] == Tag::kO;
        if (free) {
          ts.tags[c.start] = Tag::kB;
          for (std::size_t k = 1; k < kSpanLength; ++k) ts.tags[c.start + k] = Tag::kI;
          ++out.accepted;
        } else {
          ++out.skipped_overlap;
        }
      }
      out.candidates.push_back(std::move(c));
    }
    out.tagged.sentences.push_back(std::move(ts));
  }
  return out;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

PRF make_prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r{tp, fp, fn, 0.0, 0.0, 0.0};
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

TagMetrics evaluate_tags(const TaggedCorpus& pred, const TaggedCorpus& gold) {
  if (pred.sentences.size() != gold.sentences.size())
    fail(ErrorCode::kInvalidArgument, "predicted and gold corpora have different sentence counts");
  TagMetrics m;
  std::size_t ttp = 0, tfp = 0, tfn = 0, stp = 0, sfp = 0, sfn = 0;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& p = pred.sentences[i];
    const auto& g = gold.sentences[i];
    if (p.tags.size() != g.tags.size() || p.tokens != g.tokens)
      fail(ErrorCode::kInvalidArgument,
           "sentence " + std::to_string(i) + " is not aligned with the gold corpus");
    for (std::size_t t = 0; t < g.tags.size(); ++t) {
      const Tag gt = g.tags[t], pt = p.tags[t];
      ++m.confusion[static_cast<std::size_t>(gt)][static_cast<std::size_t>(pt)];
      if (gt == pt) {
        if (gt != Tag::kO) ++ttp;
      } else {
        if (pt != Tag::kO) ++tfp;
        if (gt != Tag::kO) ++tfn;
      }
    }
    m.tokens += g.tags.size();
    const auto gs = spans(g.tags), ps = spans(p.tags);
    std::set<std::pair<std::size_t, int>> gset;
    for (const Span& s : gs) gset.emplace(s.start, static_cast<int>(s.kind));
    for (const Span& s : ps) {
      if (gset.count({s.start, static_cast<int>(s.kind)})) ++stp;
      else ++sfp;
    }
    sfn += gs.size();
  }
  sfn -= stp;
  m.token = make_prf(ttp, tfp, tfn);
  m.span = make_prf(stp, sfp, sfn);
  return m;
}

double in_context_accuracy(std::size_t real_real, std::size_t fake_fake, std::size_t real_fake,
                           std::size_t fake_real) {
  const std::size_t denom = real_real + fake_fake + real_fake + fake_real;
  if (denom == 0) fail(ErrorCode::kInvalidArgument, "no detected spans to score");
  return static_cast<double>(real_real + fake_fake) / static_cast<double>(denom);
}

double in_context_accuracy(const ConfusionMatrix& cm) {
  const auto b = static_cast<std::size_t>(Tag::kB), f = static_cast<std::size_t>(Tag::kBFake);
  return in_context_accuracy(cm[b][b], cm[f][f], cm[b][f], cm[f][b]);
}

namespace {
std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%6.2f", 100.0 * v);
  return buf;
}
}  // namespace

std::string metrics_table(const TagMetrics& m, std::string_view label) {
  std::string out = "model      level  precision  recall      F1\n";
  auto row = [&](std::string_view level, const PRF& r) {
    std::string name(label);
    if (name.size() < 10) name.resize(10, ' ');
    out += name + " " + std::string(level) + "     " + pct(r.precision) + "  " + pct(r.recall) +
           "  " + pct(r.f1) + "\n";
  };
  row("token", m.token);
  row("span ", m.span);
  return out;
}

nlohmann::json metrics_json(const TagMetrics& m) {
  auto prf = [](const PRF& r) {
    return nlohmann::json{{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision},
                          {"recall", r.recall}, {"f1", r.f1}};
  };
  nlohmann::json cm = nlohmann::json::array();
  for (const auto& row : m.confusion) cm.push_back(row);
  nlohmann::json j{{"token", prf(m.token)}, {"span", prf(m.span)}, {"confusion", cm},
                   {"tokens", m.tokens}};
  const auto b = static_cast<std::size_t>(Tag::kB), f = static_cast<std::size_t>(Tag::kBFake);
  if (m.confusion[b][b] + m.confusion[f][f] + m.confusion[b][f] + m.confusion[f][b] > 0 &&
      m.confusion[f][f] + m.confusion[b][f] + m.confusion[f][b] > 0)
    j["in_context_accuracy"] = in_context_accuracy(m.confusion);
  return j;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "gold\\pred";
  for (std::size_t t = 0; t < kNumTags; ++t) out += "," + std::string(to_string(static_cast<Tag>(t)));
  out += "\n";
  for (std::size_t g = 0; g < kNumTags; ++g) {
    out += to_string(static_cast<Tag>(g));
    for (std::size_t p = 0; p < kNumTags; ++p) out += "," + std::to_string(cm[g][p]);
    out += "\n";
  }
  return out;
}

std::vector<Tag> repair_tags(const std::vector<Tag>& raw, RepairCounts* counts) {
  RepairCounts local;
  RepairCounts& c = counts ? *counts : local;
  std::vector<Tag> out(raw.size(), Tag::kO);
  std::size_t i = 0;
  while (i < raw.size()) {
    if (is_inside(raw[i])) {
      ++c.orphan_inside;
      ++i;
      continue;
    }
    if (!is_begin(raw[i])) {
      ++i;
      continue;
    }
    std::size_t run = 1;
    while (i + run < raw.size() && is_inside(raw[i + run])) ++run;
    if (run < kSpanLength) {
      ++c.incomplete;
      i += run;
      continue;
    }
    const Tag inside = inside_of(raw[i]);
    out[i] = raw[i];
    bool relabeled = false;
    for (std::size_t k = 1; k < kSpanLength; ++k) {
      relabeled = relabeled || raw[i + k] != inside;
      out[i + k] = inside;
    }
    if (relabeled) ++c.relabeled;
    if (run > kSpanLength) ++c.trimmed;
    i += run;
  }
  return out;
}

bool EarlyStopping::update(double score, std::size_t epoch) {
  improved_ = score > best_;
  if (improved_) {
    best_ = score;
    best_epoch_ = epoch;
  }
  return epoch >= best_epoch_ + patience_;
}

namespace {

std::string slot(const Sentence& s, long i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<long>(s.size())) return "</s>";
  return s[static_cast<std::size_t>(i)];
}

// Candidate-anchored context of token i: for each position p of a 4-gram
// A B1 A B2 that could contain i, the start of that 4-gram.
std::vector<std::pair<int, std::size_t>> anchors(const Sentence& s, std::size_t i) {
  std::vector<std::pair<int, std::size_t>> out;
  for (int p = 0; p < static_cast<int>(kSpanLength); ++p) {
    if (i < static_cast<std::size_t>(p)) continue;
    const std::size_t st = i - static_cast<std::size_t>(p);
    if (st + kSpanLength > s.size()) continue;
    if (s[st] != s[st + 2]) continue;
    out.emplace_back(p, st);
  }
  return out;
}

template <typename Emit>
void token_features(const Sentence& s, std::size_t i, const LanguageProfile* profile, Emit&& emit) {
  emit("bias");
  const long li = static_cast<long>(i);
  for (long o = -2; o <= 2; ++o) emit("w" + std::to_string(o) + "=" + slot(s, li + o));
  if (profile)
    for (long o = -1; o <= 1; ++o) {
      const std::string tok = slot(s, li + o);
      if (auto syl = profile->inventory.try_parse(tok)) {
        for (PhonemeClass c : kAllClasses)
          emit("p" + std::to_string(o) + "." + std::string(to_string(c)) + "=" +
               syl->constituent(c));
      } else {
        emit("p" + std::to_string(o) + ".noparse");
      }
    }
  for (const auto& [p, st] : anchors(s, i)) {
    const std::string c = "c" + std::to_string(p);
    const std::string& b1 = s[st + 1];
    const std::string& b2 = s[st + 3];
    if (b1 == b2) {
      emit(c + ".same");
      continue;
    }
    emit(c);
    emit(c + "&w0=" + s[i]);
    emit(c + "&a=" + s[st]);
    emit(c + "&b1=" + b1);
    emit(c + "&b2=" + b2);
    emit(c + "&pair=" + b1 + "|" + b2);
    if (!profile) continue;
    const auto s1 = profile->inventory.try_parse(b1);
    const auto s2 = profile->inventory.try_parse(b2);
    const auto sa = profile->inventory.try_parse(s[st]);
    if (!s1 || !s2 || !sa) {
      emit(c + "&noparse");
      continue;
    }
    for (PhonemeClass cls : kAllClasses) {
      const std::string name(to_string(cls));
      emit(c + "&b1." + name + "=" + s1->constituent(cls));
      emit(c + "&b2." + name + "=" + s2->constituent(cls));
      emit(c + "&" + name + "s=" + s1->constituent(cls) + "|" + s2->constituent(cls));
    }
  }
}

std::size_t tag_index(Tag t) { return static_cast<std::size_t>(t); }

}  // namespace

std::vector<std::vector<std::uint32_t>> WindowTagger::featurize(const Sentence& s, bool grow) {
  std::vector<std::vector<std::uint32_t>> out(s.size());
  const LanguageProfile* prof = profile_ ? &*profile_ : nullptr;
  for (std::size_t i = 0; i < s.size(); ++i)
    token_features(s, i, prof, [&](const std::string& name) {
      auto it = ids_.find(name);
      if (it == ids_.end()) {
        if (!grow) return;
        it = ids_.emplace(name, static_cast<std::uint32_t>(names_.size())).first;
        names_.push_back(name);
      }
      out[i].push_back(it->second);
    });
  return out;
}

std::vector<std::vector<std::uint32_t>> WindowTagger::featurize(const Sentence& s) const {
  return const_cast<WindowTagger*>(this)->featurize(s, false);
}

void WindowTagger::scores(const std::vector<std::uint32_t>& feats, std::vector<double>& out) const {
  out.assign(num_tags_, 0.0);
  for (std::uint32_t f : feats) {
    const float* w = &weights_[static_cast<std::size_t>(f) * num_tags_];
    for (std::size_t t = 0; t < num_tags_; ++t) out[t] += w[t];
  }
}

std::vector<Tag> WindowTagger::predict_raw(const Sentence& s) const {
  std::vector<Tag> out(s.size(), Tag::kO);
  std::vector<double> sc;
  const auto feats = featurize(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    scores(feats[i], sc);
    out[i] = static_cast<Tag>(std::max_element(sc.begin(), sc.end()) - sc.begin());
  }
  return out;
}

TaggedCorpus WindowTagger::tag(const Corpus& corpus, RepairCounts* counts) const {
  TaggedCorpus out;
  out.sentences.reserve(corpus.size());
  for (const Sentence& s : corpus) out.sentences.push_back({s, repair_tags(predict_raw(s), counts)});
  return out;
}

nlohmann::json WindowTagger::to_json() const {
  nlohmann::json feats = nlohmann::json::array();
  for (std::size_t f = 0; f < names_.size(); ++f) {
    std::vector<float> w(weights_.begin() + static_cast<long>(f * num_tags_),
                         weights_.begin() + static_cast<long>((f + 1) * num_tags_));
    feats.push_back({names_[f], w});
  }
  return {{"kind", "window-tagger"},
          {"num_tags", num_tags_},
          {"profile", profile_ ? profile_->language : std::string()},
          {"params", {{"learning_rate", params_.learning_rate}, {"l2", params_.l2},
                      {"max_epochs", params_.max_epochs}, {"patience", params_.patience},
                      {"negative_share", params_.negative_share},
                      {"phoneme_features", params_.phoneme_features}, {"seed", params_.seed}}},
          {"history", {{"dev_span_f1", history_.dev_span_f1}, {"epochs_run", history_.epochs_run},
                       {"best_epoch", history_.best_epoch}}},
          {"features", feats}};
}

WindowTagger WindowTagger::from_json(const nlohmann::json& j) {
  try {
    WindowTagger m;
    m.num_tags_ = j.at("num_tags").get<std::size_t>();
    if (m.num_tags_ != 3 && m.num_tags_ != kNumTags)
      fail(ErrorCode::kFormat, "tagger must have 3 or 5 tags");
    const auto& p = j.at("params");
    m.params_.learning_rate = p.at("learning_rate").get<double>();
    m.params_.l2 = p.at("l2").get<double>();
    m.params_.max_epochs = p.at("max_epochs").get<std::size_t>();
    m.params_.patience = p.at("patience").get<std::size_t>();
    m.params_.negative_share = p.at("negative_share").get<double>();
    m.params_.phoneme_features = p.at("phoneme_features").get<bool>();
    m.params_.seed = p.at("seed").get<std::uint64_t>();
    if (j.contains("history")) {
      const auto& h = j.at("history");
      m.history_.dev_span_f1 = h.at("dev_span_f1").get<std::vector<double>>();
      m.history_.epochs_run = h.at("epochs_run").get<std::size_t>();
      m.history_.best_epoch = h.at("best_epoch").get<std::size_t>();
    }
    for (const auto& f : j.at("features")) {
      const auto name = f.at(0).get<std::string>();
      const auto w = f.at(1).get<std::vector<float>>();
      if (w.size() != m.num_tags_) fail(ErrorCode::kFormat, "feature '" + name + "' has wrong width");
      m.ids_.emplace(name, static_cast<std::uint32_t>(m.names_.size()));
      m.names_.push_back(name);
      m.weights_.insert(m.weights_.end(), w.begin(), w.end());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("tagger json: ") + e.what());
  }
}

void WindowTagger::save(const std::filesystem::path& path) const {
  text::write_file(path, to_json().dump());
}

WindowTagger WindowTagger::load(const std::filesystem::path& path,
                                const std::filesystem::path& data_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  WindowTagger m = from_json(j);
  const std::string lang = j.value("profile", std::string());
  if (!lang.empty()) m.profile_ = load_profile(lang, data_dir);
  return m;
}

EmbeddingTable WindowTagger::word_embeddings() const {
  // Slots: the five window offsets, then b1/b2 under each anchor position.
  std::vector<std::string> prefixes;
  for (int o = -2; o <= 2; ++o) prefixes.push_back("w" + std::to_string(o) + "=");
  for (int p = 0; p < static_cast<int>(kSpanLength); ++p) {
    prefixes.push_back("c" + std::to_string(p) + "&b1=");
    prefixes.push_back("c" + std::to_string(p) + "&b2=");
  }
  std::set<std::string> words;
  for (const auto& name : names_)
    if (name.starts_with("w0=")) {
      const std::string w = name.substr(3);
      if (w != "<s>" && w != "</s>") words.insert(w);
    }
  if (words.empty()) fail(ErrorCode::kInvalidArgument, "tagger has no word features");
  const std::size_t dim = prefixes.size() * num_tags_;
  std::vector<std::string> vocab(words.begin(), words.end());
  std::vector<float> vec(vocab.size() * dim, 0.0f);
  for (std::size_t v = 0; v < vocab.size(); ++v)
    for (std::size_t s = 0; s < prefixes.size(); ++s)
      if (auto it = ids_.find(prefixes[s] + vocab[v]); it != ids_.end())
        for (std::size_t t = 0; t < num_tags_; ++t)
          vec[v * dim + s * num_tags_ + t] = weights_[it->second * num_tags_ + t];
  EmbeddingTable table(std::move(vocab), dim, std::move(vec));
  table.trained = true;
  table.source = "wv-tagger-standin";
  return table;
}

WindowTagger train_window_tagger(const TaggedCorpus& train, const TaggedCorpus& dev,
                                 const TaggerParams& params, const LanguageProfile* profile) {
  if (train.sentences.empty()) fail(ErrorCode::kInvalidArgument, "empty training corpus");
  if (!(params.learning_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  if (params.phoneme_features && !profile)
    fail(ErrorCode::kInvalidArgument, "phoneme features need a language profile");
  if (!well_formed(train) || !well_formed(dev))
    fail(ErrorCode::kInvalidArgument, "training and dev tags must be well formed");
  auto has_fake = [](const TaggedCorpus& c) {
    for (const auto& s : c.sentences)
      for (Tag t : s.tags)
        if (t == Tag::kBFake || t == Tag::kIFake) return true;
    return false;
  };
  const bool five = has_fake(train);
  if (!five && has_fake(dev)) fail(ErrorCode::kInvalidArgument, "dev uses fake tags that train lacks");

  WindowTagger m;
  m.num_tags_ = five ? kNumTags : 3;
  m.params_ = params;
  if (params.phoneme_features) m.profile_ = *profile;

  std::vector<std::vector<std::vector<std::uint32_t>>> feats;
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < train.sentences.size(); ++i) {
    const auto& s = train.sentences[i];
    feats.push_back(m.featurize(s.tokens, true));
    const bool pos = std::any_of(s.tags.begin(), s.tags.end(), [](Tag t) { return t != Tag::kO; });
    (pos ? positives : negatives).push_back(i);
  }
  m.weights_.assign(m.names_.size() * m.num_tags_, 0.0f);

  const TaggedCorpus& eval = dev.sentences.empty() ? train : dev;
  const Corpus eval_tokens = eval.untagged();
  std::size_t n_neg = negatives.size();
  if (!positives.empty() && params.negative_share < 1.0) {
    const double want = params.negative_share / (1.0 - params.negative_share) *
                        static_cast<double>(positives.size());
    n_neg = std::min(n_neg, static_cast<std::size_t>(std::llround(want)));
  }

  Rng rng(mix_seed(params.seed, 0x7a6));
  EarlyStopping stop(params.patience);
  std::vector<float> best = m.weights_;
  std::vector<double> sc, prob(m.num_tags_);
  for (std::size_t epoch = 0; epoch < params.max_epochs; ++epoch) {
    shuffle(negatives, rng);
    std::vector<std::size_t> order = positives;
    order.insert(order.end(), negatives.begin(), negatives.begin() + static_cast<long>(n_neg));
    shuffle(order, rng);
    const double lr = params.learning_rate / (1.0 + 0.05 * static_cast<double>(epoch));
    for (std::size_t si : order) {
      const auto& tags = train.sentences[si].tags;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        m.scores(feats[si][i], sc);
        const double mx = *std::max_element(sc.begin(), sc.end());
        double z = 0.0;
        for (std::size_t t = 0; t < m.num_tags_; ++t) z += prob[t] = std::exp(sc[t] - mx);
        for (std::size_t t = 0; t < m.num_tags_; ++t) {
          prob[t] /= z;
          if (t == tag_index(tags[i])) prob[t] -= 1.0;
        }
        for (std::uint32_t f : feats[si][i]) {
          float* w = &m.weights_[static_cast<std::size_t>(f) * m.num_tags_];
          for (std::size_t t = 0; t < m.num_tags_; ++t)
            w[t] -= static_cast<float>(lr * (prob[t] + params.l2 * w[t]));
        }
      }
    }
    const double f1 = evaluate_tags(m.tag(eval_tokens), eval).span.f1;
    m.history_.dev_span_f1.push_back(f1);
    m.history_.epochs_run = epoch + 1;
    const bool halt = stop.update(f1, epoch);
    if (stop.improved()) best = m.weights_;
    if (halt) break;
  }
  m.weights_ = std::move(best);
  m.history_.best_epoch = stop.best_epoch();
  return m;
}

}  // namespace eeorder
