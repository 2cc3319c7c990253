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

#include "eeorder/eeorder.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "eeorder/corpus.hpp"
#include "eeorder/datasets.hpp"
#include "eeorder/embeddings.hpp"
#include "eeorder/error.hpp"
#include "eeorder/experiment.hpp"
#include "eeorder/fixtures.hpp"
#include "eeorder/phonology.hpp"
#include "eeorder/scales.hpp"
#include "eeorder/tagging.hpp"
#include "eeorder/text.hpp"

#ifndef EEORDER_VERSION
#define EEORDER_VERSION "0.0.0"
#endif

struct eeo_profile {
  eeorder::LanguageProfile profile;
  std::optional<eeorder::MCLexicon> lexicon;
};
struct eeo_scale {
  eeorder::Scale scale;
};
struct eeo_embeddings {
  eeorder::EmbeddingTable table;
};
struct eeo_tagger {
  eeorder::WindowTagger tagger;
};

namespace {

using namespace eeorder;

thread_local std::string g_last_error;

template <typename F>
eeo_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return EEO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<eeo_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EEO_RUNTIME;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return EEO_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EEO_RUNTIME;
  }
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_string(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

PhonemeClass to_class(eeo_class c) {
  switch (c) {
    case EEO_ONSET: return PhonemeClass::kOnset;
    case EEO_RHYME: return PhonemeClass::kRhyme;
    case EEO_TONE: return PhonemeClass::kTone;
  }
  fail(ErrorCode::kInvalidArgument, "unknown phoneme class");
}

void copy_symbol(char (&dst)[EEO_SYMBOL_MAX], const std::string& src) {
  if (src.size() >= EEO_SYMBOL_MAX) fail(ErrorCode::kLimit, "symbol '" + src + "' is too long");
  std::memcpy(dst, src.c_str(), src.size() + 1);
}

std::vector<PairRecord> load_records(const eeo_profile* p, const char* path, const char* format) {
  require(path, "records path");
  const std::string fmt = format ? format : (p->profile.mc_mode ? "cc" : "ee");
  if (fmt == "ee") return load_ee_list(path, p->profile).records;
  if (fmt == "cc") return load_cc_list(path, p->profile, p->lexicon ? &*p->lexicon : nullptr).records;
  fail(ErrorCode::kInvalidArgument, "record format is 'ee' or 'cc', not '" + fmt + "'");
}

// Raw sentences, or the tagged format with its tags dropped.
Corpus load_any_corpus(const char* path) {
  require(path, "corpus path");
  const std::string content = text::read_file(path);
  if (content.find('\t') != std::string::npos) return parse_tagged_corpus(content).untagged();
  return load_corpus(path);
}

nlohmann::json prf_json(const PRF& r) {
  return {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
}

}  // namespace

extern "C" {

const char* eeo_version(void) { return EEORDER_VERSION; }

const char* eeo_last_error(void) { return g_last_error.c_str(); }

void eeo_string_free(char* s) { std::free(s); }

eeo_status eeo_profile_open(const char* language, const char* data_dir, eeo_profile** out) {
  return guard([&] {
    require(language, "language");
    require(out, "out");
    auto p = std::make_unique<eeo_profile>();
    p->profile = load_profile(language, data_dir ? std::filesystem::path(data_dir) : default_data_dir());
    *out = p.release();
  });
}

eeo_status eeo_profile_open_mc(const char* readings_path, eeo_profile** out) {
  return guard([&] {
    require(readings_path, "readings path");
    require(out, "out");
    auto p = std::make_unique<eeo_profile>();
    p->lexicon = profile_from_mc_readings(load_mc_readings(readings_path));
    p->profile = p->lexicon->profile;
    *out = p.release();
  });
}

void eeo_profile_free(eeo_profile* profile) { delete profile; }

eeo_status eeo_profile_inventory_size(const eeo_profile* profile, eeo_class cls, size_t* out) {
  return guard([&] {
    require(profile, "profile");
    require(out, "out");
    *out = profile->profile.inventory.size(to_class(cls));
  });
}

eeo_status eeo_profile_focal(const eeo_profile* profile, eeo_class* out) {
  return guard([&] {
    require(profile, "profile");
    require(out, "out");
    *out = static_cast<eeo_class>(static_cast<int>(profile->profile.focal));
  });
}

eeo_status eeo_parse_syllable(const eeo_profile* profile, const char* token, eeo_syllable* out) {
  return guard([&] {
    require(profile, "profile");
    require(token, "token");
    require(out, "out");
    const Syllable s = parse_syllable(profile->profile.inventory, token);
    copy_symbol(out->onset, s.onset);
    copy_symbol(out->rhyme, s.rhyme);
    copy_symbol(out->tone, s.tone);
  });
}

eeo_status eeo_render_syllable(const eeo_profile* profile, const eeo_syllable* syl, char** out) {
  return guard([&] {
    require(profile, "profile");
    require(syl, "syllable");
    require(out, "out");
    *out = dup(render_syllable(profile->profile.inventory,
                               Syllable{syl->onset, syl->rhyme, syl->tone}));
  });
}

eeo_status eeo_scale_load(const char* path, eeo_scale** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new eeo_scale{Scale::load(path)};
  });
}

eeo_status eeo_scale_save(const eeo_scale* scale, const char* path) {
  return guard([&] {
    require(scale, "scale");
    require(path, "path");
    scale->scale.save(path);
  });
}

eeo_status eeo_scale_to_string(const eeo_scale* scale, char** out) {
  return guard([&] {
    require(scale, "scale");
    require(out, "out");
    *out = dup(scale->scale.to_string());
  });
}

void eeo_scale_free(eeo_scale* scale) { delete scale; }

eeo_status eeo_scale_apply(const eeo_scale* scale, const eeo_profile* profile,
                           const char* records_path, const char* format, uint64_t seed,
                           eeo_tie_mode tie, double* accuracy, size_t* examples) {
  return guard([&] {
    require(scale, "scale");
    require(profile, "profile");
    require(accuracy, "accuracy");
    const LabeledDataset data = augment_with_swaps(load_records(profile, records_path, format), seed);
    const TiePolicy policy =
        tie == EEO_TIE_RANDOM_COIN ? TiePolicy::random_coin(seed) : TiePolicy::expected_half();
    *accuracy = rule_accuracy(scale->scale, data, policy);
    if (examples) *examples = data.size();
  });
}

eeo_status eeo_scale_search(const eeo_profile* profile, const char* records_path,
                            const char* format, uint64_t seed, unsigned threads, eeo_scale** out,
                            double* train_accuracy) {
  return guard([&] {
    require(profile, "profile");
    require(out, "out");
    const LabeledDataset data = augment_with_swaps(load_records(profile, records_path, format), seed);
    const PhonemeClass focal = profile->profile.focal;
    const auto res =
        search_best_scale(
        data, observed_symbols(data, profile->profile.inventory.symbols(focal), focal), focal,
        threads);
    if (train_accuracy) *train_accuracy = res.train_accuracy;
    *out = new eeo_scale{res.scale};
  });
}

eeo_status eeo_scale_induce(const char* bundle_path, eeo_scale** out) {
  return guard([&] {
    require(bundle_path, "bundle path");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text::read_file(bundle_path));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kFormat, std::string(bundle_path) + ": " + e.what());
    }
    *out = new eeo_scale{induce_scale_from_bundle(j)};
  });
}

eeo_status eeo_classify(const char* config_path, const char* overrides_json, const char* out_dir,
                        char** table) {
  return guard([&] {
    require(config_path, "config path");
    const std::filesystem::path path(config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text::read_file(path));
      if (overrides_json && *overrides_json) j.merge_patch(nlohmann::json::parse(overrides_json));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kFormat, std::string("config: ") + e.what());
    }
    const ExperimentFile file =
        parse_experiment_json(j, path.has_parent_path() ? path.parent_path() : ".");
    const auto results = run_experiment(file.config, file.inputs);
    const std::string rendered = report_table(results);
    if (out_dir) {
      const std::filesystem::path dir(out_dir);
      text::write_file(dir / "report.csv", report_csv(results));
      text::write_file(dir / "report.txt", rendered);
      nlohmann::json rep = report_json(file.config, results);
      rep["config"] = file.echo;
      text::write_file(dir / "report.json", rep.dump(2) + "\n");
      for (std::size_t i = 0; i < results.size(); ++i)
        if (results[i].model)
          text::write_file(dir / ("tree_" + std::to_string(i) + ".json"), results[i].model->dump() + "\n");
    }
    set_string(table, rendered);
  });
}

void eeo_skipgram_defaults(eeo_skipgram_params* params) {
  if (!params) return;
  const SkipGramParams d;
  *params = {d.dim, d.window, d.negatives, d.epochs, d.min_count, d.learning_rate, d.seed};
}

eeo_status eeo_embeddings_train(const char* corpus_path, const eeo_skipgram_params* params,
                                eeo_embeddings** out) {
  return guard([&] {
    require(out, "out");
    SkipGramParams p;
    if (params)
      p = {params->dim, params->window, params->negatives, params->epochs, params->min_count,
           params->learning_rate, params->seed};
    *out = new eeo_embeddings{train_skipgram(load_any_corpus(corpus_path), p)};
  });
}

eeo_status eeo_embeddings_load(const char* path, eeo_embeddings** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    const std::filesystem::path p(path);
    *out = new eeo_embeddings{p.extension() == ".csv" ? import_csv(p) : load_embeddings(p)};
  });
}

eeo_status eeo_embeddings_save(const eeo_embeddings* emb, const char* path) {
  return guard([&] {
    require(emb, "embeddings");
    require(path, "path");
    save_embeddings(emb->table, path);
  });
}

eeo_status eeo_embeddings_export_csv(const eeo_embeddings* emb, const char* path) {
  return guard([&] {
    require(emb, "embeddings");
    require(path, "path");
    export_csv(emb->table, path);
  });
}

eeo_status eeo_embeddings_size(const eeo_embeddings* emb, size_t* vocab, size_t* dim) {
  return guard([&] {
    require(emb, "embeddings");
    if (vocab) *vocab = emb->table.size();
    if (dim) *dim = emb->table.dim();
  });
}

eeo_status eeo_embeddings_cosine(const eeo_embeddings* emb, const char* w1, const char* w2,
                                 double* out) {
  return guard([&] {
    require(emb, "embeddings");
    require(w1, "w1");
    require(w2, "w2");
    require(out, "out");
    *out = cosine(emb->table, w1, w2);
  });
}

eeo_status eeo_embeddings_neighbors(const eeo_embeddings* emb, const char* word, size_t k,
                                    char** out) {
  return guard([&] {
    require(emb, "embeddings");
    require(word, "word");
    require(out, "out");
    std::string s;
    char buf[32];
    for (const auto& n : neighbors(emb->table, word, k)) {
      std::snprintf(buf, sizeof buf, "%.6f", n.cosine);
      s += n.word + "\t" + buf + "\n";
    }
    *out = dup(s);
  });
}

void eeo_embeddings_free(eeo_embeddings* emb) { delete emb; }

eeo_status eeo_tag_baseline(const eeo_profile* profile, const char* corpus_path,
                            const eeo_embeddings* emb, const eeo_scale* scale, const char* stages,
                            double alpha, const char* out_path, char** summary) {
  return guard([&] {
    require(profile, "profile");
    BaselineParams params;
    params.stages = parse_stages(stages ? stages : "none");
    params.alpha = alpha;
    const BaselineResult res = baseline_tag(load_any_corpus(corpus_path), profile->profile,
                                            emb ? &emb->table : nullptr,
                                            scale ? &scale->scale : nullptr, params);
    if (out_path) save_tagged_corpus(res.tagged, out_path);
    set_string(summary, nlohmann::json{{"stages", stages_to_string(params.stages)},
                                       {"alpha", params.alpha},
                                       {"candidates", res.candidates.size()},
                                       {"accepted", res.accepted},
                                       {"rejected_parsable", res.rejected_parsable},
                                       {"rejected_similarity", res.rejected_similarity},
                                       {"rejected_scale", res.rejected_scale},
                                       {"skipped_overlap", res.skipped_overlap}}
                            .dump());
  });
}

void eeo_tagger_defaults(eeo_tagger_params* params) {
  if (!params) return;
  const TaggerParams d;
  *params = {d.learning_rate, d.l2, d.max_epochs, d.patience, d.negative_share,
             d.phoneme_features ? 1 : 0, d.seed};
}

eeo_status eeo_tagger_train(const char* train_path, const char* dev_path,
                            const eeo_tagger_params* params, const eeo_profile* profile,
                            eeo_tagger** out) {
  return guard([&] {
    require(train_path, "train path");
    require(out, "out");
    TaggerParams p;
    if (params) {
      p.learning_rate = params->learning_rate;
      p.l2 = params->l2;
      p.max_epochs = params->max_epochs;
      p.patience = params->patience;
      p.negative_share = params->negative_share;
      p.phoneme_features = params->phoneme_features != 0;
      p.seed = params->seed;
    }
    const TaggedCorpus train = load_tagged_corpus(train_path);
    const TaggedCorpus dev = dev_path ? load_tagged_corpus(dev_path) : TaggedCorpus{};
    *out = new eeo_tagger{
        train_window_tagger(train, dev, p, profile ? &profile->profile : nullptr)};
  });
}

eeo_status eeo_tagger_save(const eeo_tagger* tagger, const char* path) {
  return guard([&] {
    require(tagger, "tagger");
    require(path, "path");
    tagger->tagger.save(path);
  });
}

eeo_status eeo_tagger_load(const char* path, const char* data_dir, eeo_tagger** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new eeo_tagger{
        WindowTagger::load(path, data_dir ? std::filesystem::path(data_dir) : default_data_dir())};
  });
}

eeo_status eeo_tagger_apply(const eeo_tagger* tagger, const char* corpus_path,
                            const char* out_path, char** summary) {
  return guard([&] {
    require(tagger, "tagger");
    RepairCounts repairs;
    const TaggedCorpus tagged = tagger->tagger.tag(load_any_corpus(corpus_path), &repairs);
    if (out_path) save_tagged_corpus(tagged, out_path);
    std::size_t n_spans = 0;
    for (const auto& s : tagged.sentences) n_spans += spans(s.tags).size();
    set_string(summary, nlohmann::json{{"sentences", tagged.sentences.size()},
                                       {"spans", n_spans},
                                       {"repairs", {{"orphan_inside", repairs.orphan_inside},
                                                    {"incomplete", repairs.incomplete},
                                                    {"trimmed", repairs.trimmed},
                                                    {"relabeled", repairs.relabeled}}}}
                            .dump());
  });
}

eeo_status eeo_tagger_embeddings(const eeo_tagger* tagger, eeo_embeddings** out) {
  return guard([&] {
    require(tagger, "tagger");
    require(out, "out");
    *out = new eeo_embeddings{tagger->tagger.word_embeddings()};
  });
}

void eeo_tagger_free(eeo_tagger* tagger) { delete tagger; }

eeo_status eeo_tag_eval(const char* pred_path, const char* gold_path, const char* label,
                        char** json, char** table, char** confusion) {
  return guard([&] {
    require(pred_path, "prediction path");
    require(gold_path, "gold path");
    const TagMetrics m = evaluate_tags(load_tagged_corpus(pred_path), load_tagged_corpus(gold_path));
    nlohmann::json j = metrics_json(m);
    j["token"].update(prf_json(m.token));
    set_string(json, j.dump());
    set_string(table, metrics_table(m, label ? label : "model"));
    set_string(confusion, confusion_csv(m.confusion));
  });
}

eeo_status eeo_in_context_accuracy(size_t real_real, size_t fake_fake, size_t real_fake,
                                   size_t fake_real, double* out) {
  return guard([&] {
    require(out, "out");
    *out = in_context_accuracy(real_real, fake_fake, real_fake, fake_real);
  });
}

eeo_status eeo_swap_corpus(const char* tagged_path, const char* catalog_path, double swap_frac,
                           uint64_t seed, const char* out_path, char** summary) {
  return guard([&] {
    require(tagged_path, "tagged path");
    std::vector<std::string> catalog;
    if (catalog_path)
      for (const auto& line : text::read_lines(catalog_path))
        if (!text::trim(line).empty()) catalog.emplace_back(text::trim(line));
    const SwapCorpusResult res =
        generate_swap_corpus(load_tagged_corpus(tagged_path), catalog, swap_frac, seed);
    if (out_path) save_tagged_corpus(res.corpus, out_path);
    set_string(summary, nlohmann::json{{"swapped", res.swapped.size()},
                                       {"kept", res.kept.size()},
                                       {"swapped_keys", res.swapped}}
                            .dump());
  });
}

eeo_status eeo_split_corpus(const char* tagged_path, double train, double dev, double test,
                            int n_splits, uint64_t seed, const char* out_dir, char** summary) {
  return guard([&] {
    require(tagged_path, "tagged path");
    require(out_dir, "output directory");
    const auto splits = split_corpus_by_ee(load_tagged_corpus(tagged_path),
                                           CorpusRatios{train, dev, test}, n_splits, seed);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < splits.size(); ++k) {
      const auto dir = std::filesystem::path(out_dir) / ("split" + std::to_string(k));
      const auto& s = splits[k];
      save_tagged_corpus(s.train, dir / "train.tags");
      save_tagged_corpus(s.dev, dir / "dev.tags");
      save_tagged_corpus(s.test, dir / "test.tags");
      text::write_file(dir / "train_ees.txt", text::join(s.train_ees, "\n") + "\n");
      text::write_file(dir / "dev_ees.txt", text::join(s.dev_ees, "\n") + "\n");
      text::write_file(dir / "test_ees.txt", text::join(s.test_ees, "\n") + "\n");
      rows.push_back({{"split", k},
                      {"train_sentences", s.train.sentences.size()},
                      {"dev_sentences", s.dev.sentences.size()},
                      {"test_sentences", s.test.sentences.size()},
                      {"train_ees", s.train_ees.size()},
                      {"dev_ees", s.dev_ees.size()},
                      {"test_ees", s.test_ees.size()},
                      {"conflicts", s.conflicts}});
    }
    set_string(summary, rows.dump());
  });
}

eeo_status eeo_overlap(const eeo_profile* profile, const char* train_records,
                       const char* test_records, const char* format, const char* corpus_path,
                       char** report) {
  return guard([&] {
    require(profile, "profile");
    require(report, "report");
    const auto train = load_records(profile, train_records, format);
    const auto test = load_records(profile, test_records, format);
    std::optional<BigramCounts> bigrams;
    if (corpus_path) bigrams = bigram_counts(load_any_corpus(corpus_path));
    const OverlapCounts c = component_overlap_analysis(train, test, bigrams ? &*bigrams : nullptr);
    std::string out = "a\tb1\tb2\tsame_order_ee\treversed_ee\tsame_order_cc\treversed_cc\n";
    for (const auto& r : c.rows)
      out += r.a + "\t" + r.b1 + "\t" + r.b2 + "\t" + std::to_string(r.same_order_ee) + "\t" +
             std::to_string(r.reversed_ee) + "\t" + std::to_string(r.same_order_cc) + "\t" +
             std::to_string(r.reversed_cc) + "\n";
    out += "TOTAL\t\t\t" + std::to_string(c.same_order_ee) + "\t" + std::to_string(c.reversed_ee) +
           "\t" + std::to_string(c.same_order_cc) + "\t" + std::to_string(c.reversed_cc) + "\n";
    *report = dup(out);
  });
}

eeo_status eeo_fixtures(const char* data_dir, uint64_t seed, const char* out_dir, char** listing) {
  return guard([&] {
    require(out_dir, "output directory");
    const LanguageProfile hmong =
        load_profile("hmong", data_dir ? std::filesystem::path(data_dir) : default_data_dir());
    set_string(listing, text::join(fixtures::write_all(out_dir, hmong, seed), "\n") + "\n");
  });
}

}  // extern "C"
