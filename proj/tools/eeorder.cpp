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

// Command-line front end. Talks to the toolkit only through the C API.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eeorder/eeorder.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Failure {
  int code;
};

std::string g_stage;

// Throws Failure carrying the exit code for a non-OK status.
void check(eeo_status st) {
  if (st == EEO_OK) return;
  std::fprintf(stderr, "eeorder %s: error: %s\n", g_stage.c_str(), eeo_last_error());
  throw Failure{st == EEO_RUNTIME || st == EEO_IO ? kExitRuntime : kExitValidation};
}

// Owning wrappers for C handles and strings.
struct CString {
  char* p = nullptr;
  ~CString() { eeo_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Profile = Handle<eeo_profile, eeo_profile_free>;
using ScaleH = Handle<eeo_scale, eeo_scale_free>;
using Embeddings = Handle<eeo_embeddings, eeo_embeddings_free>;
using Tagger = Handle<eeo_tagger, eeo_tagger_free>;

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void open_profile(Profile& p, const std::string& lang, const std::string& data,
                  const std::string& mc_readings) {
  if (lang == "mc") {
    if (mc_readings.empty()) {
      std::fprintf(stderr, "eeorder %s: error: --lang mc needs --mc-readings\n", g_stage.c_str());
      throw Failure{kExitValidation};
    }
    check(eeo_profile_open_mc(mc_readings.c_str(), &p.p));
  } else {
    check(eeo_profile_open(lang.c_str(), opt(data), &p.p));
  }
}

std::string show(const char* sym) { return *sym ? sym : "\xE2\x88\x85"; }

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
    return;
  }
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "eeorder %s: error: cannot write %s\n", g_stage.c_str(), path.c_str());
    throw Failure{kExitRuntime};
  }
  std::fputs(content.c_str(), f);
  std::fclose(f);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordering models for coordinate compounds and elaborate expressions"};
  app.set_version_flag("--version", std::string(eeo_version()));
  app.require_subcommand(1);

  std::string lang = "hmong", data, mc_readings, format;
  std::uint64_t seed = 1;
  auto lang_opts = [&](CLI::App* sub) {
    sub->add_option("--lang", lang, "Language profile: hmong, lahu, mandarin or mc");
    sub->add_option("--data", data, "Inventory/scale directory (default: $EEORDER_DATA)");
    sub->add_option("--mc-readings", mc_readings, "Middle Chinese readings table (for --lang mc)")
        ->check(CLI::ExistingFile);
  };

  // parse
  auto* parse = app.add_subcommand("parse", "Decompose tokens into onset, rhyme and tone");
  std::vector<std::string> tokens;
  lang_opts(parse);
  parse->add_option("tokens", tokens, "Tokens to parse")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "Run a classification experiment file");
  std::string config, out_dir, k_grid;
  bool unique_pairs = false;
  int reps = 0;
  unsigned jobs = 0;
  std::optional<std::uint64_t> classify_seed;
  classify->add_option("--config", config, "Experiment JSON file")->required()->check(CLI::ExistingFile);
  classify->add_option("--out", out_dir, "Directory for report.csv/txt/json");
  classify->add_option("--seed", classify_seed, "Override the config seed");
  classify->add_option("--k-grid", k_grid, "Comma list of K values, 'all' for every feature");
  classify->add_flag("--unique-pairs", unique_pairs, "Average over unique-pair subsets");
  classify->add_option("--reps", reps, "Number of unique-pair subsets")->check(CLI::PositiveNumber);
  classify->add_option("--jobs", jobs, "Experiment rows to run in parallel")->check(CLI::PositiveNumber);

  // scale
  auto* scale = app.add_subcommand("scale", "Search, induce or apply ordering scales");
  scale->require_subcommand(1);
  std::string records, scale_path, tree_path, out_path, tie = "expected-half";
  unsigned threads = 1;
  auto* s_search = scale->add_subcommand("search", "Exhaustive search for the best scale");
  lang_opts(s_search);
  s_search->add_option("--records", records, "EE/CC list")->required()->check(CLI::ExistingFile);
  s_search->add_option("--format", format, "ee or cc");
  s_search->add_option("--seed", seed, "Swap-augmentation seed");
  s_search->add_option("--threads", threads, "Search threads")->check(CLI::PositiveNumber);
  s_search->add_option("--out", out_path, "Write the scale here");
  auto* s_induce = scale->add_subcommand("induce", "Induce a scale from a tree bundle");
  s_induce->add_option("--tree", tree_path, "Tree bundle JSON")->required()->check(CLI::ExistingFile);
  s_induce->add_option("--out", out_path, "Write the scale here");
  auto* s_apply = scale->add_subcommand("apply", "Score a dataset with a scale");
  lang_opts(s_apply);
  s_apply->add_option("--scale", scale_path, "Scale file")->required()->check(CLI::ExistingFile);
  s_apply->add_option("--records", records, "EE/CC list")->required()->check(CLI::ExistingFile);
  s_apply->add_option("--format", format, "ee or cc");
  s_apply->add_option("--seed", seed, "Swap-augmentation and coin seed");
  s_apply->add_option("--tie", tie, "expected-half or random-coin")
      ->check(CLI::IsMember({"expected-half", "random-coin"}));

  // tag
  auto* tag = app.add_subcommand("tag", "Detect elaborate expressions in text");
  tag->require_subcommand(1);
  std::string corpus, stages = "none", emb_path, train_path, dev_path, model_path, pred_path,
                      gold_path, label = "model", json_path, confusion_path, emb_out;
  double alpha = 0.4;
  bool phonemes = false, swap = false;
  eeo_tagger_params tp;
  eeo_tagger_defaults(&tp);
  auto* t_base = tag->add_subcommand("baseline", "Rule cascade over AB1AB2 candidates");
  lang_opts(t_base);
  t_base->add_option("--corpus", corpus, "Sentences or tagged corpus")->required()->check(CLI::ExistingFile);
  t_base->add_option("--stages", stages, "none or a comma list of parsable, sim, scale");
  t_base->add_option("--alpha", alpha, "Cosine threshold of the similarity stage");
  t_base->add_option("--emb", emb_path, "Embeddings (binary or .csv)")->check(CLI::ExistingFile);
  t_base->add_option("--scale", scale_path, "Scale file for the scale stage")->check(CLI::ExistingFile);
  t_base->add_option("--out", out_path, "Tagged output (default stdout)");
  auto* t_train = tag->add_subcommand("train", "Train the window tagger");
  lang_opts(t_train);
  t_train->add_option("--train", train_path, "Tagged training corpus")->required()->check(CLI::ExistingFile);
  t_train->add_option("--dev", dev_path, "Tagged dev corpus")->check(CLI::ExistingFile);
  t_train->add_option("--out", model_path, "Model JSON")->required();
  t_train->add_flag("--phonemes", phonemes, "Add phoneme features");
  t_train->add_option("--epochs", tp.max_epochs, "Maximum epochs");
  t_train->add_option("--patience", tp.patience, "Early-stopping patience");
  t_train->add_option("--lr", tp.learning_rate, "Learning rate");
  t_train->add_option("--seed", tp.seed, "Training seed");
  t_train->add_option("--emb-out", emb_out, "Also write the tagger's word vectors");
  auto* t_apply = tag->add_subcommand("apply", "Tag sentences with a trained model");
  t_apply->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  t_apply->add_option("--data", data, "Inventory directory");
  t_apply->add_option("--corpus", corpus, "Sentences or tagged corpus")->required()->check(CLI::ExistingFile);
  t_apply->add_option("--out", out_path, "Tagged output")->required();
  auto* t_eval = tag->add_subcommand("eval", "Score predicted tags against gold");
  t_eval->add_option("--pred", pred_path, "Predicted tagged corpus")->required()->check(CLI::ExistingFile);
  t_eval->add_option("--gold", gold_path, "Gold tagged corpus")->required()->check(CLI::ExistingFile);
  t_eval->add_option("--label", label, "Row label");
  t_eval->add_flag("--swap", swap, "Print the confusion matrix and in-context accuracy");
  t_eval->add_option("--json", json_path, "Write metrics JSON here");
  t_eval->add_option("--confusion", confusion_path, "Write the confusion matrix CSV here");

  // embed
  auto* embed = app.add_subcommand("embed", "Train and query word embeddings");
  embed->require_subcommand(1);
  eeo_skipgram_params sg;
  eeo_skipgram_defaults(&sg);
  std::string csv_path, w1, w2;
  std::size_t k = 10;
  auto* e_train = embed->add_subcommand("train", "Skip-gram with negative sampling");
  e_train->add_option("--corpus", corpus, "Sentences or tagged corpus")->required()->check(CLI::ExistingFile);
  e_train->add_option("--out", out_path, "Binary embedding file")->required();
  e_train->add_option("--csv", csv_path, "Also export CSV");
  e_train->add_option("--dim", sg.dim, "Vector size");
  e_train->add_option("--window", sg.window, "Context window");
  e_train->add_option("--negatives", sg.negatives, "Negative samples");
  e_train->add_option("--epochs", sg.epochs, "Epochs");
  e_train->add_option("--min-count", sg.min_count, "Minimum word count");
  e_train->add_option("--lr", sg.learning_rate, "Initial learning rate");
  e_train->add_option("--seed", sg.seed, "Seed");
  auto* e_cos = embed->add_subcommand("cosine", "Cosine similarity of two words");
  e_cos->add_option("--emb", emb_path, "Embeddings")->required()->check(CLI::ExistingFile);
  e_cos->add_option("w1", w1)->required();
  e_cos->add_option("w2", w2)->required();
  auto* e_nn = embed->add_subcommand("neighbors", "Nearest words by cosine");
  e_nn->add_option("--emb", emb_path, "Embeddings")->required()->check(CLI::ExistingFile);
  e_nn->add_option("word", w1)->required();
  e_nn->add_option("-k", k, "Number of neighbors");
  auto* e_exp = embed->add_subcommand("export", "Export embeddings as CSV");
  e_exp->add_option("--emb", emb_path, "Embeddings")->required()->check(CLI::ExistingFile);
  e_exp->add_option("--csv", csv_path, "CSV output")->required();

  // corpus tools
  auto* swap_cmd = app.add_subcommand("swap", "Swap B1/B2 in a share of EEs (B-fake/I-fake)");
  std::string catalog;
  double frac = 0.5;
  swap_cmd->add_option("--corpus", corpus, "Tagged corpus")->required()->check(CLI::ExistingFile);
  swap_cmd->add_option("--catalog", catalog, "EE keys, one per line")->check(CLI::ExistingFile);
  swap_cmd->add_option("--frac", frac, "Share of distinct EEs to swap")->check(CLI::Range(0.0, 1.0));
  swap_cmd->add_option("--seed", seed, "Seed");
  swap_cmd->add_option("--out", out_path, "Swapped tagged corpus")->required();

  auto* split_cmd = app.add_subcommand("split", "EE-disjoint train/dev/test corpus splits");
  std::string ratios = "0.91,0.045,0.045";
  int n_splits = 3;
  split_cmd->add_option("--corpus", corpus, "Tagged corpus")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--ratios", ratios, "train,dev,test");
  split_cmd->add_option("--splits", n_splits, "Independent splits")->check(CLI::PositiveNumber);
  split_cmd->add_option("--seed", seed, "Seed");
  split_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* overlap = app.add_subcommand("overlap", "Component-overlap counts of test EEs");
  std::string test_records;
  lang_opts(overlap);
  overlap->add_option("--train", records, "Training EE list")->required()->check(CLI::ExistingFile);
  overlap->add_option("--test", test_records, "Test EE list")->required()->check(CLI::ExistingFile);
  overlap->add_option("--format", format, "ee or cc");
  overlap->add_option("--corpus", corpus, "Corpus for bigram counts")->check(CLI::ExistingFile);

  auto* fixtures = app.add_subcommand("fixtures", "Write the synthetic test fixtures");
  fixtures->add_option("--data", data, "Inventory directory");
  fixtures->add_option("--seed", seed, "Seed");
  fixtures->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*parse) {
      g_stage = "parse";
      Profile p;
      open_profile(p, lang, data, mc_readings);
      for (const auto& t : tokens) {
        eeo_syllable s;
        const eeo_status st = eeo_parse_syllable(p.p, t.c_str(), &s);
        if (st == EEO_NO_PARSE) {
          std::printf("%s\tNOPARSE\n", t.c_str());
          continue;
        }
        check(st);
        std::printf("%s\t%s\t%s\t%s\n", t.c_str(), show(s.onset).c_str(), show(s.rhyme).c_str(),
                    show(s.tone).c_str());
      }
    } else if (*classify) {
      g_stage = "classify";
      nlohmann::json ov = nlohmann::json::object();
      if (classify_seed) ov["seed"] = *classify_seed;
      if (!k_grid.empty()) {
        nlohmann::json grid = nlohmann::json::array();
        for (const auto& v : split_commas(k_grid)) {
          if (v == "all") {
            grid.push_back("all");
            continue;
          }
          try {
            grid.push_back(std::stoll(v));
          } catch (const std::exception&) {
            std::fprintf(stderr, "eeorder classify: error: bad --k-grid entry '%s'\n", v.c_str());
            return kExitValidation;
          }
        }
        ov["k_grid"] = grid;
      }
      if (unique_pairs) ov["unique_pairs"] = true;
      if (reps > 0) ov["reps"] = reps;
      if (jobs > 0) ov["jobs"] = jobs;
      CString table;
      check(eeo_classify(config.c_str(), ov.dump().c_str(), opt(out_dir), &table.p));
      std::fputs(table.str().c_str(), stdout);
    } else if (*s_search) {
      g_stage = "scale search";
      Profile p;
      open_profile(p, lang, data, mc_readings);
      ScaleH s;
      double acc = 0.0;
      check(eeo_scale_search(p.p, records.c_str(), opt(format), seed, threads, &s.p, &acc));
      CString str;
      check(eeo_scale_to_string(s.p, &str.p));
      std::printf("%s\ntrain accuracy\t%.6f\n", str.str().c_str(), acc);
      if (!out_path.empty()) check(eeo_scale_save(s.p, out_path.c_str()));
    } else if (*s_induce) {
      g_stage = "scale induce";
      ScaleH s;
      check(eeo_scale_induce(tree_path.c_str(), &s.p));
      CString str;
      check(eeo_scale_to_string(s.p, &str.p));
      std::printf("%s\n", str.str().c_str());
      if (!out_path.empty()) check(eeo_scale_save(s.p, out_path.c_str()));
    } else if (*s_apply) {
      g_stage = "scale apply";
      Profile p;
      open_profile(p, lang, data, mc_readings);
      ScaleH s;
      check(eeo_scale_load(scale_path.c_str(), &s.p));
      double acc = 0.0;
      std::size_t n = 0;
      check(eeo_scale_apply(s.p, p.p, records.c_str(), opt(format), seed,
                            tie == "random-coin" ? EEO_TIE_RANDOM_COIN : EEO_TIE_EXPECTED_HALF, &acc, &n));
      std::printf("examples\t%zu\naccuracy\t%.6f\n", n, acc);
    } else if (*t_base) {
      g_stage = "tag baseline";
      Profile p;
      open_profile(p, lang, data, mc_readings);
      Embeddings e;
      ScaleH s;
      if (!emb_path.empty()) check(eeo_embeddings_load(emb_path.c_str(), &e.p));
      if (!scale_path.empty()) check(eeo_scale_load(scale_path.c_str(), &s.p));
      CString summary;
      const std::string tmp = out_path;
      check(eeo_tag_baseline(p.p, corpus.c_str(), e.p, s.p, stages.c_str(), alpha, opt(tmp), &summary.p));
      std::fprintf(out_path.empty() ? stdout : stderr, "%s\n", summary.str().c_str());
    } else if (*t_train) {
      g_stage = "tag train";
      tp.phoneme_features = phonemes ? 1 : 0;
      Profile p;
      if (phonemes) open_profile(p, lang, data, mc_readings);
      Tagger t;
      check(eeo_tagger_train(train_path.c_str(), opt(dev_path), &tp, p.p, &t.p));
      check(eeo_tagger_save(t.p, model_path.c_str()));
      if (!emb_out.empty()) {
        Embeddings e;
        check(eeo_tagger_embeddings(t.p, &e.p));
        check(eeo_embeddings_save(e.p, emb_out.c_str()));
      }
      std::printf("saved\t%s\n", model_path.c_str());
    } else if (*t_apply) {
      g_stage = "tag apply";
      Tagger t;
      check(eeo_tagger_load(model_path.c_str(), opt(data), &t.p));
      CString summary;
      check(eeo_tagger_apply(t.p, corpus.c_str(), out_path.c_str(), &summary.p));
      std::printf("%s\n", summary.str().c_str());
    } else if (*t_eval) {
      g_stage = "tag eval";
      CString json, table, confusion;
      check(eeo_tag_eval(pred_path.c_str(), gold_path.c_str(), label.c_str(), &json.p, &table.p,
                         &confusion.p));
      std::fputs(table.str().c_str(), stdout);
      if (swap) {
        std::printf("\n%s", confusion.str().c_str());
        const auto j = nlohmann::json::parse(json.str());
        if (j.contains("in_context_accuracy"))
          std::printf("in-context accuracy\t%.2f%%\n", 100.0 * j["in_context_accuracy"].get<double>());
        else
          std::printf("in-context accuracy\tundefined (no fake spans)\n");
      }
      if (!json_path.empty()) write_or_print(json_path, json.str() + "\n");
      if (!confusion_path.empty()) write_or_print(confusion_path, confusion.str());
    } else if (*e_train) {
      g_stage = "embed train";
      Embeddings e;
      check(eeo_embeddings_train(corpus.c_str(), &sg, &e.p));
      check(eeo_embeddings_save(e.p, out_path.c_str()));
      if (!csv_path.empty()) check(eeo_embeddings_export_csv(e.p, csv_path.c_str()));
      std::size_t v = 0, d = 0;
      check(eeo_embeddings_size(e.p, &v, &d));
      std::printf("vocab\t%zu\ndim\t%zu\nmode\tsingle-worker\n", v, d);
    } else if (*e_cos) {
      g_stage = "embed cosine";
      Embeddings e;
      check(eeo_embeddings_load(emb_path.c_str(), &e.p));
      double c = 0.0;
      check(eeo_embeddings_cosine(e.p, w1.c_str(), w2.c_str(), &c));
      std::printf("%.6f\n", c);
    } else if (*e_nn) {
      g_stage = "embed neighbors";
      Embeddings e;
      check(eeo_embeddings_load(emb_path.c_str(), &e.p));
      CString out;
      check(eeo_embeddings_neighbors(e.p, w1.c_str(), k, &out.p));
      std::fputs(out.str().c_str(), stdout);
    } else if (*e_exp) {
      g_stage = "embed export";
      Embeddings e;
      check(eeo_embeddings_load(emb_path.c_str(), &e.p));
      check(eeo_embeddings_export_csv(e.p, csv_path.c_str()));
    } else if (*swap_cmd) {
      g_stage = "swap";
      CString summary;
      check(eeo_swap_corpus(corpus.c_str(), opt(catalog), frac, seed, out_path.c_str(), &summary.p));
      const auto j = nlohmann::json::parse(summary.str());
      std::printf("swapped\t%zu\nkept\t%zu\n", j["swapped"].get<std::size_t>(), j["kept"].get<std::size_t>());
    } else if (*split_cmd) {
      g_stage = "split";
      const auto r = split_commas(ratios);
      double tr = 0, dv = 0, te = 0;
      try {
        if (r.size() != 3) throw std::invalid_argument("count");
        tr = std::stod(r[0]);
        dv = std::stod(r[1]);
        te = std::stod(r[2]);
      } catch (const std::exception&) {
        std::fprintf(stderr, "eeorder split: error: --ratios needs three numbers\n");
        return kExitValidation;
      }
      CString summary;
      check(eeo_split_corpus(corpus.c_str(), tr, dv, te, n_splits, seed, out_dir.c_str(), &summary.p));
      std::printf("%s\n", nlohmann::json::parse(summary.str()).dump(2).c_str());
    } else if (*overlap) {
      g_stage = "overlap";
      Profile p;
      open_profile(p, lang, data, mc_readings);
      CString report;
      check(eeo_overlap(p.p, records.c_str(), test_records.c_str(), opt(format), opt(corpus), &report.p));
      std::fputs(report.str().c_str(), stdout);
    } else if (*fixtures) {
      g_stage = "fixtures";
      CString listing;
      check(eeo_fixtures(opt(data), seed, out_dir.c_str(), &listing.p));
      std::fputs(listing.str().c_str(), stdout);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
