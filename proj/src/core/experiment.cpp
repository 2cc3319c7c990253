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

#include "eeorder/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>

#include "eeorder/error.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::kRules: return "rules";
    case ClassifierKind::kTree: return "tree";
    case ClassifierKind::kLinearSvm: return "linear-svm";
    case ClassifierKind::kRbfSvm: return "rbf-svm";
  }
  return "?";
}

ClassifierKind classifier_kind_from_string(std::string_view s) {
  if (s == "rules") return ClassifierKind::kRules;
  if (s == "tree" || s == "dt") return ClassifierKind::kTree;
  if (s == "linear-svm" || s == "linear") return ClassifierKind::kLinearSvm;
  if (s == "rbf-svm" || s == "svm" || s == "rbf") return ClassifierKind::kRbfSvm;
  fail(ErrorCode::kInvalidArgument, "unknown classifier '" + std::string(s) + "'");
}

nlohmann::json tree_bundle(const DecisionTree& tree, const FeatureSpace& space,
                           PhonemeClass focal) {
  return {{"tree", tree.to_json()}, {"space", space.to_json()},
          {"focal", std::string(to_string(focal))}};
}

Scale induce_scale_from_bundle(const nlohmann::json& bundle) {
  try {
    const DecisionTree tree = DecisionTree::from_json(bundle.at("tree"));
    const FeatureSpace space = FeatureSpace::from_json(bundle.at("space"));
    const PhonemeClass focal =
        phoneme_class_from_string(bundle.value("focal", std::string("tone")));
    return induce_scale_from_tree(tree, space, focal);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("tree bundle: ") + e.what());
  }
}

namespace {

bool uses_embeddings(FeatureSet s) {
  return s == FeatureSet::kAllEmbeddings || s == FeatureSet::kEmbeddings;
}

Trainer make_trainer(const ExperimentConfig& config, ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kTree:
      return [params = config.tree, seed = config.seed](const EncodedSet& d) -> Predictor {
        auto tree = std::make_shared<DecisionTree>(train_tree(d, params, seed));
        return [tree](const SparseVec& x) { return tree->predict(x); };
      };
    case ClassifierKind::kLinearSvm:
      return [params = config.linear](const EncodedSet& d) -> Predictor {
        auto m = std::make_shared<LinearModel>(train_linear_svm(d, params));
        return [m](const SparseVec& x) { return m->predict(x); };
      };
    case ClassifierKind::kRbfSvm:
      return [params = config.rbf](const EncodedSet& d) -> Predictor {
        auto m = std::make_shared<KernelModel>(train_rbf_svm(d, params));
        return [m](const SparseVec& x) { return m->predict(x); };
      };
    case ClassifierKind::kRules: break;
  }
  fail(ErrorCode::kInvalidArgument, "rules are not a trainable classifier");
}

EncodedSet concat(const EncodedSet& a, const EncodedSet& b) {
  EncodedSet out = a;
  out.x.insert(out.x.end(), b.x.begin(), b.x.end());
  out.y.insert(out.y.end(), b.y.begin(), b.y.end());
  return out;
}

// Feature scores fitted on `fit` only: chi-square for one-hot spaces, linear
// SVM |w| once dense embedding values are present.
std::vector<double> selection_scores(const ExperimentConfig& config, const EncodedSet& fit,
                                     bool dense) {
  if (!dense) return chi2_scores(fit.x, fit.y, fit.dim);
  const LinearModel m = train_linear_svm(fit, config.linear);
  std::vector<double> s(m.weights.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::abs(m.weights[i]);
  return s;
}

struct RunOutcome {
  double accuracy = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string scale;
  std::optional<std::array<double, kNumFeatureTypes>> importance;
  std::optional<nlohmann::json> model;
  std::vector<std::string> notes;
};

RunOutcome run_once(const ExperimentConfig& config, const ExperimentInputs& inputs,
                    const ExperimentRow& row, const std::vector<PairRecord>& records,
                    std::uint64_t seed) {
  SplitSpec spec = config.split;
  spec.seed = seed;
  const DatasetSplit split = split_then_augment(records, spec);
  RunOutcome out;
  out.n = split.train.size() + split.dev.size() + split.test.size();
  const PhonemeClass focal = inputs.profile.focal;

  if (row.classifier == ClassifierKind::kRules) {
    Scale scale;
    if (inputs.scale) {
      scale = *inputs.scale;
    } else {
      LabeledDataset fit = split.train;
      fit.insert(fit.end(), split.dev.begin(), split.dev.end());
      scale = search_best_scale(
          fit, observed_symbols(fit, inputs.profile.inventory.symbols(focal), focal), focal)
          .scale;
    }
    TiePolicy tie = config.tie;
    if (tie.mode == TiePolicy::Mode::kRandomCoin) tie.seed = mix_seed(seed, 7);
    out.accuracy = rule_accuracy(scale, split.test, tie);
    out.scale = scale.to_string();
    return out;
  }

  const EmbeddingTable* emb = nullptr;
  if (uses_embeddings(row.features)) {
    if (!inputs.embeddings)
      fail(ErrorCode::kInvalidArgument,
           "feature set '" + std::string(to_string(row.features)) + "' needs embeddings");
    emb = inputs.embeddings.get();
  }
  const FeatureSpace space = FeatureSpace::build(inputs.profile.inventory, row.features, focal,
                                                 emb ? emb->dim() : 0);
  const EncodedSet train = encode_all(split.train, space, emb);
  const EncodedSet dev = encode_all(split.dev, space, emb);
  const EncodedSet test = encode_all(split.test, space, emb);
  const bool dense = space.has_embeddings();
  const Trainer trainer = make_trainer(config, row.classifier);

  out.k = choose_k(config.k_grid, selection_scores(config, train, dense), train, dev, trainer);
  const EncodedSet fit = concat(train, dev);
  const FeatureMask mask = select_top_k(selection_scores(config, fit, dense), out.k);
  const EncodedSet fit_m = apply_mask(fit, mask);
  const EncodedSet test_m = apply_mask(test, mask);
  const FeatureSpace space_m = apply_mask(space, mask);

  switch (row.classifier) {
    case ClassifierKind::kTree: {
      const DecisionTree tree = train_tree(fit_m, config.tree, config.seed);
      out.accuracy = accuracy([&](const SparseVec& x) { return tree.predict(x); }, test_m);
      out.model = tree_bundle(tree, space_m, focal);
      break;
    }
    case ClassifierKind::kLinearSvm: {
      const LinearModel m = train_linear_svm(fit_m, config.linear);
      out.accuracy = accuracy([&](const SparseVec& x) { return m.predict(x); }, test_m);
      out.importance =
          importance_proportions(linear_importance(m.weights, space_m), config.importance_k);
      break;
    }
    case ClassifierKind::kRbfSvm: {
      const KernelModel m = train_rbf_svm(fit_m, config.rbf);
      out.accuracy = accuracy([&](const SparseVec& x) { return m.predict(x); }, test_m);
      if (!m.converged)
        out.notes.push_back("SMO stopped at the iteration cap after " +
                            std::to_string(m.iterations) + " iterations");
      break;
    }
    case ClassifierKind::kRules: break;
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment_row(const ExperimentConfig& config,
                                    const ExperimentInputs& inputs,
                                    const ExperimentRow& row) {
  config.split.validate();
  if (inputs.records.empty()) fail(ErrorCode::kInvalidArgument, "no records to classify");
  ExperimentResult res;
  res.language = inputs.profile.language;
  res.row = row;
  if (uses_embeddings(row.features)) res.embedding_label = inputs.embedding_label;
  res.mode = config.unique_pairs ? "unique-pairs" : "split";

  std::vector<std::vector<PairRecord>> subsets;
  std::vector<std::uint64_t> seeds;
  if (config.unique_pairs) {
    subsets = sample_unique_pairs(inputs.records, mix_seed(config.seed, 0x0d1), config.reps);
    for (std::size_t r = 0; r < subsets.size(); ++r) seeds.push_back(mix_seed(config.seed, 100 + r));
  } else {
    for (int r = 0; r < std::max(1, config.split.repetitions); ++r)
      seeds.push_back(r == 0 ? config.seed : mix_seed(config.seed, 100 + r));
  }

  double n_sum = 0.0;
  std::optional<std::array<double, kNumFeatureTypes>> imp_sum;
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    const auto& records = config.unique_pairs ? subsets[r] : inputs.records;
    RunOutcome o = run_once(config, inputs, row, records, seeds[r]);
    res.accuracies.push_back(o.accuracy);
    n_sum += static_cast<double>(o.n);
    if (o.k) res.chosen_k.push_back(o.k);
    if (!o.scale.empty()) res.scale = o.scale;
    if (o.model) res.model = std::move(o.model);
    if (o.importance) {
      if (!imp_sum) imp_sum = std::array<double, kNumFeatureTypes>{};
      for (std::size_t t = 0; t < kNumFeatureTypes; ++t) (*imp_sum)[t] += (*o.importance)[t];
    }
    for (auto& note : o.notes) res.notes.push_back("run " + std::to_string(r) + ": " + note);
  }
  res.runs = res.accuracies.size();
  const double runs = static_cast<double>(res.runs);
  res.n = static_cast<std::size_t>(std::llround(n_sum / runs));
  res.mean = std::accumulate(res.accuracies.begin(), res.accuracies.end(), 0.0) / runs;
  double var = 0.0;
  for (double a : res.accuracies) var += (a - res.mean) * (a - res.mean);
  res.stddev = res.runs > 1 ? std::sqrt(var / (runs - 1.0)) : 0.0;
  if (imp_sum) {
    for (double& v : *imp_sum) v /= runs;
    res.importance = imp_sum;
  }
  return res;
}

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& config,
                                             const ExperimentInputs& inputs) {
  const std::size_t n = config.rows.size();
  std::vector<ExperimentResult> out(n);
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = run_experiment_row(config, inputs, config.rows[i]);
    return out;
  }
  // Rows are independent; each is deterministic on its own.
  for (std::size_t start = 0; start < n; start += jobs) {
    std::vector<std::future<ExperimentResult>> batch;
    for (std::size_t i = start; i < std::min(n, start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, [&, i] {
        return run_experiment_row(config, inputs, config.rows[i]);
      }));
    for (std::size_t i = 0; i < batch.size(); ++i) out[start + i] = batch[i].get();
  }
  return out;
}

namespace {
std::string fmt(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string features_label(const ExperimentResult& r) {
  std::string s(to_string(r.row.features));
  if (!r.embedding_label.empty()) s += " [" + r.embedding_label + "]";
  return s;
}

std::string k_label(const ExperimentResult& r) {
  std::vector<std::string> ks;
  for (std::size_t k : r.chosen_k) ks.push_back(std::to_string(k));
  return text::join(ks, ";");
}
}  // namespace

std::string report_csv(const std::vector<ExperimentResult>& results) {
  std::string out =
      "language,classifier,features,embeddings,mode,runs,n,accuracy,stddev,k,scale,"
      "imp_tone,imp_rhyme,imp_onset,imp_embedding\n";
  for (const auto& r : results) {
    std::vector<std::string> cells{r.language, std::string(to_string(r.row.classifier)),
                                   std::string(to_string(r.row.features)), r.embedding_label,
                                   r.mode, std::to_string(r.runs), std::to_string(r.n),
                                   fmt(r.mean, 6), fmt(r.stddev, 6), k_label(r),
                                   "\"" + r.scale + "\""};
    for (std::size_t t = 0; t < kNumFeatureTypes; ++t)
      cells.push_back(r.importance ? fmt((*r.importance)[t], 4) : "");
    out += text::join(cells, ",") + "\n";
  }
  return out;
}

std::string report_table(const std::vector<ExperimentResult>& results) {
  std::vector<std::vector<std::string>> rows{
      {"language", "classifier", "features", "mode", "runs", "N", "accuracy", "k"}};
  for (const auto& r : results)
    rows.push_back({r.language, std::string(to_string(r.row.classifier)), features_label(r),
                    r.mode, std::to_string(r.runs), std::to_string(r.n),
                    fmt(100.0 * r.mean, 1) + "%" +
                        (r.runs > 1 ? " ±" + fmt(100.0 * r.stddev, 1) : std::string()),
                    k_label(r)});
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      line += rows[i][c];
      if (c + 1 < rows[i].size()) line += std::string(width[c] - rows[i][c].size() + 2, ' ');
    }
    out += line + "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  for (const auto& r : results) {
    if (!r.scale.empty())
      out += "scale (" + std::string(to_string(r.row.classifier)) + "): " + r.scale + "\n";
    if (r.importance)
      out += "importance top-k (" + features_label(r) + "): tone " + fmt((*r.importance)[0], 3) +
             ", rhyme " + fmt((*r.importance)[1], 3) + ", onset " + fmt((*r.importance)[2], 3) +
             ", embedding " + fmt((*r.importance)[3], 3) + "\n";
    for (const auto& note : r.notes) out += "note: " + note + "\n";
  }
  return out;
}

nlohmann::json report_json(const ExperimentConfig& config,
                           const std::vector<ExperimentResult>& results) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json j{{"language", r.language},
                     {"classifier", to_string(r.row.classifier)},
                     {"features", to_string(r.row.features)},
                     {"embeddings", r.embedding_label},
                     {"mode", r.mode},
                     {"runs", r.runs},
                     {"n", r.n},
                     {"accuracies", r.accuracies},
                     {"mean", r.mean},
                     {"stddev", r.stddev},
                     {"k", r.chosen_k},
                     {"notes", r.notes}};
    if (!r.scale.empty()) j["scale"] = r.scale;
    if (r.importance) j["importance"] = *r.importance;
    rows.push_back(std::move(j));
  }
  return {{"toolkit", "eeorder"}, {"seed", config.seed}, {"mode", "single-worker"}, {"rows", rows}};
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::size_t k_value(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "all") return kAllFeatures;
    fail(ErrorCode::kInvalidArgument, "k_grid entries are integers or \"all\"");
  }
  const auto k = v.get<long long>();
  if (k <= 0) fail(ErrorCode::kInvalidArgument, "k_grid entries must be positive");
  return static_cast<std::size_t>(k);
}

}  // namespace

ExperimentFile parse_experiment_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir) {
  try {
    ExperimentFile f;
    f.echo = j;
    ExperimentConfig& c = f.config;
    ExperimentInputs& in = f.inputs;
    if (!j.contains("seed")) fail(ErrorCode::kInvalidArgument, "config: seed is mandatory");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("split")) {
      const auto& s = j.at("split");
      c.split.train_frac = s.value("train", c.split.train_frac);
      c.split.dev_frac = s.value("dev", c.split.dev_frac);
      c.split.test_frac = s.value("test", c.split.test_frac);
      c.split.repetitions = s.value("repetitions", c.split.repetitions);
    }
    c.split.seed = c.seed;
    c.split.validate();
    if (j.contains("k_grid")) {
      c.k_grid.clear();
      for (const auto& v : j.at("k_grid")) c.k_grid.push_back(k_value(v));
    }
    c.unique_pairs = j.value("unique_pairs", false);
    c.reps = j.value("reps", 10);
    if (j.contains("tree")) {
      const auto& t = j.at("tree");
      c.tree.max_depth = t.value("max_depth", c.tree.max_depth);
      c.tree.min_samples_leaf = t.value("min_samples_leaf", c.tree.min_samples_leaf);
      c.tree.min_impurity_decrease = t.value("min_impurity_decrease", c.tree.min_impurity_decrease);
    }
    if (j.contains("linear_svm")) {
      const auto& t = j.at("linear_svm");
      c.linear.lambda = t.value("lambda", c.linear.lambda);
      c.linear.epochs = t.value("epochs", c.linear.epochs);
    }
    c.linear.seed = mix_seed(c.seed, 0x11);
    if (j.contains("rbf_svm")) {
      const auto& t = j.at("rbf_svm");
      c.rbf.c = t.value("c", c.rbf.c);
      c.rbf.gamma = t.value("gamma", c.rbf.gamma);
      c.rbf.tol = t.value("tol", c.rbf.tol);
      c.rbf.max_iter = t.value("max_iter", c.rbf.max_iter);
      c.rbf.cache_mb = t.value("cache_mb", c.rbf.cache_mb);
    }
    const std::string tie = j.value("tie_policy", std::string("expected-half"));
    if (tie == "expected-half") c.tie = TiePolicy::expected_half();
    else if (tie == "random-coin") c.tie = TiePolicy::random_coin(c.seed);
    else fail(ErrorCode::kInvalidArgument, "config: unknown tie_policy '" + tie + "'");
    c.importance_k = j.value("importance_k", c.importance_k);
    c.jobs = j.value("jobs", 1u);

    if (j.contains("rows")) {
      for (const auto& r : j.at("rows"))
        c.rows.push_back({classifier_kind_from_string(r.at("classifier").get<std::string>()),
                          feature_set_from_string(r.value("features", std::string("focal")))});
    }
    if (j.contains("matrix")) {
      const auto& m = j.at("matrix");
      for (const auto& cl : m.at("classifiers"))
        for (const auto& fs : m.at("features")) {
          const auto kind = classifier_kind_from_string(cl.get<std::string>());
          const auto set = feature_set_from_string(fs.get<std::string>());
          // Rules ignore the feature set; emit them once.
          if (kind == ClassifierKind::kRules &&
              std::any_of(c.rows.begin(), c.rows.end(),
                          [](const ExperimentRow& r) { return r.classifier == ClassifierKind::kRules; }))
            continue;
          c.rows.push_back({kind, kind == ClassifierKind::kRules ? FeatureSet::kFocal : set});
        }
    }
    if (c.rows.empty()) fail(ErrorCode::kInvalidArgument, "config: no rows requested");

    const std::string language = j.at("language").get<std::string>();
    const std::string format = j.value("format", std::string(language == "mc" ? "cc" : "ee"));
    const std::filesystem::path data_dir =
        j.contains("data_dir") ? resolve(base_dir, j.at("data_dir").get<std::string>())
                               : default_data_dir();
    const std::filesystem::path records = resolve(base_dir, j.at("records").get<std::string>());
    std::optional<MCLexicon> lexicon;
    if (language == "mc") {
      if (!j.contains("mc_readings"))
        fail(ErrorCode::kInvalidArgument, "config: language mc needs mc_readings");
      lexicon = profile_from_mc_readings(
          load_mc_readings(resolve(base_dir, j.at("mc_readings").get<std::string>())));
      in.profile = lexicon->profile;
    } else {
      in.profile = load_profile(language, data_dir);
    }
    if (format == "ee") in.records = load_ee_list(records, in.profile).records;
    else if (format == "cc")
      in.records = load_cc_list(records, in.profile, lexicon ? &*lexicon : nullptr).records;
    else fail(ErrorCode::kInvalidArgument, "config: format is 'ee' or 'cc'");

    if (j.contains("scale")) in.scale = Scale::load(resolve(base_dir, j.at("scale").get<std::string>()));
    if (j.contains("embeddings")) {
      const auto path = resolve(base_dir, j.at("embeddings").get<std::string>());
      in.embeddings = std::make_shared<EmbeddingTable>(
          path.extension() == ".csv" ? import_csv(path) : load_embeddings(path));
    }
    in.embedding_label = j.value("embedding_label", std::string("skipgram"));
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("config: ") + e.what());
  }
}

ExperimentFile load_experiment_file(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  return parse_experiment_json(j, path.has_parent_path() ? path.parent_path() : ".");
}

}  // namespace eeorder
