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

#include "doctest.h"
#include "helpers.hpp"

#include "eeorder/error.hpp"
#include "eeorder/experiment.hpp"
#include "eeorder/fixtures.hpp"
#include "eeorder/text.hpp"

using namespace eeorder;
using eeorder::test::hmong;

namespace {

const std::filesystem::path& fixture_dir() {
  static const auto dir = [] {
    auto d = eeorder::test::scratch("experiment");
    fixtures::write_all(d, hmong(), 7);
    return d;
  }();
  return dir;
}

nlohmann::json base_config() {
  return {{"language", "hmong"}, {"seed", 3}, {"records", "planted_records.tsv"}};
}

}  // namespace

TEST_CASE("planted fixture config reaches accuracy 1.0") {
  const auto file = load_experiment_file(fixture_dir() / "planted_rules_config.json");
  const auto results = run_experiment(file.config, file.inputs);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    INFO(to_string(r.row.classifier));
    CHECK(r.mean == 1.0);
  }
  CHECK(results[0].row.classifier == ClassifierKind::kRules);
  REQUIRE(results[1].model.has_value());
  // The tree learned on planted data induces a scale consistent with the plant.
  const Scale planted = Scale::load(fixture_dir() / "planted.scale");
  const Scale induced = induce_scale_from_bundle(*results[1].model);
  REQUIRE(induced.groups().size() >= 2);
  CHECK(planted.rank(induced.groups().front()[0]) < planted.rank(induced.groups().back()[0]));
}

TEST_CASE("config validation") {
  auto j = base_config();
  j.erase("seed");
  j["rows"] = {{{"classifier", "rules"}}};
  CHECK_THROWS_AS(parse_experiment_json(j, fixture_dir()), Error);
  j = base_config();
  CHECK_THROWS_AS(parse_experiment_json(j, fixture_dir()), Error);  // no rows
  j["rows"] = {{{"classifier", "perceptron"}}};
  CHECK_THROWS_AS(parse_experiment_json(j, fixture_dir()), Error);
  j = base_config();
  j["records"] = "missing.tsv";
  j["rows"] = {{{"classifier", "rules"}}};
  CHECK_THROWS_AS(parse_experiment_json(j, fixture_dir()), Error);
}

TEST_CASE("matrix configs expand to one row per classifier setting") {
  auto j = base_config();
  j["matrix"] = {{"classifiers", {"rules", "tree", "svm"}}, {"features", {"focal", "all"}}};
  j["split"] = {{"repetitions", 1}};
  j["scale"] = "planted.scale";
  const auto f = parse_experiment_json(j, fixture_dir());
  REQUIRE(f.config.rows.size() == 5);
  CHECK(f.config.rows[0].classifier == ClassifierKind::kRules);
  CHECK(f.config.rows[1].classifier == ClassifierKind::kTree);
  CHECK(f.config.rows[1].features == FeatureSet::kFocal);
  CHECK(f.config.rows[2].features == FeatureSet::kAll);
  CHECK(f.config.rows[3].classifier == ClassifierKind::kRbfSvm);
  const auto results = run_experiment(f.config, f.inputs);
  const auto table = report_table(results);
  CHECK(text::split(table, '\n').size() >= 7);
  const auto csv = report_csv(results);
  CHECK(csv.rfind("language,", 0) == 0);
  const auto again = run_experiment(f.config, f.inputs);
  for (std::size_t i = 0; i < results.size(); ++i) CHECK(results[i].accuracies == again[i].accuracies);
  CHECK(report_json(f.config, results).at("rows").size() == 5);
}

TEST_CASE("unique-pair mode averages over the requested subsets") {
  auto j = base_config();
  j["rows"] = {{{"classifier", "tree"}, {"features", "focal"}}};
  j["unique_pairs"] = true;
  j["reps"] = 4;
  const auto f = parse_experiment_json(j, fixture_dir());
  const auto r = run_experiment(f.config, f.inputs)[0];
  CHECK(r.mode == "unique-pairs");
  CHECK(r.runs == 4);
  CHECK(r.accuracies.size() == 4);
  double mean = 0;
  for (double a : r.accuracies) mean += a / 4;
  CHECK(r.mean == doctest::Approx(mean));
}
