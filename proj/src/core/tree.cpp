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

#include "eeorder/tree.hpp"

#include <algorithm>
#include <numeric>

#include "eeorder/error.hpp"

namespace eeorder {

double gini(std::size_t attested, std::size_t unattested) {
  const double n = static_cast<double>(attested + unattested);
  if (n == 0.0) return 0.0;
  const double p = static_cast<double>(attested) / n;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t dim, TreeParams params)
    : nodes_(std::move(nodes)), dim_(dim), params_(params) {
  if (nodes_.empty()) fail(ErrorCode::kInvalidArgument, "tree has no nodes");
  const int n = static_cast<int>(nodes_.size());
  for (const TreeNode& node : nodes_) {
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= dim_ || node.no_child <= 0 ||
        node.yes_child <= 0 || node.no_child >= n || node.yes_child >= n)
      fail(ErrorCode::kFormat, "tree node refers outside the tree");
  }
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  // Children always follow their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].is_leaf()) continue;
    d[nodes_[i].no_child] = d[i] + 1;
    d[nodes_[i].yes_child] = d[i] + 1;
  }
  return best;
}

namespace {
double value_at(const SparseVec& x, std::size_t index) {
  for (const SparseEntry& e : x.entries)
    if (e.index == index) return e.value;
  return 0.0;
}
}  // namespace

Label DecisionTree::predict(const SparseVec& x) const {
  if (!x.entries.empty() && x.entries.back().index >= dim_)
    fail(ErrorCode::kInvalidArgument, "feature index " + std::to_string(x.entries.back().index) +
                                          " outside the tree's " + std::to_string(dim_) + " dims");
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const TreeNode& n = nodes_[at];
    at = value_at(x, static_cast<std::size_t>(n.feature)) > n.threshold ? n.yes_child
                                                                        : n.no_child;
  }
  return nodes_[at].majority();
}

std::vector<Label> DecisionTree::predict_many(std::span<const SparseVec> xs) const {
  std::vector<Label> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x));
  return out;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : nodes_)
    nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold},
                     {"no", n.no_child}, {"yes", n.yes_child},
                     {"attested", n.attested}, {"unattested", n.unattested}});
  return {{"dim", dim_},
          {"params", {{"max_depth", params_.max_depth},
                      {"min_samples_leaf", params_.min_samples_leaf},
                      {"min_impurity_decrease", params_.min_impurity_decrease}}},
          {"nodes", nodes}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  try {
    std::vector<TreeNode> nodes;
    for (const auto& n : j.at("nodes"))
      nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                       n.at("no").get<int>(), n.at("yes").get<int>(),
                       n.at("attested").get<std::size_t>(),
                       n.at("unattested").get<std::size_t>()});
    const auto& p = j.at("params");
    TreeParams params{p.at("max_depth").get<std::size_t>(),
                      p.at("min_samples_leaf").get<std::size_t>(),
                      p.at("min_impurity_decrease").get<double>()};
    return DecisionTree(std::move(nodes), j.at("dim").get<std::size_t>(), params);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("tree json: ") + e.what());
  }
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.5;
  double gain = 0.0;
};

class Builder {
 public:
  Builder(const EncodedSet& data, const TreeParams& params)
      : data_(data), params_(params), binary_(data.dim, true) {
    for (const auto& x : data.x)
      for (const SparseEntry& e : x.entries) {
        if (e.index >= data.dim) fail(ErrorCode::kInvalidArgument, "feature index out of range");
        if (e.value != 0.0 && e.value != 1.0) binary_[e.index] = false;
      }
    if (std::find(binary_.begin(), binary_.end(), false) != binary_.end())
      dense_ = to_dense(data.x, data.dim);
  }

  std::vector<TreeNode> run() {
    std::vector<std::size_t> all(data_.size());
    std::iota(all.begin(), all.end(), 0);
    nodes_.emplace_back();
    grow(0, all, 0);
    return std::move(nodes_);
  }

 private:
  bool attested(std::size_t i) const { return data_.y[i] == Label::kAttested; }

  void grow(std::size_t at, const std::vector<std::size_t>& idx, std::size_t depth) {
    std::size_t a = 0;
    for (std::size_t i : idx) a += attested(i) ? 1 : 0;
    const std::size_t u = idx.size() - a;
    nodes_[at].attested = a;
    nodes_[at].unattested = u;
    if (a == 0 || u == 0 || depth >= params_.max_depth ||
        idx.size() < 2 * std::max<std::size_t>(1, params_.min_samples_leaf))
      return;
    const Split s = best_split(idx, a, u);
    if (s.feature < 0) return;

    std::vector<std::size_t> no, yes;
    for (std::size_t i : idx)
      (feature_value(i, static_cast<std::size_t>(s.feature)) > s.threshold ? yes : no).push_back(i);
    nodes_[at].feature = s.feature;
    nodes_[at].threshold = s.threshold;
    const int no_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int yes_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[at].no_child = no_id;
    nodes_[at].yes_child = yes_id;
    grow(static_cast<std::size_t>(no_id), no, depth + 1);
    grow(static_cast<std::size_t>(yes_id), yes, depth + 1);
  }

  double feature_value(std::size_t i, std::size_t f) const {
    return binary_[f] && dense_.rows == 0 ? value_at(data_.x[i], f) : dense_.row(i)[f];
  }

  // Returns true when (yes_a, yes_u) is an admissible split and beats `best`.
  bool consider(Split& best, int feature, double threshold, std::size_t a, std::size_t u,
                std::size_t ya, std::size_t yu) const {
    const std::size_t ny = ya + yu, n = a + u, nn = n - ny;
    const std::size_t leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    if (ny < leaf || nn < leaf) return false;
    const double fn = static_cast<double>(n);
    const double gain = gini(a, u) - static_cast<double>(ny) / fn * gini(ya, yu) -
                        static_cast<double>(nn) / fn * gini(a - ya, u - yu);
    const double weighted = fn / static_cast<double>(data_.size()) * gain;
    if (weighted < params_.min_impurity_decrease - 1e-12) return false;
    if (best.feature >= 0 && gain <= best.gain + 1e-12) return false;
    best = {feature, threshold, gain};
    return true;
  }

  Split best_split(const std::vector<std::size_t>& idx, std::size_t a, std::size_t u) const {
    const std::size_t dim = data_.dim;
    std::vector<std::size_t> on_a(dim, 0), on_u(dim, 0);
    for (std::size_t i : idx)
      for (const SparseEntry& e : data_.x[i].entries)
        if (binary_[e.index] && e.value > 0.5) (attested(i) ? on_a : on_u)[e.index] += 1;

    Split best;
    std::vector<std::pair<double, bool>> vals;
    for (std::size_t f = 0; f < dim; ++f) {
      if (binary_[f]) {
        consider(best, static_cast<int>(f), 0.5, a, u, on_a[f], on_u[f]);
        continue;
      }
      vals.clear();
      for (std::size_t i : idx) vals.emplace_back(dense_.row(i)[f], attested(i));
      std::sort(vals.begin(), vals.end(),
                [](const auto& p, const auto& q) { return p.first < q.first; });
      // Walk thresholds from high to low so "yes" (x > t) grows; collect
      // candidates in ascending threshold order for the tie rule.
      std::size_t ya = 0, yu = 0;
      std::vector<std::tuple<double, std::size_t, std::size_t>> cands;
      for (std::size_t k = vals.size(); k-- > 1;) {
        (vals[k].second ? ya : yu) += 1;
        if (vals[k].first > vals[k - 1].first)
          cands.emplace_back(0.5 * (vals[k].first + vals[k - 1].first), ya, yu);
      }
      for (auto it = cands.rbegin(); it != cands.rend(); ++it)
        consider(best, static_cast<int>(f), std::get<0>(*it), a, u, std::get<1>(*it),
                 std::get<2>(*it));
    }
    return best;
  }

  const EncodedSet& data_;
  TreeParams params_;
  std::vector<bool> binary_;
  DenseMatrix dense_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree train_tree(const EncodedSet& data, const TreeParams& params, std::uint64_t) {
  if (data.size() == 0) fail(ErrorCode::kInvalidArgument, "empty training data");
  if (data.x.size() != data.y.size())
    fail(ErrorCode::kInvalidArgument, "feature and label counts differ");
  if (params.max_depth == 0) fail(ErrorCode::kInvalidArgument, "max_depth must be positive");
  return DecisionTree(Builder(data, params).run(), data.dim, params);
}

}  // namespace eeorder
