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

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "eeorder/datasets.hpp"
#include "eeorder/features.hpp"

namespace eeorder {

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_samples_leaf = 5;
  double min_impurity_decrease = 0.0;
};

// Internal nodes test x[feature] > threshold ("yes" branch). Leaves have
// feature == -1. Counts are training examples that reached the node.
struct TreeNode {
  int feature = -1;
  double threshold = 0.5;
  int no_child = -1;
  int yes_child = -1;
  std::size_t attested = 0;
  std::size_t unattested = 0;

  bool is_leaf() const { return feature < 0; }
  // Exact ties go to Attested.
  Label majority() const {
    return unattested > attested ? Label::kUnattested : Label::kAttested;
  }
};

double gini(std::size_t attested, std::size_t unattested);

class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::size_t dim, TreeParams params);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t dim() const { return dim_; }
  const TreeParams& params() const { return params_; }
  std::size_t depth() const;

  Label predict(const SparseVec& x) const;
  std::vector<Label> predict_many(std::span<const SparseVec> xs) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
  std::size_t dim_ = 0;
  TreeParams params_;
};

// Greedy CART with Gini impurity. A node is split when it is impure, above
// the depth limit, and some split leaves min_samples_leaf examples on both
// sides with a weighted impurity decrease >= min_impurity_decrease. Equal
// gains go to the lowest feature index, then the lowest threshold, so the
// seed never changes the result.
DecisionTree train_tree(const EncodedSet& data, const TreeParams& params,
                        std::uint64_t seed = 0);

}  // namespace eeorder
