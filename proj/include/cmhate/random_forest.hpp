// SPDX-License-Identifier: Apache-2.0
//
// Random forest of Gini-impurity decision trees grown on bootstrap resamples
// with a random feature subset per node. Sparse inputs: an absent feature
// has value 0, and a split sends "value > threshold" to the right child.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cmhate/naive_bayes.hpp"
#include "cmhate/sparse.hpp"

namespace cmhate {

struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Training samples (bootstrap multiplicity included) reaching this node,
  // by label index.
  std::array<std::size_t, 2> votes{};

  bool is_leaf() const noexcept { return left < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(const SparseVector& x) const;
  // Leaf majority; ties go to NonHate.
  Label predict(const SparseVector& x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct RFParams {
  std::size_t num_trees = 100;
  std::size_t max_features = 0;  // 0 -> ceil(sqrt(num_features))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct RFModel {
  std::vector<DecisionTree> trees;
  std::size_t num_trees = 0;
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  std::size_t num_features = 0;
};

std::size_t default_max_features(std::size_t num_features) noexcept;

// Grows one unpruned tree on `rows` (indices into x/y, repeats allowed).
// Nodes split until pure or until no sampled feature separates them. Each
// node visits max_features features drawn without replacement, continuing
// past that budget until one admits a split or none remain.
DecisionTree grow_tree(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                       std::span<const std::size_t> rows, std::size_t max_features, std::uint64_t seed);

// Tree i uses seed + i. Throws SingleClassTrainingSet; std::invalid_argument
// when max_features exceeds num_features.
RFModel rf_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                 const RFParams& params);

// Majority vote over trees; ties go to NonHate. scores = tree votes.
Prediction rf_predict(const RFModel& model, const SparseVector& x);

}  // namespace cmhate
