// SPDX-License-Identifier: Apache-2.0

#include "cmhate/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cmhate/errors.hpp"
#include "cmhate/random.hpp"

namespace cmhate {
namespace {

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

// Column-major copy of the training matrix.
std::vector<std::vector<ColumnEntry>> build_columns(std::span<const SparseVector> x, std::size_t num_features) {
  std::vector<std::vector<ColumnEntry>> cols(num_features);
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (const auto& [c, v] : x[r].entries()) {
      if (c >= num_features) throw std::invalid_argument("feature column out of range");
      cols[c].push_back({static_cast<std::uint32_t>(r), v});
    }
  }
  return cols;
}

// Sum over both children of n_side * gini(side); lower is better.
double weighted_impurity(double lh, double ln, double rh, double rn) {
  auto part = [](double h, double n) {
    const double t = h + n;
    return t > 0.0 ? t - (h * h + n * n) / t : 0.0;
  };
  return part(lh, ln) + part(rh, rn);
}

struct SplitChoice {
  bool found = false;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

class TreeGrower {
 public:
  TreeGrower(std::span<const SparseVector> x, std::span<const Label> y,
             const std::vector<std::vector<ColumnEntry>>& columns, std::size_t max_features)
      : x_(x),
        y_(y),
        columns_(columns),
        max_features_(max_features),
        multiplicity_(x.size(), 0),
        feature_stamp_(columns.size(), 0) {}

  DecisionTree grow(std::span<const std::size_t> rows, Rng& rng) {
    DecisionTree tree;
    struct Pending {
      std::int32_t node;
      std::vector<std::size_t> rows;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end())});

    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      std::array<std::size_t, 2> votes{};
      for (auto r : job.rows) ++votes[label_index(y_[r])];
      tree.nodes[job.node].votes = votes;
      if (votes[0] == 0 || votes[1] == 0) continue;

      const SplitChoice split = best_split(job.rows, votes, rng);
      if (!split.found) continue;

      std::vector<std::size_t> left_rows;
      std::vector<std::size_t> right_rows;
      for (auto r : job.rows) {
        (x_[r].value_at(split.feature) > split.threshold ? right_rows : left_rows).push_back(r);
      }
      const auto left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[job.node];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, std::move(right_rows)});
      stack.push_back({left, std::move(left_rows)});
    }
    return tree;
  }

 private:
  SplitChoice best_split(const std::vector<std::size_t>& rows, const std::array<std::size_t, 2>& votes,
                         Rng& rng) {
    ++stamp_;
    present_.clear();
    for (auto r : rows) {
      if (multiplicity_[r]++ == 0) {
        for (const auto& e : x_[r].entries()) {
          if (feature_stamp_[e.first] != stamp_) {
            feature_stamp_[e.first] = stamp_;
            present_.push_back(e.first);
          }
        }
      }
    }

    // Drawing from all columns without replacement; a draw lands on a column
    // present in this node with probability (present left)/(columns left).
    // Absent columns are constant zero here and cannot split.
    SplitChoice best;
    const std::size_t total = columns_.size();
    std::size_t present_taken = 0;
    for (std::size_t visited = 0; visited < total; ++visited) {
      if (visited >= max_features_ && best.found) break;
      const std::size_t remaining_present = present_.size() - present_taken;
      if (remaining_present == 0) break;
      const auto r = static_cast<std::size_t>(rng.below(total - visited));
      if (r >= remaining_present) continue;
      std::swap(present_[present_taken], present_[present_taken + r]);
      evaluate(present_[present_taken], votes, best);
      ++present_taken;
    }

    for (auto r : rows) multiplicity_[r] = 0;
    return best;
  }

  void evaluate(std::uint32_t feature, const std::array<std::size_t, 2>& votes, SplitChoice& best) {
    gathered_.clear();
    for (const auto& e : columns_[feature]) {
      const auto m = multiplicity_[e.row];
      if (m > 0) gathered_.push_back({e.value, label_index(y_[e.row]), m});
    }
    std::sort(gathered_.begin(), gathered_.end(),
              [](const Item& a, const Item& b) { return a.value < b.value; });

    double nz_h = 0.0;
    double nz_n = 0.0;
    for (const auto& g : gathered_) (g.label == 0 ? nz_h : nz_n) += static_cast<double>(g.weight);
    const double total_h = static_cast<double>(votes[0]);
    const double total_n = static_cast<double>(votes[1]);

    // Left side starts with the rows where the feature is absent (value 0).
    double left_h = total_h - nz_h;
    double left_n = total_n - nz_n;
    double prev = 0.0;
    bool have_left = left_h + left_n > 0.0;
    for (std::size_t i = 0; i < gathered_.size(); ++i) {
      const double v = gathered_[i].value;
      if (have_left && v > prev) {
        double t = prev + (v - prev) / 2.0;
        if (!(t < v)) t = prev;
        const double imp = weighted_impurity(left_h, left_n, total_h - left_h, total_n - left_n);
        if (imp < best.impurity) best = {true, feature, t, imp};
      }
      (gathered_[i].label == 0 ? left_h : left_n) += static_cast<double>(gathered_[i].weight);
      prev = v;
      have_left = true;
    }
  }

  struct Item {
    double value;
    std::size_t label;
    std::uint32_t weight;
  };

  std::span<const SparseVector> x_;
  std::span<const Label> y_;
  const std::vector<std::vector<ColumnEntry>>& columns_;
  std::size_t max_features_;
  std::vector<std::uint32_t> multiplicity_;
  std::vector<std::uint64_t> feature_stamp_;
  std::uint64_t stamp_ = 0;
  std::vector<std::uint32_t> present_;
  std::vector<Item> gathered_;
};

void check_inputs(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                  std::size_t max_features) {
  if (x.size() != y.size()) throw std::invalid_argument("feature and label counts differ");
  if (max_features == 0 || max_features > num_features) {
    throw std::invalid_argument("max_features must lie in [1, num_features]");
  }
}

}  // namespace

std::size_t default_max_features(std::size_t num_features) noexcept {
  auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_features))));
  return std::max<std::size_t>(1, m);
}

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x.value_at(static_cast<std::uint32_t>(n.feature)) > n.threshold ? n.right
                                                                                                 : n.left);
  }
  return nodes[i];
}

Label DecisionTree::predict(const SparseVector& x) const {
  const auto& leaf = leaf_for(x);
  return decide(static_cast<double>(leaf.votes[0]), static_cast<double>(leaf.votes[1]));
}

DecisionTree grow_tree(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                       std::span<const std::size_t> rows, std::size_t max_features, std::uint64_t seed) {
  check_inputs(x, y, num_features, max_features);
  const auto columns = build_columns(x, num_features);
  TreeGrower grower(x, y, columns, max_features);
  Rng rng(seed);
  return grower.grow(rows, rng);
}

RFModel rf_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                 const RFParams& params) {
  const std::size_t max_features = params.max_features == 0 ? default_max_features(num_features)
                                                            : params.max_features;
  check_inputs(x, y, num_features, max_features);
  if (params.num_trees == 0) throw std::invalid_argument("num_trees must be positive");
  const bool has_hate = std::find(y.begin(), y.end(), Label::Hate) != y.end();
  const bool has_non_hate = std::find(y.begin(), y.end(), Label::NonHate) != y.end();
  if (!has_hate || !has_non_hate) throw SingleClassTrainingSet();

  const auto columns = build_columns(x, num_features);
  TreeGrower grower(x, y, columns, max_features);

  RFModel model;
  model.num_trees = params.num_trees;
  model.max_features = max_features;
  model.bootstrap = params.bootstrap;
  model.seed = params.seed;
  model.num_features = num_features;
  model.trees.reserve(params.num_trees);
  std::vector<std::size_t> rows(x.size());
  for (std::size_t t = 0; t < params.num_trees; ++t) {
    Rng rng(params.seed + t);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i] = params.bootstrap ? static_cast<std::size_t>(rng.below(rows.size())) : i;
    }
    model.trees.push_back(grower.grow(rows, rng));
  }
  return model;
}

Prediction rf_predict(const RFModel& model, const SparseVector& x) {
  Prediction p;
  for (const auto& tree : model.trees) p.scores[label_index(tree.predict(x))] += 1.0;
  p.label = decide(p.scores[0], p.scores[1]);
  return p;
}

}  // namespace cmhate
