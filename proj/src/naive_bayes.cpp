// SPDX-License-Identifier: Apache-2.0

#include "cmhate/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmhate/errors.hpp"

namespace cmhate {

Label decide(double hate_score, double non_hate_score) noexcept {
  const double scale = std::max({1.0, std::abs(hate_score), std::abs(non_hate_score)});
  if (std::abs(hate_score - non_hate_score) <= kTieTolerance * scale) return Label::NonHate;
  return hate_score > non_hate_score ? Label::Hate : Label::NonHate;
}

NBModel nb_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                 double alpha) {
  if (x.size() != y.size()) throw std::invalid_argument("feature and label counts differ");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (num_features == 0) throw std::invalid_argument("empty feature space");

  std::array<std::size_t, 2> docs{};
  std::array<std::vector<double>, 2> counts{std::vector<double>(num_features, 0.0),
                                            std::vector<double>(num_features, 0.0)};
  std::array<double, 2> totals{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = label_index(y[i]);
    ++docs[c];
    for (const auto& [col, v] : x[i].entries()) {
      if (col >= num_features) throw std::invalid_argument("feature column out of range");
      counts[c][col] += v;
      totals[c] += v;
    }
  }
  if (docs[0] == 0 || docs[1] == 0) throw SingleClassTrainingSet();

  NBModel m;
  m.alpha = alpha;
  const double n = static_cast<double>(x.size());
  for (std::size_t c = 0; c < 2; ++c) {
    m.class_log_priors[c] = std::log(static_cast<double>(docs[c]) / n);
    const double denom = totals[c] + alpha * static_cast<double>(num_features);
    auto& ll = m.feature_log_likelihoods[c];
    ll.resize(num_features);
    for (std::size_t w = 0; w < num_features; ++w) ll[w] = std::log((counts[c][w] + alpha) / denom);
  }
  return m;
}

Prediction nb_predict(const NBModel& model, const SparseVector& x) {
  Prediction p;
  for (std::size_t c = 0; c < 2; ++c) {
    double s = model.class_log_priors[c];
    for (const auto& [col, v] : x.entries()) {
      if (col < model.num_features()) s += v * model.feature_log_likelihoods[c][col];
    }
    p.scores[c] = s;
  }
  p.label = decide(p.scores[0], p.scores[1]);
  return p;
}

}  // namespace cmhate
