// SPDX-License-Identifier: Apache-2.0

#include "cmhate/linear_svm.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cmhate/errors.hpp"
#include "cmhate/random.hpp"

namespace cmhate {
namespace {

double sign_of(Label l) { return l == Label::Hate ? 1.0 : -1.0; }

}  // namespace

double svm_objective(std::span<const double> weights, double bias, double lambda,
                     std::span<const SparseVector> x, std::span<const Label> y) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double margin = sign_of(y[i]) * (x[i].dot(weights) + bias);
    hinge += std::max(0.0, 1.0 - margin);
  }
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return hinge / static_cast<double>(x.size()) + 0.5 * lambda * sq;
}

SVMModel svm_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                   const SVMParams& params) {
  if (x.size() != y.size()) throw std::invalid_argument("feature and label counts differ");
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(params.eta0 > 0.0) || params.eta0 * params.lambda >= 1.0) {
    throw std::invalid_argument("eta0 must be positive with eta0 * lambda < 1");
  }
  if (params.epochs == 0) throw std::invalid_argument("epochs must be positive");
  const bool has_hate = std::find(y.begin(), y.end(), Label::Hate) != y.end();
  const bool has_non_hate = std::find(y.begin(), y.end(), Label::NonHate) != y.end();
  if (!has_hate || !has_non_hate) throw SingleClassTrainingSet();
  for (const auto& v : x) {
    if (!v.empty() && v.entries().back().first >= num_features) {
      throw std::invalid_argument("feature column out of range");
    }
  }

  // Weights are held as scale * v.
  std::vector<double> v(num_features, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<double> dense(num_features, 0.0);

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);

  SVMModel best;
  best.lambda = params.lambda;
  best.epochs = params.epochs;
  best.eta0 = params.eta0;
  best.seed = params.seed;
  double best_objective = std::numeric_limits<double>::infinity();

  std::size_t t = 0;
  for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (auto i : order) {
      const double eta = params.eta0 / (1.0 + params.eta0 * params.lambda * static_cast<double>(t));
      ++t;
      const double yi = sign_of(y[i]);
      const double margin = yi * (scale * x[i].dot(v) + bias);
      scale *= 1.0 - eta * params.lambda;
      if (margin < 1.0) {
        const double step = eta * yi / scale;
        for (const auto& [c, val] : x[i].entries()) v[c] += step * val;
        bias += eta * yi;
      }
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
    for (std::size_t c = 0; c < num_features; ++c) dense[c] = scale * v[c];
    const double objective = svm_objective(dense, bias, params.lambda, x, y);
    best.epoch_objectives.push_back(objective);
    if (objective < best_objective) {
      best_objective = objective;
      best.weights = dense;
      best.bias = bias;
      best.best_epoch = epoch;
    }
  }
  return best;
}

double svm_decision(const SVMModel& model, const SparseVector& x) noexcept {
  double s = model.bias;
  for (const auto& [c, v] : x.entries()) {
    if (c < model.weights.size()) s += model.weights[c] * v;
  }
  return s;
}

Prediction svm_predict(const SVMModel& model, const SparseVector& x) {
  Prediction p;
  const double d = svm_decision(model, x);
  p.scores = {d, -d};
  p.label = decide(d, 0.0);
  return p;
}

}  // namespace cmhate
