// SPDX-License-Identifier: Apache-2.0
//
// Linear SVM trained by stochastic subgradient descent on the L2-regularized
// hinge loss. Hate is encoded +1, NonHate -1. The bias is not regularized.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmhate/naive_bayes.hpp"
#include "cmhate/sparse.hpp"

namespace cmhate {

struct SVMParams {
  double lambda = 1e-4;
  std::size_t epochs = 10;
  // Step size eta_t = eta0 / (1 + eta0 * lambda * t), t counting updates.
  double eta0 = 0.1;
  std::uint64_t seed = 0;
};

struct SVMModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1e-4;
  std::size_t epochs = 0;
  double eta0 = 0.1;
  std::uint64_t seed = 0;
  // Objective measured on the training set after each epoch.
  std::vector<double> epoch_objectives;
  std::size_t best_epoch = 0;  // 1-based epoch the weights come from
};

// mean(max(0, 1 - y (w.x + b))) + lambda/2 * |w|^2
double svm_objective(std::span<const double> weights, double bias, double lambda,
                     std::span<const SparseVector> x, std::span<const Label> y);

// Visits samples in a seeded shuffle every epoch and returns the epoch-end
// state with the lowest objective. Throws SingleClassTrainingSet.
SVMModel svm_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                   const SVMParams& params);

double svm_decision(const SVMModel& model, const SparseVector& x) noexcept;

// Hate when the decision value is positive; zero goes to NonHate.
Prediction svm_predict(const SVMModel& model, const SparseVector& x);

}  // namespace cmhate
