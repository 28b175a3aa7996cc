// SPDX-License-Identifier: Apache-2.0
//
// Multinomial naive Bayes over count vectors with additive smoothing.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "cmhate/corpus.hpp"
#include "cmhate/sparse.hpp"

namespace cmhate {

// Result of scoring one document: predicted label plus per-label scores
// (log posteriors for NB, decision value / votes for the other models).
struct Prediction {
  Label label = Label::NonHate;
  std::array<double, 2> scores{};
};

// Scores closer than this (relative to their magnitude) count as a tie.
inline constexpr double kTieTolerance = 1e-9;

// argmax of two scores; ties go to NonHate.
Label decide(double hate_score, double non_hate_score) noexcept;

struct NBModel {
  std::array<double, 2> class_log_priors{};
  // feature_log_likelihoods[label][column] = log P(column | label)
  std::array<std::vector<double>, 2> feature_log_likelihoods;
  double alpha = 1.0;

  std::size_t num_features() const noexcept { return feature_log_likelihoods[0].size(); }
};

// P(w|c) = (count(w,c) + alpha) / (total(c) + alpha * num_features).
// Throws SingleClassTrainingSet; std::invalid_argument for size mismatches
// or alpha <= 0.
NBModel nb_train(std::span<const SparseVector> x, std::span<const Label> y, std::size_t num_features,
                 double alpha = 1.0);

// log prior + sum(count * log likelihood); a zero vector falls back to the
// prior argmax.
Prediction nb_predict(const NBModel& model, const SparseVector& x);

}  // namespace cmhate
