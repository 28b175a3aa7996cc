// SPDX-License-Identifier: Apache-2.0
//
// Uniform handling of the three statistical classifiers: hyperparameters,
// training, prediction and versioned JSON persistence.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmhate/features.hpp"
#include "cmhate/linear_svm.hpp"
#include "cmhate/naive_bayes.hpp"
#include "cmhate/random_forest.hpp"
#include "json.hpp"

namespace cmhate {

enum class ModelKind { NaiveBayes, LinearSvm, RandomForest };

std::string_view to_string(ModelKind kind) noexcept;  // "nb" / "svm" / "rf"
ModelKind parse_model_kind(std::string_view s);

// NB reads raw counts; SVM and RF read L2-normalized term frequencies.
Weighting weighting_for(ModelKind kind) noexcept;

struct ModelSpec {
  std::string name;  // display name, defaults to the kind
  ModelKind kind = ModelKind::NaiveBayes;
  double alpha = 1.0;
  double lambda = 1e-4;
  std::size_t epochs = 10;
  double eta0 = 0.1;
  std::size_t num_trees = 100;
  std::size_t max_features = 0;
  // Validation-selection grid: hyperparameter name -> candidate values.
  std::map<std::string, std::vector<double>> grid;

  // Every hyperparameter combination of the grid (just *this without one),
  // in lexicographic key order with the last key varying fastest.
  std::vector<ModelSpec> expand_grid() const;

  // Parses {"kind": ..., hyperparameters...}; unknown keys are rejected.
  static ModelSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

using Model = std::variant<NBModel, SVMModel, RFModel>;

ModelKind kind_of(const Model& m) noexcept;

Model train_model(const ModelSpec& spec, std::span<const SparseVector> x, std::span<const Label> y,
                  std::size_t num_features, std::uint64_t seed);

Prediction predict(const Model& model, const SparseVector& x);

inline constexpr int kModelFormatVersion = 1;

// {"format":"cmhate.model","version":1,"kind":...,"feature_space":...,"model":{...}}
nlohmann::json model_to_json(const Model& model, const std::string& feature_space_ref);
Model model_from_json(const nlohmann::json& j);
std::string feature_space_ref(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const Model& model, const std::string& feature_space_ref);

struct LoadedModel {
  Model model;
  FeatureSpace features;
};

// Resolves the feature space path relative to the model file.
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace cmhate
