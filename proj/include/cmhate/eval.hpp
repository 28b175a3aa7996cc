// SPDX-License-Identifier: Apache-2.0
//
// Classification metrics with Hate as the positive class, per-run reports
// and per-cell (model x training set) seed aggregation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cmhate/corpus.hpp"

namespace cmhate {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double acc = 0.0;
  double pre = 0.0;
  double rec = 0.0;
  double f1 = 0.0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Any 0/0 ratio is 0.
Metrics metrics_from(const ConfusionMatrix& cm) noexcept;

struct Score {
  ConfusionMatrix confusion;
  Metrics metrics;
};

// Throws LengthMismatch; std::invalid_argument on empty input.
Score score(std::span<const Label> gold, std::span<const Label> pred);

struct PredictionRecord {
  std::string id;
  Label gold = Label::NonHate;
  Label pred = Label::NonHate;
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct RunReport {
  std::string model_name;
  std::string train_set_name;
  std::uint64_t seed = 0;
  Metrics metrics;
  std::vector<PredictionRecord> per_sample;
};

// Computes metrics from the per-sample pairs.
RunReport make_run_report(std::string model_name, std::string train_set_name, std::uint64_t seed,
                          std::vector<PredictionRecord> per_sample);

struct CellSummary {
  std::vector<RunReport> reports;
  Metrics mean;           // per-metric mean over seeds
  double mean_f1 = 0.0;   // == mean.f1
  double f1_spread = 0.0; // max - min over seeds

  const std::string& model_name() const { return reports.front().model_name; }
  const std::string& train_set_name() const { return reports.front().train_set_name; }
  std::vector<double> f1_samples() const;
};

// Throws MixedCell; std::invalid_argument for an empty list.
CellSummary summarize_cell(std::vector<RunReport> reports);

// predictions.jsonl: {"id","gold","pred"} per line, labels spelled
// "hate"/"non-hate" (any spelling the default LabelParser accepts on input).
void write_predictions(std::ostream& out, std::span<const PredictionRecord> records);
std::vector<PredictionRecord> read_predictions(std::istream& in);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);

}  // namespace cmhate
