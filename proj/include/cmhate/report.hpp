// SPDX-License-Identifier: Apache-2.0
//
// Result tables: results.csv rows, the model x training-set summary with
// best-cell flags and significance stars, and the batch-sweep layout.

#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmhate/eval.hpp"

namespace cmhate {

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr std::string_view kSignificanceTest = "welch_two_tailed";

struct CellKey {
  std::string model;
  std::string train_set;
  auto operator<=>(const CellKey&) const = default;
};

struct ReportGrid {
  std::vector<std::string> models;      // row order
  std::vector<std::string> train_sets;  // column order
  std::string baseline_set;             // column that improvements are tested against
  std::map<CellKey, CellSummary> cells; // cells may be missing
};

// Groups reports into cells, keeping first-appearance order of models and
// training sets. Baseline defaults to the first training set.
ReportGrid build_grid(const std::vector<RunReport>& reports, std::optional<std::string> baseline = {});

// p of Welch's test between each cell's per-seed F1 and the same model's
// baseline cell. Cells lacking two seeds on either side, or with zero
// variance on both, get no entry.
std::map<CellKey, double> compute_significance(const ReportGrid& grid);

// Starred: p < 0.05 (strict) and the cell's mean F1 exceeds the baseline's.
bool is_starred(const ReportGrid& grid, const CellKey& key, const std::map<CellKey, double>& significance);

// Keys of the max-mean-F1 cell(s) of each training set.
std::vector<CellKey> best_cells(const ReportGrid& grid);

struct ReportArtifact {
  std::string csv;    // summary.csv
  std::string table;  // Markdown table
};

ReportArtifact render_report(const ReportGrid& grid, const std::map<CellKey, double>& significance);

// Shortest round-trip decimal form.
std::string format_double(double v);

// results.csv: model,train_set,seed,acc,pre,rec,f1
std::string results_csv(const std::vector<RunReport>& reports);
// Reads results.csv back into metric-only reports (no per-sample data).
std::vector<RunReport> parse_results_csv(const std::string& csv);

struct SweepPoint {
  std::string model;
  std::string ratio;  // "equal" / "base"
  std::size_t size = 0;  // per-language native samples added
  CellSummary summary;
};

// One row per (model, ratio, metric) with ACC, F1, PRE, REC rows as in the
// sweep table; size columns sorted ascending.
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace cmhate
