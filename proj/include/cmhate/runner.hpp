// SPDX-License-Identifier: Apache-2.0
//
// End-to-end experiment execution.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmhate/config.hpp"
#include "cmhate/errors.hpp"
#include "cmhate/eval.hpp"

namespace cmhate {

std::string_view toolkit_version() noexcept;

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

struct RunOptions {
  // Exact artifact directory; otherwise <output_dir>/<name>-<UTC time>-<hash8>.
  std::optional<std::filesystem::path> run_dir;
  // Progress lines go here when set.
  std::ostream* log = nullptr;
};

struct RunSummary {
  std::filesystem::path run_dir;
  std::vector<RunReport> reports;     // native cells, in execution order
  std::vector<std::string> training_sets;
  std::size_t delegated_cells = 0;    // language-model jobs written
};

// A stage or cell failed: partial artifacts stay on disk, the manifest is
// marked "failed" and a FAILED file records the stage and cause.
class RunFailure : public Error {
 public:
  RunFailure(std::filesystem::path run_dir, std::string stage, const std::string& cause)
      : Error("run failed at " + stage + ": " + cause), run_dir_(std::move(run_dir)), stage_(std::move(stage)) {}
  const std::filesystem::path& run_dir() const noexcept { return run_dir_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::filesystem::path run_dir_;
  std::string stage_;
};

// Artifact layout under the run directory:
//   manifest.json, results.csv, summary.csv, report.md, sweep.csv (sweeps)
//   data/{train,val,test}.jsonl          the code-mixed split
//   sets/<set>.jsonl + .manifest.json     every training set
//   cells/<set>/features.json
//   cells/<set>/<model>/seed-<s>/predictions.jsonl (+ model.json)
//   jobs/<set>/<model>/seed-<s>.json      language-model job descriptors
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Writes summary.csv, report.md and (when sweep points exist) sweep.csv
// from results.csv in the directory.
void write_report(const std::filesystem::path& dir, std::optional<std::string> baseline = {});

}  // namespace cmhate
