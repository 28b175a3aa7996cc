// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration (a JSON tree) and standalone mix-plan files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmhate/corpus.hpp"
#include "cmhate/features.hpp"
#include "cmhate/mixer.hpp"
#include "cmhate/model.hpp"
#include "json.hpp"

namespace cmhate {

struct CorpusSpec {
  std::filesystem::path path;  // absolute after parsing
  RecordFormat format = RecordFormat::Jsonl;
  Source source;
  std::optional<std::map<std::string, Label>> labels;  // replaces the default label table
  std::string name;

  // {"path", "format"?, "source"?, "labels"? {"raw": "hate"|"non-hate"}, "name"?}
  static CorpusSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;
  Corpus load() const;
};

// Target label counts of one mix addition:
//   {"hate": N, "non-hate": M}   explicit
//   "equal"                      min per-label count over all donors of the mix
//   {"nonhate_cap": M}           proportional to the base label ratio
struct CountsSpec {
  enum class Mode { Explicit, Equal, Proportional };
  Mode mode = Mode::Explicit;
  LabelCounts counts;
  std::size_t nonhate_cap = 0;

  static CountsSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct AdditionSpec {
  std::string corpus;  // key into ExperimentConfig::corpora
  CountsSpec counts;
};

struct MixSpec {
  std::string name;
  std::vector<AdditionSpec> additions;
};

struct SweepSpec {
  std::vector<std::string> donors;
  std::size_t batch_size_per_language = 200;
  std::size_t num_steps = 7;
  std::vector<RatioMode> ratio_modes{RatioMode::Equal, RatioMode::Base};
};

struct NativeSetSpec {
  std::string name;
  std::vector<std::string> donors;
};

// Language-model cell handed to an external fine-tuning harness.
struct MlmSpec {
  std::string name;
  nlohmann::json job;  // model_id, head and training hyperparameters
};

enum class ExperimentKind { BaselineOnly, Exp1Mix, Exp2Sweep, Exp3NativeOnly };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view s);

struct ExperimentConfig {
  std::string name = "experiment";
  std::map<std::string, CorpusSpec> corpora;
  std::string base;                   // key of the code-mixed corpus
  std::string baseline_name = "CM";   // name of the code-mixed training split
  SplitSpec split;
  std::uint64_t split_seed = 13;
  std::uint64_t mix_seed = 7;
  ExperimentKind kind = ExperimentKind::BaselineOnly;
  std::vector<MixSpec> mixes;
  SweepSpec sweep;
  std::vector<NativeSetSpec> native_sets;
  FeatureConfig features;
  std::vector<ModelSpec> models;
  std::vector<MlmSpec> mlm_models;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "runs";
  bool save_models = false;

  // Canonical form of the parsed tree, with absolute paths.
  nlohmann::json canonical;

  // Throws ConfigError on structural problems.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

  // Referenced files exist, seeds are non-empty and distinct, every corpus
  // key resolves. Throws ConfigError.
  void validate() const;
};

// Applies "dotted.path=value" overrides; values parse as JSON when possible
// and as plain strings otherwise.
void apply_overrides(nlohmann::json& tree, const std::vector<std::string>& overrides);

// Reads a config file, or the config recorded in a run manifest.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// Standalone plan for the `mix` command.
//   {"kind": "mix" | "sweep" | "native_only", "name"?, "seed"?,
//    "base": CorpusSpec, "additions": [{"corpus": CorpusSpec, "counts": ...}],
//    "donors": [CorpusSpec], "batch_size_per_language", "num_steps", "ratio_mode"}
struct PlanResult {
  std::vector<Corpus> outputs;
  nlohmann::json manifest;  // plan, seed, resulting counts
};

PlanResult execute_plan(const nlohmann::json& plan, const std::filesystem::path& base_dir,
                        std::optional<std::uint64_t> seed_override = {});

nlohmann::json counts_to_json(const LabelCounts& c);

}  // namespace cmhate
