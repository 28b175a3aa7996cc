// SPDX-License-Identifier: Apache-2.0
//
// Training-set formulation: stratified splits, native-sample mixes with
// target label counts, incremental batch sweeps and native-only sets. Every
// builder is a deterministic function of its inputs and seed.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cmhate/corpus.hpp"

namespace cmhate {

using CorpusRef = std::reference_wrapper<const Corpus>;

struct SplitSpec {
  double train_frac = 0.70;
  double val_frac = 0.15;
  double test_frac = 0.15;

  // Each fraction in (0,1), summing to 1 within 1e-9. Throws std::invalid_argument.
  void validate() const;
};

struct SplitResult {
  Corpus train;
  Corpus val;
  Corpus test;
};

// Per label: shuffle that label's samples with the seed, give every part
// floor(frac * label_count), then hand out the remainder one sample at a
// time in train, val, test order. Parts keep the corpus order.
// Throws EmptyStratum when a label has no samples.
SplitResult stratified_split(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed);

struct MixAddition {
  CorpusRef donor;
  LabelCounts target;
};

struct MixPlan {
  CorpusRef base;
  std::vector<MixAddition> additions;
  std::uint64_t seed = 0;
  std::string name;  // empty -> "<base>-mix"
};

// Base samples first, then each addition's draws in declared order (hate
// draws before non-hate draws). Draws are uniform without replacement, also
// across additions that share a donor. Throws InsufficientSamples.
Corpus build_mix(const MixPlan& plan);

// NonHate = nonhate_cap; Hate = round(nonhate_cap * base_hate / base_nonhate)
// clamped to the donor's hate count.
LabelCounts derive_proportional_counts(const Corpus& base, const Corpus& donor, std::size_t nonhate_cap);

// Equal hate/non-hate counts shared by every donor: the smallest per-label
// count over all donors.
LabelCounts derive_equal_counts(const std::vector<CorpusRef>& donors);

enum class RatioMode { Equal, Base };

std::string_view to_string(RatioMode mode) noexcept;
RatioMode parse_ratio_mode(std::string_view s);

struct SweepPlan {
  CorpusRef base;
  std::size_t batch_size_per_language = 200;
  std::size_t num_steps = 7;
  RatioMode ratio_mode = RatioMode::Equal;
  std::uint64_t seed = 0;
};

// Label counts of one batch drawn from one donor.
LabelCounts batch_label_counts(const SweepPlan& plan);

// Step k (1-based) holds the base followed by batches 1..k, each batch
// listing every donor in order. Step k's sample list is a prefix of step
// k+1's. Throws InsufficientSamples.
std::vector<Corpus> build_sweep(const SweepPlan& plan, const std::vector<CorpusRef>& donors);

// Per donor, m = min(hate, non-hate) samples of each label. Throws
// EmptyStratum when a donor lacks a label.
Corpus build_native_only(const std::vector<CorpusRef>& donors, std::uint64_t seed);

}  // namespace cmhate
