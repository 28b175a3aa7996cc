// SPDX-License-Identifier: Apache-2.0
//
// Code-mixing complexity: code-mixing index (CMI) and span burstiness.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmhate/corpus.hpp"

namespace cmhate {

struct LanguageSpan {
  std::string lang;
  std::size_t length = 0;
  friend bool operator==(const LanguageSpan&, const LanguageSpan&) = default;
};

// Decomposition of a tag sequence.
//   tag_counts        words per language
//   total_words       N
//   independent_count I (language-independent words)
//   spans             maximal same-language runs; independent tokens neither
//                     count toward nor break a run
struct SpanProfile {
  std::map<std::string, std::size_t> tag_counts;
  std::size_t total_words = 0;
  std::size_t independent_count = 0;
  std::vector<LanguageSpan> spans;
};

// Throws EmptyTagSequence.
SpanProfile profile(std::span<const LangTag> tags);

// 100 * (1 - max_i t_i / (N - I)) when N > I, else 0.
double cmi(const SpanProfile& p);

// (sigma - mean) / (sigma + mean) over span lengths, population sigma.
// Throws NoSpans.
double burstiness(const SpanProfile& p);

struct SampleComplexity {
  std::string id;
  std::optional<double> cmi;         // absent without tags
  std::optional<double> burstiness;  // absent without tags or spans
};

SampleComplexity sample_complexity(const Sample& s);

struct CorpusComplexity {
  double avg_cmi = 0.0;         // over tagged samples
  double avg_burstiness = 0.0;  // over samples with at least one span
  // Samples excluded from at least one average (no tags or no spans).
  std::size_t skipped = 0;
  std::size_t cmi_samples = 0;
  std::size_t burstiness_samples = 0;
};

// Unweighted per-sample averages. Throws NoTaggedSamples when no sample has
// a language span.
CorpusComplexity corpus_complexity(const Corpus& corpus);

}  // namespace cmhate
