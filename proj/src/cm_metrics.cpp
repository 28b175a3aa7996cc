// SPDX-License-Identifier: Apache-2.0

#include "cmhate/cm_metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "cmhate/errors.hpp"

namespace cmhate {

SpanProfile profile(std::span<const LangTag> tags) {
  if (tags.empty()) throw EmptyTagSequence();
  SpanProfile p;
  p.total_words = tags.size();
  for (const auto& t : tags) {
    if (t.is_independent()) {
      ++p.independent_count;
      continue;
    }
    ++p.tag_counts[t.code()];
    if (!p.spans.empty() && p.spans.back().lang == t.code()) {
      ++p.spans.back().length;
    } else {
      p.spans.push_back({t.code(), 1});
    }
  }
  return p;
}

double cmi(const SpanProfile& p) {
  if (p.total_words <= p.independent_count) return 0.0;
  std::size_t dominant = 0;
  for (const auto& [lang, n] : p.tag_counts) dominant = std::max(dominant, n);
  const double tagged = static_cast<double>(p.total_words - p.independent_count);
  const double value = 100.0 * (1.0 - static_cast<double>(dominant) / tagged);
  assert(p.tag_counts.size() > 2 || value <= 50.0);
  return value;
}

double burstiness(const SpanProfile& p) {
  if (p.spans.empty()) throw NoSpans();
  const double n = static_cast<double>(p.spans.size());
  double sum = 0.0;
  for (const auto& s : p.spans) sum += static_cast<double>(s.length);
  const double mean = sum / n;
  double sq = 0.0;
  for (const auto& s : p.spans) {
    const double d = static_cast<double>(s.length) - mean;
    sq += d * d;
  }
  const double sigma = std::sqrt(sq / n);
  return (sigma - mean) / (sigma + mean);
}

SampleComplexity sample_complexity(const Sample& s) {
  SampleComplexity out{s.id, std::nullopt, std::nullopt};
  if (!s.lang_tags || s.lang_tags->empty()) return out;
  const SpanProfile p = profile(*s.lang_tags);
  out.cmi = cmi(p);
  if (!p.spans.empty()) out.burstiness = burstiness(p);
  return out;
}

CorpusComplexity corpus_complexity(const Corpus& corpus) {
  CorpusComplexity out;
  double cmi_sum = 0.0;
  double burst_sum = 0.0;
  for (const auto& s : corpus.samples()) {
    const auto m = sample_complexity(s);
    if (m.cmi) {
      cmi_sum += *m.cmi;
      ++out.cmi_samples;
    }
    if (m.burstiness) {
      burst_sum += *m.burstiness;
      ++out.burstiness_samples;
    } else {
      ++out.skipped;
    }
  }
  if (out.burstiness_samples == 0) throw NoTaggedSamples();
  out.avg_cmi = cmi_sum / static_cast<double>(out.cmi_samples);
  out.avg_burstiness = burst_sum / static_cast<double>(out.burstiness_samples);
  return out;
}

}  // namespace cmhate
