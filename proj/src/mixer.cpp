// SPDX-License-Identifier: Apache-2.0

#include "cmhate/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cmhate/errors.hpp"
#include "cmhate/random.hpp"

namespace cmhate {
namespace {

std::vector<std::size_t> indices_with_label(const Corpus& c, Label l) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].label == l) out.push_back(i);
  }
  return out;
}

// Remaining (not yet drawn) sample indices per donor and label.
class DonorPools {
 public:
  std::vector<std::size_t> take(const Corpus& donor, Label label, std::size_t count, Rng& rng) {
    auto& pool = pool_for(donor, label);
    if (count > pool.size()) {
      throw InsufficientSamples(donor.name(), std::string(to_string(label)), count, pool.size());
    }
    rng.partial_shuffle(std::span<std::size_t>(pool), count);
    std::vector<std::size_t> drawn(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    return drawn;
  }

  std::size_t available(const Corpus& donor, Label label) { return pool_for(donor, label).size(); }

 private:
  std::vector<std::size_t>& pool_for(const Corpus& donor, Label label) {
    auto key = std::make_pair(&donor, label);
    auto it = pools_.find(key);
    if (it == pools_.end()) it = pools_.emplace(key, indices_with_label(donor, label)).first;
    return it->second;
  }

  std::map<std::pair<const Corpus*, Label>, std::vector<std::size_t>> pools_;
};

void append(std::vector<Sample>& out, const Corpus& from, const std::vector<std::size_t>& idx) {
  for (auto i : idx) out.push_back(from[i]);
}

// floor() guarded against products such as 0.15 * 20 landing just below an
// integer.
std::size_t floor_share(double frac, std::size_t n) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9));
}

// round(num / den) with halves away from zero, in integers.
std::size_t rounded_ratio(std::size_t num, std::size_t den) { return (2 * num + den) / (2 * den); }

}  // namespace

void SplitSpec::validate() const {
  for (double f : {train_frac, val_frac, test_frac}) {
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("split fractions must lie in (0,1)");
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

SplitResult stratified_split(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed) {
  spec.validate();
  for (Label l : kLabels) {
    if (corpus.counts()[l] == 0) throw EmptyStratum(std::string(to_string(l)));
  }

  Rng rng(seed);
  // part[i] = 0 train, 1 val, 2 test.
  std::vector<int> part(corpus.size(), 0);
  const std::array<double, 3> fracs{spec.train_frac, spec.val_frac, spec.test_frac};
  for (Label l : kLabels) {
    auto idx = indices_with_label(corpus, l);
    rng.shuffle(std::span<std::size_t>(idx));
    const std::size_t n = idx.size();
    std::array<std::size_t, 3> sizes{};
    std::size_t assigned = 0;
    for (int p = 0; p < 3; ++p) {
      sizes[p] = floor_share(fracs[p], n);
      assigned += sizes[p];
    }
    for (int p = 0; assigned < n; p = (p + 1) % 3, ++assigned) ++sizes[p];

    std::size_t pos = 0;
    for (int p = 0; p < 3; ++p) {
      for (std::size_t k = 0; k < sizes[p]; ++k) part[idx[pos++]] = p;
    }
  }

  std::array<std::vector<Sample>, 3> parts;
  for (std::size_t i = 0; i < corpus.size(); ++i) parts[part[i]].push_back(corpus[i]);
  return {Corpus(corpus.name() + "-train", std::move(parts[0])),
          Corpus(corpus.name() + "-val", std::move(parts[1])),
          Corpus(corpus.name() + "-test", std::move(parts[2]))};
}

Corpus build_mix(const MixPlan& plan) {
  const Corpus& base = plan.base.get();
  std::vector<Sample> out(base.samples().begin(), base.samples().end());
  Rng rng(plan.seed);
  DonorPools pools;
  for (const auto& add : plan.additions) {
    const Corpus& donor = add.donor.get();
    for (Label l : kLabels) {
      const auto wanted = add.target[l];
      const auto available = pools.available(donor, l);
      if (wanted > available) {
        throw InsufficientSamples(donor.name(), std::string(to_string(l)), wanted, available);
      }
    }
    for (Label l : kLabels) append(out, donor, pools.take(donor, l, add.target[l], rng));
  }
  return Corpus(plan.name.empty() ? base.name() + "-mix" : plan.name, std::move(out));
}

LabelCounts derive_proportional_counts(const Corpus& base, const Corpus& donor, std::size_t nonhate_cap) {
  const auto& bc = base.counts();
  if (bc.hate == 0 || bc.non_hate == 0) throw std::invalid_argument("base corpus must contain both labels");
  if (nonhate_cap > donor.counts().non_hate) {
    throw std::invalid_argument("non-hate cap exceeds the donor's non-hate count");
  }
  LabelCounts out;
  out.non_hate = nonhate_cap;
  out.hate = std::min(rounded_ratio(nonhate_cap * bc.hate, bc.non_hate), donor.counts().hate);
  return out;
}

LabelCounts derive_equal_counts(const std::vector<CorpusRef>& donors) {
  if (donors.empty()) throw std::invalid_argument("at least one donor is required");
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const Corpus& d : donors) m = std::min({m, d.counts().hate, d.counts().non_hate});
  return {m, m};
}

std::string_view to_string(RatioMode mode) noexcept { return mode == RatioMode::Equal ? "equal" : "base"; }

RatioMode parse_ratio_mode(std::string_view s) {
  if (s == "equal" || s == "equal_ratio" || s == "EqualRatio") return RatioMode::Equal;
  if (s == "base" || s == "base_ratio" || s == "BaseRatio" || s == "cm") return RatioMode::Base;
  throw std::invalid_argument("unknown ratio mode '" + std::string(s) + "'");
}

LabelCounts batch_label_counts(const SweepPlan& plan) {
  if (plan.batch_size_per_language == 0) throw std::invalid_argument("batch size must be positive");
  const std::size_t b = plan.batch_size_per_language;
  LabelCounts c;
  if (plan.ratio_mode == RatioMode::Equal) {
    c.hate = b / 2;
  } else {
    const auto& bc = plan.base.get().counts();
    if (bc.total() == 0) throw std::invalid_argument("base corpus is empty");
    c.hate = rounded_ratio(b * bc.hate, bc.total());
  }
  c.non_hate = b - c.hate;
  return c;
}

std::vector<Corpus> build_sweep(const SweepPlan& plan, const std::vector<CorpusRef>& donors) {
  if (plan.num_steps < 1) throw std::invalid_argument("sweep needs at least one step");
  const LabelCounts per_batch = batch_label_counts(plan);
  const Corpus& base = plan.base.get();

  DonorPools pools;
  for (const Corpus& d : donors) {
    for (Label l : kLabels) {
      const auto wanted = per_batch[l] * plan.num_steps;
      if (wanted > d.counts()[l]) {
        throw InsufficientSamples(d.name(), std::string(to_string(l)), wanted, d.counts()[l]);
      }
    }
  }

  Rng rng(plan.seed);
  std::vector<Sample> running(base.samples().begin(), base.samples().end());
  std::vector<Corpus> steps;
  steps.reserve(plan.num_steps);
  const std::string prefix = base.name() + "-sweep-" + std::string(to_string(plan.ratio_mode)) + "-";
  for (std::size_t k = 1; k <= plan.num_steps; ++k) {
    for (const Corpus& d : donors) {
      for (Label l : kLabels) append(running, d, pools.take(d, l, per_batch[l], rng));
    }
    steps.emplace_back(prefix + std::to_string(k), running);
  }
  return steps;
}

Corpus build_native_only(const std::vector<CorpusRef>& donors, std::uint64_t seed) {
  for (const Corpus& d : donors) {
    for (Label l : kLabels) {
      if (d.counts()[l] == 0) throw EmptyStratum(std::string(to_string(l)));
    }
  }
  Rng rng(seed);
  DonorPools pools;
  std::vector<Sample> out;
  for (const Corpus& d : donors) {
    const std::size_t m = std::min(d.counts().hate, d.counts().non_hate);
    for (Label l : kLabels) append(out, d, pools.take(d, l, m, rng));
  }
  return Corpus("native-only", std::move(out));
}

}  // namespace cmhate
