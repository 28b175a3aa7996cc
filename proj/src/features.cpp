// SPDX-License-Identifier: Apache-2.0

#include "cmhate/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "cmhate/errors.hpp"
#include "cmhate/text.hpp"

namespace cmhate {
namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

bool is_url(std::string_view t) {
  return starts_with_ci(t, "http://") || starts_with_ci(t, "https://") || starts_with_ci(t, "www.");
}

constexpr std::string_view kFormat = "cmhate.feature_space";

}  // namespace

TokenStream tokenize(std::string_view input, const NormalizationPolicy& policy) {
  TokenStream out;
  for (auto raw : text::split_whitespace(input)) {
    if (text::has_devanagari(raw)) {
      out.tokens.emplace_back(raw);
      continue;
    }
    // Edge punctuation removed, a leading '@' kept.
    const std::string_view core = text::strip_punctuation(raw, "@");
    if (policy.collapse_urls && is_url(core)) {
      out.tokens.emplace_back("<url>");
      continue;
    }
    if (policy.collapse_mentions && core.size() > 1 && core.front() == '@') {
      out.tokens.emplace_back("<user>");
      continue;
    }
    std::string token = policy.lowercase ? text::to_lower(raw) : std::string(raw);
    if (policy.strip_punctuation) token = std::string(text::strip_punctuation(token));
    if (!token.empty()) out.tokens.push_back(std::move(token));
  }
  return out;
}

std::vector<std::string> extract_ngrams(const TokenStream& doc, const std::set<int>& orders) {
  std::vector<std::string> out;
  const auto& t = doc.tokens;
  for (int n : orders) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= t.size(); ++i) {
      std::string g = t[i];
      for (std::size_t k = 1; k < len; ++k) {
        g += '_';
        g += t[i + k];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

FeatureSpace FeatureSpace::fit(const FeatureConfig& config, std::span<const TokenStream> docs) {
  if (config.orders.empty()) throw std::invalid_argument("at least one n-gram order is required");
  for (int n : config.orders) {
    if (n < 1 || n > 3) throw std::invalid_argument("n-gram orders must be within {1,2,3}");
  }
  const bool any_tokens =
      std::any_of(docs.begin(), docs.end(), [](const TokenStream& d) { return !d.tokens.empty(); });
  if (!any_tokens) throw EmptyTrainingSet();

  std::vector<std::string> first_seen;
  std::unordered_map<std::string, std::size_t> doc_freq;
  for (const auto& d : docs) {
    std::unordered_set<std::string> in_doc;
    for (auto& g : extract_ngrams(d, config.orders)) {
      if (!in_doc.insert(g).second) continue;
      auto [it, inserted] = doc_freq.emplace(g, 0);
      if (inserted) first_seen.push_back(g);
      ++it->second;
    }
  }

  FeatureSpace space;
  space.config_ = config;
  space.doc_count_ = docs.size();
  for (auto& g : first_seen) {
    if (doc_freq[g] < config.min_doc_freq) continue;
    space.index_.emplace(g, static_cast<std::uint32_t>(space.ngrams_.size()));
    space.ngrams_.push_back(g);
  }
  return space;
}

std::optional<std::uint32_t> FeatureSpace::index_of(const std::string& ngram) const {
  auto it = index_.find(ngram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json FeatureSpace::to_json() const {
  const auto& n = config_.normalization;
  return {{"format", kFormat},
          {"version", kFormatVersion},
          {"orders", std::vector<int>(config_.orders.begin(), config_.orders.end())},
          {"min_doc_freq", config_.min_doc_freq},
          {"doc_count", doc_count_},
          {"normalization",
           {{"lowercase", n.lowercase},
            {"strip_punctuation", n.strip_punctuation},
            {"collapse_urls", n.collapse_urls},
            {"collapse_mentions", n.collapse_mentions}}},
          {"vocabulary", ngrams_}};
}

FeatureSpace FeatureSpace::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kFormat) throw Error("not a feature space file");
  if (j.at("version").get<int>() != kFormatVersion) throw Error("unsupported feature space version");
  FeatureSpace space;
  space.config_.orders.clear();
  for (int n : j.at("orders").get<std::vector<int>>()) space.config_.orders.insert(n);
  space.config_.min_doc_freq = j.at("min_doc_freq").get<std::size_t>();
  space.doc_count_ = j.at("doc_count").get<std::size_t>();
  const auto& norm = j.at("normalization");
  space.config_.normalization = {norm.at("lowercase").get<bool>(), norm.at("strip_punctuation").get<bool>(),
                                 norm.at("collapse_urls").get<bool>(), norm.at("collapse_mentions").get<bool>()};
  space.ngrams_ = j.at("vocabulary").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < space.ngrams_.size(); ++i) {
    if (!space.index_.emplace(space.ngrams_[i], static_cast<std::uint32_t>(i)).second) {
      throw Error("feature space vocabulary has a duplicate entry");
    }
  }
  return space;
}

void FeatureSpace::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << to_json().dump() << '\n';
}

FeatureSpace FeatureSpace::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return from_json(nlohmann::json::parse(in));
}

SparseVector vectorize(const FeatureSpace& space, const TokenStream& doc, Weighting weighting) {
  std::map<std::uint32_t, double> counts;
  for (const auto& g : extract_ngrams(doc, space.config().orders)) {
    if (auto idx = space.index_of(g)) counts[*idx] += 1.0;
  }
  std::vector<SparseVector::Entry> entries(counts.begin(), counts.end());
  if (weighting == Weighting::L2NormalizedTF && !entries.empty()) {
    double sq = 0.0;
    for (const auto& e : entries) sq += e.second * e.second;
    const double norm = std::sqrt(sq);
    for (auto& e : entries) e.second /= norm;
  }
  return SparseVector(std::move(entries));
}

}  // namespace cmhate
