// SPDX-License-Identifier: Apache-2.0
//
// Tokenization and word n-gram feature spaces.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmhate/sparse.hpp"
#include "json.hpp"

namespace cmhate {

struct NormalizationPolicy {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_urls = true;      // http://..., https://..., www.... -> "<url>"
  bool collapse_mentions = true;  // @name -> "<user>"

  static NormalizationPolicy none() { return {false, false, false, false}; }
  friend bool operator==(const NormalizationPolicy&, const NormalizationPolicy&) = default;
};

struct TokenStream {
  std::vector<std::string> tokens;
  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

// Whitespace split, then per token: URL/mention collapse, Unicode lowercase,
// edge punctuation stripping. Tokens containing Devanagari are kept as they
// are. Empty tokens are dropped.
TokenStream tokenize(std::string_view text, const NormalizationPolicy& policy = {});

// All n-grams of the given orders, order-major then by position, joined
// with '_'.
std::vector<std::string> extract_ngrams(const TokenStream& doc, const std::set<int>& orders);

struct FeatureConfig {
  std::set<int> orders{1, 2, 3};
  std::size_t min_doc_freq = 2;
  NormalizationPolicy normalization;
};

enum class Weighting { Count, L2NormalizedTF };

class FeatureSpace {
 public:
  static constexpr int kFormatVersion = 1;

  // Vocabulary: every n-gram present in >= min_doc_freq documents, indexed in
  // order of first occurrence. Throws EmptyTrainingSet when no document has
  // a token; std::invalid_argument for orders outside {1,2,3}.
  static FeatureSpace fit(const FeatureConfig& config, std::span<const TokenStream> docs);

  std::size_t size() const noexcept { return ngrams_.size(); }
  std::optional<std::uint32_t> index_of(const std::string& ngram) const;
  const std::string& ngram(std::size_t column) const { return ngrams_.at(column); }
  const std::vector<std::string>& ngrams() const noexcept { return ngrams_; }
  const FeatureConfig& config() const noexcept { return config_; }
  std::size_t doc_count() const noexcept { return doc_count_; }

  nlohmann::json to_json() const;
  static FeatureSpace from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static FeatureSpace load(const std::filesystem::path& path);

 private:
  FeatureConfig config_;
  std::size_t doc_count_ = 0;
  std::vector<std::string> ngrams_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Out-of-vocabulary n-grams are dropped; may return the zero vector.
SparseVector vectorize(const FeatureSpace& space, const TokenStream& doc, Weighting weighting);

}  // namespace cmhate
