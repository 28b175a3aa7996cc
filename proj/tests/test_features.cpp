// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cmhate/errors.hpp"
#include "cmhate/features.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmhate;

namespace {

TokenStream ts(std::initializer_list<const char*> words) {
  TokenStream t;
  for (const char* w : words) t.tokens.emplace_back(w);
  return t;
}

FeatureConfig cfg(std::set<int> orders, std::size_t min_df) {
  FeatureConfig c;
  c.orders = std::move(orders);
  c.min_doc_freq = min_df;
  return c;
}

}  // namespace

TEST_CASE("sparse vectors") {
  const SparseVector v({{1, 2.0}, {4, 1.0}});
  CHECK(v.value_at(1) == 2.0);
  CHECK(v.value_at(2) == 0.0);
  CHECK(v.squared_norm() == 5.0);
  CHECK(v.sum() == 3.0);
  const std::vector<double> dense{1, 1, 1, 1, 3};
  CHECK(v.dot(dense) == 5.0);
  CHECK(v.scaled(0.5) == SparseVector({{1, 1.0}, {4, 0.5}}));
  CHECK_THROWS_AS(SparseVector({{2, 1.0}, {1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector({{1, 0.0}}), std::invalid_argument);
}

TEST_CASE("tokenization") {
  CHECK(tokenize("Tum logo ne!").tokens == std::vector<std::string>{"tum", "logo", "ne"});
  CHECK(tokenize("").tokens.empty());
  CHECK(tokenize("see http://x.co @bob").tokens == std::vector<std::string>{"see", "<url>", "<user>"});
  CHECK(tokenize("www.site.in ... ??").tokens == std::vector<std::string>{"<url>"});
  CHECK(tokenize("\"Quoted,\" WORDS").tokens == std::vector<std::string>{"quoted", "words"});
  CHECK(tokenize("ÉCOLE").tokens == std::vector<std::string>{"école"});
  CHECK(tokenize("दलित, हैं").tokens == std::vector<std::string>{"दलित,", "हैं"});
}

TEST_CASE("normalization can be switched off") {
  CHECK(tokenize("Tum @bob!", NormalizationPolicy::none()).tokens == std::vector<std::string>{"Tum", "@bob!"});
}

TEST_CASE("n-gram extraction") {
  const auto doc = ts({"a", "b", "c"});
  CHECK(extract_ngrams(doc, {1, 2}) == std::vector<std::string>{"a", "b", "c", "a_b", "b_c"});
  CHECK(extract_ngrams(doc, {3}) == std::vector<std::string>{"a_b_c"});
  CHECK(extract_ngrams(ts({"a"}), {2, 3}).empty());
}

TEST_CASE("vocabulary fitting") {
  const std::vector<TokenStream> docs{ts({"a", "b"}), ts({"a", "c"})};
  const auto all = FeatureSpace::fit(cfg({1}, 1), docs);
  CHECK(all.size() == 3);
  CHECK(all.ngrams() == std::vector<std::string>{"a", "b", "c"});
  const auto frequent = FeatureSpace::fit(cfg({1}, 2), docs);
  CHECK(frequent.ngrams() == std::vector<std::string>{"a"});
  const std::vector<TokenStream> one{ts({"a", "b", "c"})};
  CHECK(FeatureSpace::fit(cfg({2}, 1), one).ngrams() == std::vector<std::string>{"a_b", "b_c"});
  CHECK(all.doc_count() == 2);
}

TEST_CASE("document frequency counts a document once") {
  const std::vector<TokenStream> docs{ts({"a", "a", "a"}), ts({"b"})};
  CHECK(FeatureSpace::fit(cfg({1}, 2), docs).size() == 0);
}

TEST_CASE("fit errors") {
  const std::vector<TokenStream> empty{ts({}), ts({})};
  CHECK_THROWS_AS(FeatureSpace::fit(cfg({1}, 1), empty), EmptyTrainingSet);
  const std::vector<TokenStream> docs{ts({"a"})};
  CHECK_THROWS_AS(FeatureSpace::fit(cfg({4}, 1), docs), std::invalid_argument);
}

TEST_CASE("vectorization") {
  const std::vector<TokenStream> docs{ts({"a", "b"})};
  const auto space = FeatureSpace::fit(cfg({1}, 1), docs);
  const auto doc = ts({"a", "a", "b"});
  CHECK(vectorize(space, doc, Weighting::Count) == SparseVector({{0, 2.0}, {1, 1.0}}));
  const auto tf = vectorize(space, doc, Weighting::L2NormalizedTF);
  CHECK(tf.value_at(0) == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(tf.value_at(1) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(tf.squared_norm() == doctest::Approx(1.0));
  CHECK(vectorize(space, ts({"z"}), Weighting::Count).empty());
  CHECK(vectorize(space, ts({"z"}), Weighting::L2NormalizedTF).empty());
}

TEST_CASE("feature spaces round-trip through JSON") {
  FeatureConfig c = cfg({1, 2}, 1);
  c.normalization.collapse_urls = false;
  const std::vector<TokenStream> docs{ts({"x", "y", "z"}), ts({"y", "z"})};
  const auto space = FeatureSpace::fit(c, docs);
  cmhate::testing::TempDir dir("features");
  space.save(dir / "f.json");
  const auto back = FeatureSpace::load(dir / "f.json");
  CHECK(back.ngrams() == space.ngrams());
  CHECK(back.config().orders == c.orders);
  CHECK(back.config().min_doc_freq == 1);
  CHECK(back.config().normalization == c.normalization);
  CHECK(back.index_of("y_z") == space.index_of("y_z"));
  CHECK(back.doc_count() == 2);
  nlohmann::json bad = space.to_json();
  bad["version"] = 99;
  CHECK_THROWS(FeatureSpace::from_json(bad));
}
