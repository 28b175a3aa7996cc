// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cmhate/cm_metrics.hpp"
#include "cmhate/errors.hpp"
#include "doctest.h"

using namespace cmhate;

namespace {

std::vector<LangTag> tags(std::initializer_list<const char*> codes) {
  std::vector<LangTag> out;
  for (const char* c : codes) out.push_back(LangTag::parse(c));
  return out;
}

SpanProfile spans_of(std::initializer_list<std::size_t> lengths) {
  SpanProfile p;
  int i = 0;
  for (auto len : lengths) {
    const std::string lang = (i++ % 2) ? "en" : "hi";
    p.spans.push_back({lang, len});
    p.tag_counts[lang] += len;
    p.total_words += len;
  }
  return p;
}

Sample tagged(std::string id, std::string text, std::initializer_list<const char*> codes) {
  return Sample{std::move(id), std::move(text), Label::Hate, tags(codes), {}};
}

}  // namespace

TEST_CASE("profile of a perfect alternation") {
  const auto p = profile(tags({"hi", "en", "hi", "en"}));
  CHECK(p.tag_counts == std::map<std::string, std::size_t>{{"en", 2}, {"hi", 2}});
  CHECK(p.total_words == 4);
  CHECK(p.independent_count == 0);
  CHECK(p.spans == std::vector<LanguageSpan>{{"hi", 1}, {"en", 1}, {"hi", 1}, {"en", 1}});
}

TEST_CASE("independent tokens do not break spans") {
  const auto p = profile(tags({"hi", "independent", "hi", "en"}));
  CHECK(p.spans == std::vector<LanguageSpan>{{"hi", 2}, {"en", 1}});
  CHECK(p.independent_count == 1);
  CHECK(p.total_words == 4);
}

TEST_CASE("all-independent profile") {
  const auto p = profile(tags({"univ", "univ"}));
  CHECK(p.tag_counts.empty());
  CHECK(p.total_words == 2);
  CHECK(p.independent_count == 2);
  CHECK(p.spans.empty());
  CHECK(cmi(p) == 0.0);
  CHECK_THROWS_AS(burstiness(p), NoSpans);
}

TEST_CASE("empty tag sequence") { CHECK_THROWS_AS(profile({}), EmptyTagSequence); }

TEST_CASE("cmi values") {
  CHECK(cmi(profile(tags({"hi", "hi", "hi", "hi"}))) == 0.0);
  CHECK(cmi(profile(tags({"hi", "en", "hi", "en"}))) == 50.0);
  CHECK(cmi(profile(tags({"hi", "hi", "en", "univ"}))) == doctest::Approx(33.33).epsilon(0.01 / 33.33));
  CHECK(cmi(profile(tags({"hi", "hi", "en", "univ"}))) == doctest::Approx(100.0 / 3.0));
  CHECK(cmi(profile(tags({"hi", "en", "ta"}))) == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("burstiness values") {
  CHECK(burstiness(spans_of({2, 2, 2})) == -1.0);
  CHECK(burstiness(spans_of({1, 5})) == -0.2);
  CHECK(burstiness(spans_of({7})) == -1.0);
  // m = 2.5, population sigma = sqrt(1.25)
  const double s = std::sqrt(1.25);
  CHECK(burstiness(spans_of({1, 2, 3, 4})) == doctest::Approx((s - 2.5) / (s + 2.5)));
}

TEST_CASE("per-sample complexity") {
  const auto c = sample_complexity(tagged("a", "x y", {"hi", "en"}));
  CHECK(c.id == "a");
  CHECK(*c.cmi == 50.0);
  CHECK(*c.burstiness == -1.0);
  const auto u = sample_complexity(Sample{"b", "x", Label::Hate, std::nullopt, {}});
  CHECK_FALSE(u.cmi.has_value());
  CHECK_FALSE(u.burstiness.has_value());
}

TEST_CASE("corpus averages") {
  const Corpus one("c", {tagged("a", "x y", {"hi", "en"})});
  const auto r = corpus_complexity(one);
  CHECK(r.avg_cmi == 50.0);
  CHECK(r.avg_burstiness == -1.0);
  CHECK(r.skipped == 0);

  const Corpus mixed("m", {tagged("a", "x y", {"hi", "en"}), tagged("b", "p q r s", {"hi", "hi", "hi", "hi"}),
                           tagged("c", "1 2", {"univ", "univ"}), Sample{"d", "z", Label::NonHate, std::nullopt, {}}});
  const auto m = corpus_complexity(mixed);
  CHECK(m.cmi_samples == 3);
  CHECK(m.avg_cmi == doctest::Approx(50.0 / 3.0));
  CHECK(m.burstiness_samples == 2);
  CHECK(m.avg_burstiness == -1.0);
  CHECK(m.skipped == 2);
}

TEST_CASE("corpus without tags") {
  const Corpus none("c", {Sample{"a", "x", Label::Hate, std::nullopt, {}}});
  CHECK_THROWS_AS(corpus_complexity(none), NoTaggedSamples);
}
