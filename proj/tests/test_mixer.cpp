// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include "cmhate/errors.hpp"
#include "cmhate/mixer.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmhate;
using cmhate::testing::make_corpus;

namespace {

std::vector<std::string> ids(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& s : c.samples()) out.push_back(s.id);
  return out;
}

}  // namespace

TEST_CASE("split of exactly divisible counts") {
  const auto r = stratified_split(make_corpus("c", 100, 200), {}, 1);
  CHECK(r.train.counts() == LabelCounts{70, 140});
  CHECK(r.val.counts() == LabelCounts{15, 30});
  CHECK(r.test.counts() == LabelCounts{15, 30});
}

TEST_CASE("split of the code-mixed label totals") {
  const auto r = stratified_split(make_corpus("cm", 1661, 2914), {}, 5);
  CHECK(r.val.counts().hate == 249);
  CHECK(r.test.counts().hate == 249);
  CHECK(r.train.counts().hate + r.val.counts().hate + r.test.counts().hate == 1661);
  CHECK(r.train.counts().non_hate + r.val.counts().non_hate + r.test.counts().non_hate == 2914);
}

TEST_CASE("split needs both labels") {
  try {
    stratified_split(make_corpus("c", 10, 0), {}, 1);
    FAIL("expected EmptyStratum");
  } catch (const EmptyStratum& e) {
    CHECK(e.label() == "non-hate");
  }
}

TEST_CASE("split is seeded, disjoint and keeps corpus order") {
  const Corpus c = make_corpus("c", 37, 53);
  const auto a = stratified_split(c, {}, 9);
  const auto b = stratified_split(c, {}, 9);
  const auto d = stratified_split(c, {}, 10);
  CHECK(ids(a.train) == ids(b.train));
  CHECK(ids(a.test) == ids(b.test));
  CHECK(ids(a.test) != ids(d.test));
  std::set<std::string> all;
  for (const auto* part : {&a.train, &a.val, &a.test}) {
    const auto v = ids(*part);
    for (std::size_t i = 1; i < v.size(); ++i) {
      CHECK(std::stoi(v[i - 1].substr(2)) < std::stoi(v[i].substr(2)));
    }
    all.insert(v.begin(), v.end());
  }
  CHECK(all.size() == c.size());
  CHECK(a.train.name() == "c-train");
}

TEST_CASE("invalid fractions are rejected") {
  CHECK_THROWS_AS(stratified_split(make_corpus("c", 5, 5), {0.5, 0.3, 0.3}, 1), std::invalid_argument);
  CHECK_THROWS_AS(SplitSpec({1.0, 0.0, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("Train-1 and Train-2 totals") {
  const Corpus cm = make_corpus("cm", 1149, 2062);
  const Corpus hi = make_corpus("hi", 3338, 1416, Source::parse("hindi"));
  const Corpus en = make_corpus("en", 2261, 3591, Source::parse("english"));
  const auto eq = derive_equal_counts({hi, en});
  CHECK(eq == LabelCounts{1416, 1416});
  const Corpus t1 = build_mix({cm, {{hi, eq}, {en, eq}}, 7, "Train-1"});
  CHECK(t1.counts() == LabelCounts{3981, 4894});
  CHECK(t1.name() == "Train-1");
  const Corpus t2 = build_mix({cm, {{hi, {810, 1416}}, {en, {2000, 3500}}}, 7, "Train-2"});
  CHECK(t2.counts() == LabelCounts{3959, 6978});
}

TEST_CASE("mix layout: base first, then each addition's hate and non-hate draws") {
  const Corpus base = make_corpus("b", 2, 2);
  const Corpus donor = make_corpus("d", 5, 5);
  const Corpus m = build_mix({base, {{donor, {2, 3}}}, 3, ""});
  REQUIRE(m.size() == 9);
  for (std::size_t i = 0; i < 4; ++i) CHECK(m[i] == base[i]);
  CHECK(m[4].label == Label::Hate);
  CHECK(m[5].label == Label::Hate);
  for (std::size_t i = 6; i < 9; ++i) CHECK(m[i].label == Label::NonHate);
  CHECK(m.name() == "b-mix");
}

TEST_CASE("mix without additions equals the base") {
  const Corpus base = make_corpus("b", 3, 4);
  const Corpus m = build_mix({base, {}, 1, "b"});
  CHECK(ids(m) == ids(base));
  CHECK(m.counts() == base.counts());
}

TEST_CASE("shared donors draw without replacement") {
  const Corpus base = make_corpus("b", 1, 1);
  const Corpus donor = make_corpus("d", 4, 4);
  const Corpus m = build_mix({base, {{donor, {2, 2}}, {donor, {2, 2}}}, 11, ""});
  CHECK(m.size() == 10);
  try {
    build_mix({base, {{donor, {3, 0}}, {donor, {2, 0}}}, 11, ""});
    FAIL("expected InsufficientSamples");
  } catch (const InsufficientSamples& e) {
    CHECK(e.corpus() == "d");
    CHECK(e.wanted() == 2);
    CHECK(e.available() == 1);
  }
}

TEST_CASE("mix is a pure function of inputs and seed") {
  const Corpus base = make_corpus("b", 5, 5);
  const Corpus donor = make_corpus("d", 50, 50);
  const MixPlan p{base, {{donor, {10, 10}}}, 21, "m"};
  CHECK(ids(build_mix(p)) == ids(build_mix(p)));
  MixPlan q = p;
  q.seed = 22;
  CHECK(ids(build_mix(p)) != ids(build_mix(q)));
}

TEST_CASE("proportional counts") {
  const Corpus hi = make_corpus("hi", 3338, 1416);
  CHECK(derive_proportional_counts(make_corpus("cm", 1149, 2062), hi, 1416) == LabelCounts{789, 1416});
  const Corpus big = make_corpus("big", 200, 200);
  CHECK(derive_proportional_counts(make_corpus("u", 1, 1), big, 100) == LabelCounts{100, 100});
  CHECK(derive_proportional_counts(make_corpus("h", 1, 2), big, 10) == LabelCounts{5, 10});
  // clamped to the donor's hate count
  CHECK(derive_proportional_counts(make_corpus("s", 10, 1), make_corpus("d", 4, 20), 2) == LabelCounts{4, 2});
  CHECK_THROWS_AS(derive_proportional_counts(make_corpus("s", 1, 1), make_corpus("d", 4, 2), 3),
                  std::invalid_argument);
}

TEST_CASE("ratio modes parse") {
  CHECK(parse_ratio_mode("equal") == RatioMode::Equal);
  CHECK(parse_ratio_mode("base") == RatioMode::Base);
  CHECK_THROWS_AS(parse_ratio_mode("other"), std::invalid_argument);
}

TEST_CASE("batch label counts") {
  const Corpus cm = make_corpus("cm", 1149, 2062);
  SweepPlan p{cm};
  CHECK(batch_label_counts(p) == LabelCounts{100, 100});
  p.ratio_mode = RatioMode::Base;
  CHECK(batch_label_counts(p) == LabelCounts{72, 128});
}

TEST_CASE("sweep step sizes with two donors") {
  const Corpus cm = make_corpus("cm", 1149, 2062);
  const Corpus hi = make_corpus("hi", 3338, 1416);
  const Corpus en = make_corpus("en", 2261, 3591);
  SweepPlan p{cm, 200, 7, RatioMode::Equal, 3};
  const auto steps = build_sweep(p, {en, hi});
  REQUIRE(steps.size() == 7);
  for (std::size_t k = 1; k <= 7; ++k) CHECK(steps[k - 1].size() == cm.size() + 400 * k);
  for (std::size_t k = 1; k < 7; ++k) {
    const auto a = ids(steps[k - 1]);
    const auto b = ids(steps[k]);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("smallest sweep") {
  const Corpus base = make_corpus("b", 3, 3);
  const Corpus donor = make_corpus("d", 5, 5);
  const auto steps = build_sweep({base, 2, 1, RatioMode::Equal, 0}, {donor});
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].counts() == LabelCounts{4, 4});
}

TEST_CASE("sweep fails when donors run dry") {
  const Corpus base = make_corpus("b", 3, 3);
  const Corpus donor = make_corpus("d", 12, 12);
  CHECK_THROWS_AS(build_sweep({base, 10, 3, RatioMode::Equal, 0}, {donor}), InsufficientSamples);
}

TEST_CASE("native-only sets") {
  const Corpus hi = make_corpus("hi", 3338, 1416);
  const Corpus en = make_corpus("en", 2261, 3591);
  CHECK(build_native_only({hi}, 1).counts() == LabelCounts{1416, 1416});
  CHECK(build_native_only({en}, 1).counts() == LabelCounts{2261, 2261});
  const Corpus both = build_native_only({hi, en}, 1);
  CHECK(both.counts() == LabelCounts{1416 + 2261, 1416 + 2261});
  CHECK(both.name() == "native-only");
  const auto a = ids(build_native_only({hi}, 1));
  const auto b = ids(both);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
  const Corpus one_label = make_corpus("x", 3, 0);
  CHECK_THROWS_AS(build_native_only({one_label}, 1), EmptyStratum);
}
