// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "cmhate/errors.hpp"
#include "cmhate/eval.hpp"
#include "doctest.h"

using namespace cmhate;

namespace {

constexpr Label H = Label::Hate;
constexpr Label N = Label::NonHate;

RunReport report(std::string model, std::string set, std::uint64_t seed, double f1) {
  RunReport r;
  r.model_name = std::move(model);
  r.train_set_name = std::move(set);
  r.seed = seed;
  r.metrics = {f1, f1, f1, f1};
  return r;
}

}  // namespace

TEST_CASE("perfect predictions") {
  const std::vector<Label> gold{H, N, H, N};
  const auto s = score(gold, gold);
  CHECK(s.metrics == Metrics{1.0, 1.0, 1.0, 1.0});
  CHECK(s.confusion.tp == 2);
  CHECK(s.confusion.tn == 2);
}

TEST_CASE("confusion (3, 1, 2, 4)") {
  const std::vector<Label> gold{H, H, H, N, H, H, N, N, N, N};
  const std::vector<Label> pred{H, H, H, H, N, N, N, N, N, N};
  const auto s = score(gold, pred);
  CHECK(s.confusion.tp == 3);
  CHECK(s.confusion.fp == 1);
  CHECK(s.confusion.fn == 2);
  CHECK(s.confusion.tn == 4);
  CHECK(s.metrics.pre == 0.75);
  CHECK(s.metrics.rec == 0.6);
  CHECK(s.metrics.f1 == doctest::Approx(0.6667).epsilon(1e-4 / 0.6667));
  CHECK(s.metrics.acc == 0.7);
}

TEST_CASE("no hate predicted gives zeros") {
  const std::vector<Label> gold{H, N, H};
  const std::vector<Label> pred{N, N, N};
  const auto m = score(gold, pred).metrics;
  CHECK(m.pre == 0.0);
  CHECK(m.rec == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK(metrics_from({0, 0, 0, 5}).f1 == 0.0);
}

TEST_CASE("score preconditions") {
  const std::vector<Label> a{H, N};
  const std::vector<Label> b{H};
  CHECK_THROWS_AS(score(a, b), LengthMismatch);
  CHECK_THROWS_AS(score({}, {}), std::invalid_argument);
}

TEST_CASE("cell summaries") {
  const auto c = summarize_cell({report("nb", "CM", 1, 0.56), report("nb", "CM", 2, 0.58), report("nb", "CM", 3, 0.60)});
  CHECK(c.mean_f1 == doctest::Approx(0.58));
  CHECK(c.f1_spread == doctest::Approx(0.04));
  CHECK(c.model_name() == "nb");
  CHECK(c.f1_samples() == std::vector<double>{0.56, 0.58, 0.60});
  const auto single = summarize_cell({report("nb", "CM", 1, 0.42)});
  CHECK(single.mean_f1 == 0.42);
  CHECK(single.f1_spread == 0.0);
  CHECK_THROWS_AS(summarize_cell({report("nb", "CM", 1, 0.5), report("svm", "CM", 1, 0.5)}), MixedCell);
  CHECK_THROWS_AS(summarize_cell({report("nb", "CM", 1, 0.5), report("nb", "T1", 1, 0.5)}), MixedCell);
  CHECK_THROWS_AS(summarize_cell({}), std::invalid_argument);
}

TEST_CASE("mean stays within the sample range") {
  const auto c = summarize_cell({report("m", "s", 1, 0.1), report("m", "s", 2, 0.1), report("m", "s", 3, 0.1)});
  CHECK(c.mean_f1 == 0.1);
}

TEST_CASE("run reports compute metrics from per-sample pairs") {
  const auto r = make_run_report("nb", "CM", 4, {{"a", H, H}, {"b", N, H}, {"c", H, N}, {"d", N, N}});
  CHECK(r.metrics.acc == 0.5);
  CHECK(r.metrics.pre == 0.5);
  CHECK(r.per_sample.size() == 4);
}

TEST_CASE("predictions.jsonl round-trip") {
  const std::vector<PredictionRecord> recs{{"a", H, N}, {"b", N, N}};
  std::ostringstream out;
  write_predictions(out, recs);
  CHECK(out.str() == "{\"id\":\"a\",\"gold\":\"hate\",\"pred\":\"non-hate\"}\n"
                     "{\"id\":\"b\",\"gold\":\"non-hate\",\"pred\":\"non-hate\"}\n");
  std::istringstream in(out.str());
  CHECK(read_predictions(in) == recs);
  std::istringstream alt("{\"id\":\"x\",\"gold\":1,\"pred\":\"0\"}\n\n");
  const auto r = read_predictions(alt);
  REQUIRE(r.size() == 1);
  CHECK(r[0].gold == H);
  CHECK(r[0].pred == N);
  std::istringstream bad("{\"id\":\"x\",\"gold\":\"hate\"}\n");
  CHECK_THROWS_AS(read_predictions(bad), MalformedRecord);
}
