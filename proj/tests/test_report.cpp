// SPDX-License-Identifier: Apache-2.0

#include "cmhate/report.hpp"
#include "doctest.h"

using namespace cmhate;

namespace {

RunReport rr(std::string model, std::string set, std::uint64_t seed, double f1) {
  RunReport r;
  r.model_name = std::move(model);
  r.train_set_name = std::move(set);
  r.seed = seed;
  r.metrics = {0.5, 0.5, 0.5, f1};
  return r;
}

std::vector<RunReport> sample_reports() {
  return {rr("nb", "CM", 1, 0.50), rr("nb", "CM", 2, 0.52), rr("nb", "CM", 3, 0.51),
          rr("nb", "T1", 1, 0.60), rr("nb", "T1", 2, 0.62), rr("nb", "T1", 3, 0.61),
          rr("svm", "CM", 1, 0.55), rr("svm", "CM", 2, 0.56), rr("svm", "CM", 3, 0.54),
          rr("svm", "T1", 1, 0.50), rr("svm", "T1", 2, 0.58), rr("svm", "T1", 3, 0.54)};
}

}  // namespace

TEST_CASE("grid keeps first-appearance order and defaults the baseline") {
  const auto g = build_grid(sample_reports());
  CHECK(g.models == std::vector<std::string>{"nb", "svm"});
  CHECK(g.train_sets == std::vector<std::string>{"CM", "T1"});
  CHECK(g.baseline_set == "CM");
  CHECK(g.cells.size() == 4);
  CHECK(build_grid(sample_reports(), "T1").baseline_set == "T1");
}

TEST_CASE("single cell is the best cell") {
  const auto g = build_grid({rr("nb", "CM", 1, 0.3)});
  CHECK(best_cells(g) == std::vector<CellKey>{{"nb", "CM"}});
}

TEST_CASE("best cells per training set, ties all flagged") {
  auto reports = sample_reports();
  CHECK(best_cells(build_grid(reports)) == std::vector<CellKey>{{"svm", "CM"}, {"nb", "T1"}});
  const auto tie = build_grid({rr("a", "S", 1, 0.4), rr("b", "S", 1, 0.4)});
  CHECK(best_cells(tie).size() == 2);
}

TEST_CASE("star threshold is strict") {
  const auto g = build_grid(sample_reports());
  std::map<CellKey, double> sig{{{"nb", "T1"}, 0.03}};
  CHECK(is_starred(g, {"nb", "T1"}, sig));
  sig[{"nb", "T1"}] = 0.05;
  CHECK_FALSE(is_starred(g, {"nb", "T1"}, sig));
  sig[{"nb", "T1"}] = 0.0499999;
  CHECK(is_starred(g, {"nb", "T1"}, sig));
  CHECK_FALSE(is_starred(g, {"svm", "T1"}, {{{"svm", "T1"}, 0.01}}));  // no improvement
  CHECK_FALSE(is_starred(g, {"nb", "T1"}, {}));
}

TEST_CASE("significance against the baseline column") {
  const auto g = build_grid(sample_reports());
  const auto sig = compute_significance(g);
  CHECK(sig.size() == 2);
  CHECK_FALSE(sig.contains({"nb", "CM"}));
  CHECK(sig.at({"nb", "T1"}) < 0.05);
  CHECK(sig.at({"svm", "T1"}) > 0.05);
  const auto single_seed = build_grid({rr("nb", "CM", 1, 0.5), rr("nb", "T1", 1, 0.6)});
  CHECK(compute_significance(single_seed).empty());
  const auto flat = build_grid({rr("nb", "CM", 1, 0.5), rr("nb", "CM", 2, 0.5), rr("nb", "T1", 1, 0.6),
                                rr("nb", "T1", 2, 0.6)});
  CHECK(compute_significance(flat).empty());
}

TEST_CASE("rendered summary") {
  const auto g = build_grid(sample_reports());
  const auto art = render_report(g, compute_significance(g));
  CHECK(art.csv.rfind("model,train_set,n_seeds,mean_acc,mean_pre,mean_rec,mean_f1,f1_spread,p_vs_baseline,test,best,starred\n", 0) == 0);
  CHECK(art.csv.find("nb,CM,3,0.5,0.5,0.5,0.51,") != std::string::npos);
  CHECK(art.csv.find(",welch_two_tailed,1,1\n") != std::string::npos);  // nb on T1: best and starred
  CHECK(art.table.find("**0.61*** (0.02)") != std::string::npos);
  CHECK(art.table.find("**0.55** (0.02)") != std::string::npos);
}

TEST_CASE("results.csv round-trip") {
  const auto reports = sample_reports();
  const std::string csv = results_csv(reports);
  CHECK(csv.rfind("model,train_set,seed,acc,pre,rec,f1\nnb,CM,1,0.5,0.5,0.5,0.5\n", 0) == 0);
  const auto back = parse_results_csv(csv);
  REQUIRE(back.size() == reports.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].model_name == reports[i].model_name);
    CHECK(back[i].metrics == reports[i].metrics);
  }
  CHECK(results_csv(back) == csv);
  CHECK(results_csv({rr("a,b", "x", 1, 0.1)}).find("\"a,b\"") != std::string::npos);
  CHECK(parse_results_csv(results_csv({rr("a,b", "x", 1, 0.1)}))[0].model_name == "a,b");
}

TEST_CASE("shortest round-trip number format") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0 / 3.0) == "0.6666666666666666");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("sweep layout") {
  std::vector<SweepPoint> pts;
  for (std::size_t size : {400, 200}) {
    for (const char* ratio : {"equal", "base"}) {
      pts.push_back({"svm", ratio, size, summarize_cell({rr("svm", std::string(ratio) + std::to_string(size), 1, 0.5)})});
    }
  }
  const std::string csv = sweep_csv(pts);
  CHECK(csv.rfind("model,ratio,score,200,400\n", 0) == 0);
  CHECK(csv.find("svm,equal,ACC,0.5,0.5\nsvm,equal,F1,0.5,0.5\nsvm,equal,PRE,0.5,0.5\nsvm,equal,REC,0.5,0.5\n") !=
        std::string::npos);
  CHECK(csv.find("svm,base,REC") != std::string::npos);
}
