// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>

#include "cmhate/corpus.hpp"
#include "cmhate/eval.hpp"
#include "cmhate/report.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace cmhate;
using cmhate::testing::read_file;
using cmhate::testing::synthetic_corpus;
using cmhate::testing::TempDir;
using cmhate::testing::write_file;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CMHATE_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Workspace {
  TempDir dir{"cli"};
  Workspace() {
    save_jsonl(dir / "cm.jsonl", synthetic_corpus({"cm", 60, 90, 0.4, 11}));
    save_jsonl(dir / "hi.jsonl", synthetic_corpus({"hi", 50, 40, 0.0, 12}));
    save_jsonl(dir / "en.jsonl", synthetic_corpus({"en", 40, 60, 1.0, 13}));
  }
  std::string p(const std::string& rel) const { return (dir / rel).string(); }
  fs::path log() const { return dir / "log.txt"; }
};

}  // namespace

TEST_CASE("mix run twice gives identical files") {
  Workspace w;
  write_file(w.dir / "train1.json", R"({"kind": "mix", "name": "Train-1",
      "base": "cm.jsonl",
      "additions": [{"corpus": {"path": "hi.jsonl", "source": "hindi"}, "counts": "equal"},
                    {"corpus": {"path": "en.jsonl", "source": "english"}, "counts": "equal"}]})");
  REQUIRE(cli("mix --plan " + w.p("train1.json") + " --seed 7 --out-dir " + w.p("a"), w.log()) == 0);
  REQUIRE(cli("mix --plan " + w.p("train1.json") + " --seed 7 --out-dir " + w.p("b"), w.log()) == 0);
  CHECK(read_file(w.dir / "a" / "Train-1.jsonl") == read_file(w.dir / "b" / "Train-1.jsonl"));
  CHECK(read_file(w.dir / "a" / "Train-1.manifest.json") == read_file(w.dir / "b" / "Train-1.manifest.json"));
  const json m = json::parse(read_file(w.dir / "a" / "Train-1.manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["counts"] == json({{"hate", 60 + 40 + 40}, {"non-hate", 90 + 40 + 40}}));
  REQUIRE(cli("mix --plan " + w.p("train1.json") + " --seed 8 --out-dir " + w.p("c"), w.log()) == 0);
  CHECK(read_file(w.dir / "a" / "Train-1.jsonl") != read_file(w.dir / "c" / "Train-1.jsonl"));
}

TEST_CASE("split writes three parts and a manifest") {
  Workspace w;
  REQUIRE(cli("split --input " + w.p("cm.jsonl") + " --seed 3 --out-dir " + w.p("s"), w.log()) == 0);
  const auto test = load_corpus(w.dir / "s" / "test.jsonl", RecordFormat::Jsonl, Source{});
  CHECK(test.counts() == LabelCounts{9, 13});
  const json m = json::parse(read_file(w.dir / "s" / "split.manifest.json"));
  CHECK(m["counts"]["train"] == json({{"hate", 42}, {"non-hate", 64}}));
  CHECK(cli("split --input " + w.p("cm.jsonl") + " --train 0.9 --out-dir " + w.p("s2"), w.log()) == 1);
}

TEST_CASE("cmi reports per-sample rows and a summary") {
  Workspace w;
  REQUIRE(cli("cmi --input " + w.p("cm.jsonl") + " --out " + w.p("cmi.csv") + " --summary " + w.p("cmi.json"),
              w.log()) == 0);
  const std::string csv = read_file(w.dir / "cmi.csv");
  CHECK(csv.rfind("id,cmi,burstiness\ncm-0,", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 151);
  const json s = json::parse(read_file(w.dir / "cmi.json"));
  CHECK(s["samples"] == 150);
  CHECK(s["avg_cmi"].get<double>() > 0.0);
  CHECK(s["avg_cmi"].get<double>() <= 50.0);
}

TEST_CASE("tag fills in language tags") {
  Workspace w;
  write_file(w.dir / "raw.csv", "id,text,label\nr1,\"the kal 42\",hate\n");
  write_file(w.dir / "en.txt", "the\n");
  REQUIRE(cli("tag --input " + w.p("raw.csv") + " --lexicon en=" + w.p("en.txt") + " --out " + w.p("tagged.jsonl"),
              w.log()) == 0);
  const auto c = load_corpus(w.dir / "tagged.jsonl", RecordFormat::Jsonl, Source{});
  CHECK(c[0].lang_tags == std::vector<LangTag>{LangTag::lang("en"), LangTag::lang("hi"), LangTag::independent()});
}

TEST_CASE("train, predict, evaluate and report") {
  Workspace w;
  REQUIRE(cli("split --input " + w.p("cm.jsonl") + " --seed 3 --out-dir " + w.p("s"), w.log()) == 0);
  for (const char* kind : {"nb", "svm", "rf"}) {
    CAPTURE(kind);
    const std::string out = w.p(std::string("m-") + kind);
    REQUIRE(cli("train --input " + w.p("s/train.jsonl") + " --model " + kind + " --param num_trees=5 --seed 1 --out-dir " +
                    out,
                w.log()) == (std::string(kind) == "rf" ? 0 : 1));
    if (std::string(kind) != "rf") {
      REQUIRE(cli("train --input " + w.p("s/train.jsonl") + " --model " + kind + " --seed 1 --out-dir " + out, w.log()) == 0);
    }
    REQUIRE(cli("predict --model " + out + "/model.json --input " + w.p("s/test.jsonl") + " --out " + out +
                    "/predictions.jsonl",
                w.log()) == 0);
    const auto preds = load_predictions(out + "/predictions.jsonl");
    CHECK(preds.size() == 22);
    for (std::uint64_t seed : {1, 2}) {
      REQUIRE(cli("evaluate --predictions " + out + "/predictions.jsonl --model-name " + kind +
                      " --train-set CM --seed " + std::to_string(seed) + " --append " + w.p("res/results.csv"),
                  w.log()) == 0);
    }
    const json metrics = json::parse(read_file(w.log()));
    std::vector<Label> gold, pred;
    for (const auto& r : preds) {
      gold.push_back(r.gold);
      pred.push_back(r.pred);
    }
    CHECK(metrics["f1"].get<double>() == score(gold, pred).metrics.f1);
  }
  const auto rows = parse_results_csv(read_file(w.dir / "res" / "results.csv"));
  CHECK(rows.size() == 6);
  REQUIRE(cli("report --results " + w.p("res"), w.log()) == 0);
  CHECK(fs::exists(w.dir / "res" / "summary.csv"));
  CHECK(read_file(w.log()).find("| nb |") != std::string::npos);
}

TEST_CASE("evaluate scores externally produced predictions with gold from the test split") {
  Workspace w;
  REQUIRE(cli("split --input " + w.p("cm.jsonl") + " --seed 3 --out-dir " + w.p("s"), w.log()) == 0);
  const auto test = load_corpus(w.dir / "s" / "test.jsonl", RecordFormat::Jsonl, Source{});
  std::string lines;
  for (const auto& s : test.samples()) lines += json{{"id", s.id}, {"pred", "hate"}, {"gold", "non-hate"}}.dump() + "\n";
  write_file(w.dir / "ext.jsonl", lines);
  REQUIRE(cli("evaluate --predictions " + w.p("ext.jsonl") + " --gold " + w.p("s/test.jsonl"), w.log()) == 0);
  const json m = json::parse(read_file(w.log()));
  CHECK(m["rec"] == 1.0);
  CHECK(m["pre"].get<double>() == doctest::Approx(9.0 / 22.0));
  write_file(w.dir / "bad.jsonl", "{\"id\":\"x\"}\n");
  CHECK(cli("evaluate --predictions " + w.p("bad.jsonl"), w.log()) == 2);
}

TEST_CASE("run: overrides, exact directory and exit codes") {
  Workspace w;
  const json config = json::parse(R"({
    "name": "cli-run",
    "corpora": {"cm": {"path": "cm.jsonl"}, "hi": {"path": "hi.jsonl"}, "en": {"path": "en.jsonl"}},
    "base": "cm",
    "experiment": {"kind": "exp1_mix", "mixes": [
      {"name": "Train-1", "additions": [{"corpus": "hi", "counts": "equal"}, {"corpus": "en", "counts": "equal"}]}]},
    "features": {"orders": [1], "min_df": 1},
    "models": [{"kind": "nb"}],
    "seeds": [1, 2]
  })");
  write_file(w.dir / "config.json", config.dump(2));
  REQUIRE(cli("run --quiet --config " + w.p("config.json") + " --set 'seeds=[3,4,5]' --out-dir " + w.p("run"), w.log()) ==
          0);
  CHECK(parse_results_csv(read_file(w.dir / "run" / "results.csv")).size() == 6);
  const json manifest = json::parse(read_file(w.dir / "run" / "manifest.json"));
  CHECK(manifest["seeds"] == json({3, 4, 5}));

  REQUIRE(cli("run --quiet --config " + w.p("run/manifest.json") + " --out-dir " + w.p("rerun"), w.log()) == 0);
  CHECK(read_file(w.dir / "run" / "results.csv") == read_file(w.dir / "rerun" / "results.csv"));

  CHECK(cli("run --config " + w.p("missing.json"), w.log()) == 1);
  CHECK(cli("run --config " + w.p("config.json") + " --set corpora.hi.path=gone.jsonl", w.log()) == 1);
  CHECK(cli("run --config " + w.p("config.json") + " --set 'seeds=[]'", w.log()) == 1);
  CHECK(cli("frobnicate", w.log()) == 1);
  CHECK(cli("run", w.log()) == 1);
  CHECK(cli("run --quiet --config " + w.p("config.json") +
                " --set 'experiment.mixes.0.additions.0.counts={\"hate\":999,\"non-hate\":1}' --out-dir " + w.p("bad"),
            w.log()) == 2);
  CHECK(fs::exists(w.dir / "bad" / "FAILED"));
}
