// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: one subcommand per pipeline stage plus `run`.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cmhate/cm_metrics.hpp"
#include "cmhate/config.hpp"
#include "cmhate/errors.hpp"
#include "cmhate/eval.hpp"
#include "cmhate/mixer.hpp"
#include "cmhate/model.hpp"
#include "cmhate/random.hpp"
#include "cmhate/report.hpp"
#include "cmhate/runner.hpp"
#include "cmhate/tagger.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cmhate;

namespace {

struct InputArgs {
  std::string path;
  std::string format;
  std::string source = "code-mixed";

  void add(CLI::App* app, const std::string& flag = "--input") {
    app->add_option(flag, path, "Corpus file (JSONL or CSV)")->required()->check(CLI::ExistingFile);
    app->add_option("--format", format, "jsonl or csv (default: by extension)");
    app->add_option("--source", source, "code-mixed, hindi, english or another name");
  }

  Corpus load() const {
    const RecordFormat f = format.empty() ? format_from_extension(path) : parse_record_format(format);
    return load_corpus(path, f, Source::parse(source));
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

TaggerConfig tagger_from(const std::vector<std::string>& lexicons, const std::string& fallback) {
  TaggerConfig tc;
  tc.fallback = fallback;
  for (const auto& spec : lexicons) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("lexicon must be lang=path, got '" + spec + "'");
    tc.lexicons[spec.substr(0, eq)] = load_lexicon(spec.substr(eq + 1));
  }
  return tc;
}

json parse_param_value(const std::string& raw) {
  json v = json::parse(raw, nullptr, false);
  return v.is_discarded() ? json(raw) : v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hate-speech classification toolkit for code-mixed text"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version()));

  // split -------------------------------------------------------------------
  auto* split_cmd = app.add_subcommand("split", "Stratified train/val/test split of one corpus");
  InputArgs split_in;
  split_in.add(split_cmd);
  SplitSpec split_spec;
  std::uint64_t split_seed = 13;
  std::string split_out;
  split_cmd->add_option("--train", split_spec.train_frac, "Train fraction");
  split_cmd->add_option("--val", split_spec.val_frac, "Validation fraction");
  split_cmd->add_option("--test", split_spec.test_frac, "Test fraction");
  split_cmd->add_option("--seed", split_seed, "Shuffle seed");
  split_cmd->add_option("--out-dir", split_out, "Directory for train/val/test.jsonl")->required();

  // mix ---------------------------------------------------------------------
  auto* mix_cmd = app.add_subcommand("mix", "Build training sets from a JSON plan");
  std::string mix_plan, mix_out;
  std::optional<std::uint64_t> mix_seed;
  mix_cmd->add_option("--plan", mix_plan, "Plan file")->required()->check(CLI::ExistingFile);
  mix_cmd->add_option("--seed", mix_seed, "Overrides the plan's seed");
  mix_cmd->add_option("--out-dir", mix_out, "Output directory")->required();

  // cmi ---------------------------------------------------------------------
  auto* cmi_cmd = app.add_subcommand("cmi", "Per-sample and average CMI and burstiness");
  InputArgs cmi_in;
  cmi_in.add(cmi_cmd);
  std::string cmi_out, cmi_summary, cmi_fallback = "hi";
  std::vector<std::string> cmi_lexicons;
  cmi_cmd->add_option("--out", cmi_out, "Per-sample CSV (default: stdout)");
  cmi_cmd->add_option("--summary", cmi_summary, "JSON summary (default: stderr)");
  cmi_cmd->add_option("--lexicon", cmi_lexicons, "lang=path; tags untagged samples heuristically");
  cmi_cmd->add_option("--fallback", cmi_fallback, "Tag for unknown Latin words");

  // tag ---------------------------------------------------------------------
  auto* tag_cmd = app.add_subcommand("tag", "Heuristic word-level language tagging");
  InputArgs tag_in;
  tag_in.add(tag_cmd);
  std::string tag_out, tag_fallback = "hi";
  std::vector<std::string> tag_lexicons;
  tag_cmd->add_option("--lexicon", tag_lexicons, "lang=path word list")->required();
  tag_cmd->add_option("--fallback", tag_fallback, "Tag for unknown Latin words");
  tag_cmd->add_option("--out", tag_out, "Output JSONL")->required();

  // train -------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Fit features and one classifier");
  InputArgs train_in;
  train_in.add(train_cmd);
  std::string train_kind = "nb", train_out, train_name;
  std::vector<std::string> train_params;
  std::vector<int> train_orders{1, 2, 3};
  std::size_t train_min_df = 2;
  bool train_raw = false;
  std::uint64_t train_seed = 0;
  train_cmd->add_option("--model", train_kind, "nb, svm or rf");
  train_cmd->add_option("--name", train_name, "Display name");
  train_cmd->add_option("--param", train_params, "Hyperparameter key=value");
  train_cmd->add_option("--orders", train_orders, "n-gram orders");
  train_cmd->add_option("--min-df", train_min_df, "Minimum document frequency");
  train_cmd->add_flag("--no-normalize", train_raw, "Disable token normalization");
  train_cmd->add_option("--seed", train_seed, "Training seed");
  train_cmd->add_option("--out-dir", train_out, "Writes features.json and model.json")->required();

  // predict -----------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Apply a saved model to a corpus");
  InputArgs predict_in;
  predict_in.add(predict_cmd);
  std::string predict_model, predict_out;
  predict_cmd->add_option("--model", predict_model, "model.json")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict_out, "predictions.jsonl")->required();

  // evaluate ----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a predictions.jsonl file");
  std::string eval_preds, eval_gold, eval_model = "model", eval_set = "train", eval_append;
  std::uint64_t eval_seed = 0;
  eval_cmd->add_option("--predictions", eval_preds, "predictions.jsonl")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--gold", eval_gold, "Corpus whose labels replace the gold field, matched by id")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--model-name", eval_model, "Model name for results.csv");
  eval_cmd->add_option("--train-set", eval_set, "Training set name for results.csv");
  eval_cmd->add_option("--seed", eval_seed, "Seed for results.csv");
  eval_cmd->add_option("--append", eval_append, "results.csv to append the row to");

  // report ------------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Summary table from results.csv");
  std::string report_dir, report_baseline;
  report_cmd->add_option("--results", report_dir, "Directory holding results.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--baseline", report_baseline, "Training set to test improvements against");

  // run ---------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run a whole experiment from a config file");
  std::string run_config, run_dir;
  std::vector<std::string> run_overrides;
  bool run_quiet = false;
  run_cmd->add_option("--config", run_config, "Config or run manifest (JSON)")->required();
  run_cmd->add_option("--set", run_overrides, "Override a config value: dotted.key=value");
  run_cmd->add_option("--out-dir", run_dir, "Exact artifact directory");
  run_cmd->add_flag("--quiet", run_quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*split_cmd) {
      try {
        split_spec.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const Corpus corpus = split_in.load();
      const auto parts = stratified_split(corpus, split_spec, split_seed);
      const fs::path out(split_out);
      save_jsonl(out / "train.jsonl", parts.train);
      save_jsonl(out / "val.jsonl", parts.val);
      save_jsonl(out / "test.jsonl", parts.test);
      json m{{"input", split_in.path},
             {"seed", split_seed},
             {"prng", Rng::kAlgorithm},
             {"fractions", {split_spec.train_frac, split_spec.val_frac, split_spec.test_frac}},
             {"counts",
              {{"train", counts_to_json(parts.train.counts())},
               {"val", counts_to_json(parts.val.counts())},
               {"test", counts_to_json(parts.test.counts())}}}};
      write_text(out / "split.manifest.json", m.dump(2) + "\n");
      std::cout << "train " << parts.train.size() << ", val " << parts.val.size() << ", test " << parts.test.size()
                << '\n';
    } else if (*mix_cmd) {
      std::ifstream in(mix_plan);
      json plan = json::parse(in, nullptr, false);
      if (plan.is_discarded()) throw ConfigError("plan " + mix_plan + " is not valid JSON");
      const auto result = execute_plan(plan, fs::absolute(mix_plan).parent_path(), mix_seed);
      const fs::path out(mix_out);
      for (const auto& c : result.outputs) {
        save_jsonl(out / (c.name() + ".jsonl"), c);
        json sidecar = result.manifest;
        sidecar["name"] = c.name();
        sidecar["counts"] = counts_to_json(c.counts());
        sidecar["prng"] = Rng::kAlgorithm;
        write_text(out / (c.name() + ".manifest.json"), sidecar.dump(2) + "\n");
        std::cout << c.name() << ": " << c.counts().hate << " hate, " << c.counts().non_hate << " non-hate\n";
      }
    } else if (*cmi_cmd) {
      Corpus corpus = cmi_in.load();
      if (!cmi_lexicons.empty()) corpus = tag_corpus(corpus, tagger_from(cmi_lexicons, cmi_fallback));
      std::ostringstream csv;
      csv << "id,cmi,burstiness\n";
      for (const auto& s : corpus.samples()) {
        const auto c = sample_complexity(s);
        csv << s.id << ',' << (c.cmi ? fixed(*c.cmi, 2) : "") << ','
            << (c.burstiness ? fixed(*c.burstiness, 4) : "") << '\n';
      }
      const auto agg = corpus_complexity(corpus);
      const json summary{{"samples", corpus.size()},
                         {"avg_cmi", agg.avg_cmi},
                         {"avg_burstiness", agg.avg_burstiness},
                         {"cmi_samples", agg.cmi_samples},
                         {"burstiness_samples", agg.burstiness_samples},
                         {"skipped", agg.skipped}};
      if (cmi_out.empty()) {
        std::cout << csv.str();
      } else {
        write_text(cmi_out, csv.str());
      }
      if (cmi_summary.empty()) {
        std::cerr << summary.dump(2) << '\n';
      } else {
        write_text(cmi_summary, summary.dump(2) + "\n");
      }
    } else if (*tag_cmd) {
      const Corpus tagged = tag_corpus(tag_in.load(), tagger_from(tag_lexicons, tag_fallback));
      save_jsonl(tag_out, tagged);
    } else if (*train_cmd) {
      json mj{{"kind", train_kind}};
      if (!train_name.empty()) mj["name"] = train_name;
      for (const auto& p : train_params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("param must be key=value, got '" + p + "'");
        mj[p.substr(0, eq)] = parse_param_value(p.substr(eq + 1));
      }
      const ModelSpec spec = ModelSpec::from_json(mj);
      if (!spec.grid.empty()) throw ConfigError("train takes fixed hyperparameters; grids belong in run configs");
      FeatureConfig fc;
      fc.orders = std::set<int>(train_orders.begin(), train_orders.end());
      fc.min_doc_freq = train_min_df;
      if (train_raw) fc.normalization = NormalizationPolicy::none();
      const Corpus corpus = train_in.load();
      std::vector<TokenStream> docs;
      std::vector<Label> y;
      for (const auto& s : corpus.samples()) {
        docs.push_back(tokenize(s.text, fc.normalization));
        y.push_back(s.label);
      }
      const FeatureSpace space = FeatureSpace::fit(fc, docs);
      std::vector<SparseVector> x;
      for (const auto& d : docs) x.push_back(vectorize(space, d, weighting_for(spec.kind)));
      const Model model = train_model(spec, x, y, space.size(), train_seed);
      const fs::path out(train_out);
      fs::create_directories(out);
      space.save(out / "features.json");
      save_model(out / "model.json", model, "features.json");
      std::cout << "trained " << spec.name << " on " << corpus.size() << " samples, " << space.size()
                << " features\n";
    } else if (*predict_cmd) {
      const auto loaded = load_model(predict_model);
      const Corpus corpus = predict_in.load();
      const Weighting w = weighting_for(kind_of(loaded.model));
      const auto& norm = loaded.features.config().normalization;
      std::vector<PredictionRecord> records;
      for (const auto& s : corpus.samples()) {
        const auto v = vectorize(loaded.features, tokenize(s.text, norm), w);
        records.push_back({s.id, s.label, predict(loaded.model, v).label});
      }
      std::ostringstream out;
      write_predictions(out, records);
      write_text(predict_out, out.str());
    } else if (*eval_cmd) {
      auto records = load_predictions(eval_preds);
      if (!eval_gold.empty()) {
        const RecordFormat f = format_from_extension(eval_gold);
        const Corpus gold = load_corpus(eval_gold, f, Source{});
        std::map<std::string, Label> by_id;
        for (const auto& s : gold.samples()) by_id[s.id] = s.label;
        if (by_id.size() != records.size()) throw LengthMismatch(by_id.size(), records.size());
        for (auto& r : records) {
          auto it = by_id.find(r.id);
          if (it == by_id.end()) throw Error("prediction id '" + r.id + "' is not in the gold corpus");
          r.gold = it->second;
        }
      }
      const auto report = make_run_report(eval_model, eval_set, eval_seed, records);
      const auto& m = report.metrics;
      std::cout << json{{"acc", m.acc}, {"pre", m.pre}, {"rec", m.rec}, {"f1", m.f1}, {"n", records.size()}}.dump()
                << '\n';
      if (!eval_append.empty()) {
        const bool fresh = !fs::exists(eval_append) || fs::file_size(eval_append) == 0;
        std::string row = results_csv({report});
        if (!fresh) row = row.substr(row.find('\n') + 1);
        if (const auto parent = fs::path(eval_append).parent_path(); !parent.empty()) fs::create_directories(parent);
        std::ofstream out(eval_append, std::ios::app | std::ios::binary);
        if (!out) throw Error("cannot append to " + eval_append);
        out << row;
      }
    } else if (*report_cmd) {
      write_report(report_dir, report_baseline.empty() ? std::nullopt : std::optional<std::string>(report_baseline));
      std::ifstream in(fs::path(report_dir) / "report.md");
      std::cout << in.rdbuf();
    } else if (*run_cmd) {
      const auto config = load_config(run_config, run_overrides);
      RunOptions opts;
      if (!run_dir.empty()) opts.run_dir = fs::path(run_dir);
      if (!run_quiet) opts.log = &std::cerr;
      const auto summary = run_experiment(config, opts);
      std::cout << summary.run_dir.string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const RunFailure& e) {
    std::cerr << "run failed: " << e.what() << "\npartial artifacts: " << e.run_dir().string() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
