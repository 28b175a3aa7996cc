// SPDX-License-Identifier: Apache-2.0

#include "cmhate/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cmhate/random.hpp"
#include "cmhate/report.hpp"

#ifndef CMHATE_VERSION
#define CMHATE_VERSION "0.0.0"
#endif

namespace cmhate {
namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view toolkit_version() noexcept { return CMHATE_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

void write_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_stamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

// File-system-safe rendering of a set or model name.
std::string slug(const std::string& s) {
  std::string out;
  for (unsigned char c : s) out += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? char(c) : '_';
  return out.empty() ? "_" : out;
}

struct TrainingSet {
  Corpus corpus;
  std::string kind;  // baseline / mix / sweep / native_only
  std::string ratio;
  std::size_t size = 0;
  json plan;
};

struct Split {
  Corpus train, val, test;
};

class RunState {
 public:
  RunState(const ExperimentConfig& config, fs::path dir, std::ostream* log)
      : config_(config), dir_(std::move(dir)), log_(log) {}

  RunSummary execute();

 private:
  void say(const std::string& msg) const {
    if (log_) *log_ << msg << '\n';
  }
  std::vector<TrainingSet> build_sets(const Split& split, const std::map<std::string, Corpus>& donors) const;
  void check_leakage(const Corpus& test, const std::vector<TrainingSet>& sets) const;
  void run_set(const TrainingSet& set, const Split& split);
  void write_jobs(const TrainingSet& set);
  void write_manifest(const std::string& status, const json& extra = json::object()) const;
  void write_results() const;

  const ExperimentConfig& config_;
  fs::path dir_;
  std::ostream* log_;

  std::vector<TokenStream> val_tokens_, test_tokens_;
  std::vector<RunReport> reports_;
  json sets_json_ = json::array();
  json cells_json_ = json::array();
  json selection_json_ = json::array();
  std::vector<std::string> set_names_;
  std::size_t delegated_ = 0;
  std::string stage_ = "setup";
  json split_json_;
};

std::vector<TrainingSet> RunState::build_sets(const Split& split, const std::map<std::string, Corpus>& donors) const {
  std::vector<TrainingSet> sets;
  const Corpus& base = split.train;
  auto donor = [&](const std::string& key) -> const Corpus& { return donors.at(key); };

  switch (config_.kind) {
    case ExperimentKind::BaselineOnly:
      sets.push_back({base, "baseline", "", 0, json{{"kind", "baseline"}}});
      break;
    case ExperimentKind::Exp1Mix: {
      sets.push_back({base, "baseline", "", 0, json{{"kind", "baseline"}}});
      for (const auto& mix : config_.mixes) {
        std::vector<CorpusRef> refs;
        for (const auto& a : mix.additions) refs.push_back(donor(a.corpus));
        MixPlan plan{base, {}, config_.mix_seed, mix.name};
        json adds = json::array();
        for (const auto& a : mix.additions) {
          LabelCounts target;
          switch (a.counts.mode) {
            case CountsSpec::Mode::Explicit: target = a.counts.counts; break;
            case CountsSpec::Mode::Equal: target = derive_equal_counts(refs); break;
            case CountsSpec::Mode::Proportional:
              target = derive_proportional_counts(base, donor(a.corpus), a.counts.nonhate_cap);
              break;
          }
          plan.additions.push_back({donor(a.corpus), target});
          adds.push_back({{"corpus", a.corpus}, {"counts", a.counts.to_json()}, {"resolved", counts_to_json(target)}});
        }
        sets.push_back({build_mix(plan), "mix", "", 0,
                        json{{"kind", "mix"}, {"base", config_.baseline_name}, {"additions", adds}}});
      }
      break;
    }
    case ExperimentKind::Exp2Sweep: {
      std::vector<CorpusRef> refs;
      for (const auto& d : config_.sweep.donors) refs.push_back(donor(d));
      for (auto mode : config_.sweep.ratio_modes) {
        SweepPlan plan{base, config_.sweep.batch_size_per_language, config_.sweep.num_steps, mode, config_.mix_seed};
        auto steps = build_sweep(plan, refs);
        for (std::size_t k = 0; k < steps.size(); ++k) {
          const std::size_t size = (k + 1) * plan.batch_size_per_language;
          const std::string name = "sweep-" + std::string(to_string(mode)) + "-" + std::to_string(size);
          sets.push_back({steps[k].renamed(name), "sweep", std::string(to_string(mode)), size,
                          json{{"kind", "sweep"},
                               {"base", config_.baseline_name},
                               {"donors", config_.sweep.donors},
                               {"ratio_mode", to_string(mode)},
                               {"step", k + 1},
                               {"batch_size_per_language", plan.batch_size_per_language},
                               {"batch_counts", counts_to_json(batch_label_counts(plan))}}});
        }
      }
      break;
    }
    case ExperimentKind::Exp3NativeOnly:
      for (const auto& s : config_.native_sets) {
        std::vector<CorpusRef> refs;
        for (const auto& d : s.donors) refs.push_back(donor(d));
        sets.push_back({build_native_only(refs, config_.mix_seed).renamed(s.name), "native_only", "", 0,
                        json{{"kind", "native_only"}, {"donors", s.donors}}});
      }
      break;
  }
  return sets;
}

void RunState::check_leakage(const Corpus& test, const std::vector<TrainingSet>& sets) const {
  std::unordered_set<std::string> test_ids;
  for (const auto& s : test.samples()) test_ids.insert(s.id);
  for (const auto& set : sets) {
    for (const auto& s : set.corpus.samples()) {
      if (test_ids.contains(s.id)) {
        throw Error("training set '" + set.corpus.name() + "' contains test sample id '" + s.id + "'");
      }
    }
  }
}

void RunState::run_set(const TrainingSet& set, const Split& split) {
  const std::string& set_name = set.corpus.name();
  const fs::path set_dir = dir_ / "cells" / slug(set_name);

  std::vector<TokenStream> train_tokens;
  std::vector<Label> y;
  for (const auto& s : set.corpus.samples()) {
    train_tokens.push_back(tokenize(s.text, config_.features.normalization));
    y.push_back(s.label);
  }
  const FeatureSpace space = FeatureSpace::fit(config_.features, train_tokens);
  fs::create_directories(set_dir);
  space.save(set_dir / "features.json");
  say("set " + set_name + ": " + std::to_string(set.corpus.size()) + " samples, " + std::to_string(space.size()) +
      " features");

  std::vector<Label> val_gold;
  for (const auto& s : split.val.samples()) val_gold.push_back(s.label);

  for (const auto& spec : config_.models) {
    const Weighting w = weighting_for(spec.kind);
    std::vector<SparseVector> x, xv, xt;
    for (const auto& t : train_tokens) x.push_back(vectorize(space, t, w));
    for (const auto& t : test_tokens_) xt.push_back(vectorize(space, t, w));
    const auto candidates = spec.expand_grid();
    if (candidates.size() > 1) {
      for (const auto& t : val_tokens_) xv.push_back(vectorize(space, t, w));
    }

    for (auto seed : config_.seeds) {
      const std::string cell = set_name + "/" + spec.name + "/seed-" + std::to_string(seed);
      stage_ = "cell " + cell;
      ModelSpec chosen = candidates.front();
      if (candidates.size() > 1) {
        double best_f1 = -1.0;
        json tried = json::array();
        for (const auto& cand : candidates) {
          const Model m = train_model(cand, x, y, space.size(), seed);
          std::vector<Label> pred;
          for (const auto& v : xv) pred.push_back(predict(m, v).label);
          const double f1 = score(val_gold, pred).metrics.f1;
          tried.push_back({{"params", cand.to_json()}, {"val_f1", f1}});
          if (f1 > best_f1) {
            best_f1 = f1;
            chosen = cand;
          }
        }
        selection_json_.push_back({{"cell", cell}, {"candidates", tried}, {"chosen", chosen.to_json()}});
      }

      const Model model = train_model(chosen, x, y, space.size(), seed);
      std::vector<PredictionRecord> records;
      for (std::size_t i = 0; i < xt.size(); ++i) {
        records.push_back({split.test[i].id, split.test[i].label, predict(model, xt[i]).label});
      }
      const fs::path cell_dir = set_dir / slug(spec.name) / ("seed-" + std::to_string(seed));
      fs::create_directories(cell_dir);
      {
        std::ofstream out(cell_dir / "predictions.jsonl", std::ios::binary);
        write_predictions(out, records);
      }
      if (config_.save_models) save_model(cell_dir / "model.json", model, "../../features.json");

      reports_.push_back(make_run_report(spec.name, set_name, seed, std::move(records)));
      const auto& m = reports_.back().metrics;
      cells_json_.push_back({{"train_set", set_name},
                             {"model", spec.name},
                             {"seed", seed},
                             {"status", "done"},
                             {"params", chosen.to_json()},
                             {"dir", fs::relative(cell_dir, dir_).generic_string()}});
      say("  " + cell + ": f1=" + format_double(m.f1));
    }
  }
}

void RunState::write_jobs(const TrainingSet& set) {
  const std::string& set_name = set.corpus.name();
  for (const auto& mlm : config_.mlm_models) {
    for (auto seed : config_.seeds) {
      const fs::path job_path = dir_ / "jobs" / slug(set_name) / slug(mlm.name) / ("seed-" + std::to_string(seed) + ".json");
      const fs::path pred_path =
          dir_ / "cells" / slug(set_name) / slug(mlm.name) / ("seed-" + std::to_string(seed)) / "predictions.jsonl";
      ojson job;
      job["format"] = "cmhate.mlm_job";
      job["version"] = 1;
      job["name"] = mlm.name;
      for (const auto& [k, v] : mlm.job.items()) job[k] = v;
      job["seed"] = seed;
      job["train_set"] = set_name;
      job["train"] = (dir_ / "sets" / (slug(set_name) + ".jsonl")).string();
      job["val"] = (dir_ / "data" / "val.jsonl").string();
      job["test"] = (dir_ / "data" / "test.jsonl").string();
      job["predictions_out"] = pred_path.string();
      write_file(job_path, job.dump(2) + "\n");
      cells_json_.push_back({{"train_set", set_name},
                             {"model", mlm.name},
                             {"seed", seed},
                             {"status", "delegated"},
                             {"job", fs::relative(job_path, dir_).generic_string()}});
      ++delegated_;
    }
  }
}

void RunState::write_manifest(const std::string& status, const json& extra) const {
  ojson m;
  m["format"] = "cmhate.run_manifest";
  m["version"] = 1;
  m["toolkit_version"] = toolkit_version();
  m["status"] = status;
  m["config_sha256"] = sha256_hex(config_.canonical.dump());
  m["config"] = config_.canonical;
  m["seeds"] = config_.seeds;
  m["split_seed"] = config_.split_seed;
  m["mix_seed"] = config_.mix_seed;
  m["prng"] = Rng::kAlgorithm;
  m["baseline_set"] = config_.kind == ExperimentKind::Exp1Mix || config_.kind == ExperimentKind::BaselineOnly
                          ? json(config_.baseline_name)
                          : json(nullptr);
  m["hyperparameter_selection"] = selection_json_.empty() ? json("none: fixed hyperparameters") : selection_json_;
  m["sets"] = sets_json_;
  m["cells"] = cells_json_;
  if (!split_json_.is_null()) m["split"] = split_json_;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_file(dir_ / "manifest.json", m.dump(2) + "\n");
}

void RunState::write_results() const { write_file(dir_ / "results.csv", results_csv(reports_)); }

RunSummary RunState::execute() {
  fs::create_directories(dir_);
  write_manifest("running");
  try {
    stage_ = "load";
    std::map<std::string, Corpus> corpora;
    for (const auto& [key, spec] : config_.corpora) corpora.emplace(key, spec.load());

    stage_ = "split";
    auto parts = stratified_split(corpora.at(config_.base), config_.split, config_.split_seed);
    Split split{parts.train.renamed(config_.baseline_name), parts.val.renamed("val"), parts.test.renamed("test")};
    save_jsonl(dir_ / "data" / "train.jsonl", split.train);
    save_jsonl(dir_ / "data" / "val.jsonl", split.val);
    save_jsonl(dir_ / "data" / "test.jsonl", split.test);
    split_json_ = {{"train", counts_to_json(split.train.counts())},
                   {"val", counts_to_json(split.val.counts())},
                   {"test", counts_to_json(split.test.counts())}};
    for (const auto& s : split.val.samples()) val_tokens_.push_back(tokenize(s.text, config_.features.normalization));
    for (const auto& s : split.test.samples()) test_tokens_.push_back(tokenize(s.text, config_.features.normalization));

    stage_ = "mix";
    std::map<std::string, Corpus> donors;
    for (const auto& [key, c] : corpora) {
      if (key != config_.base) donors.emplace(key, c);
    }
    const auto sets = build_sets(split, donors);
    check_leakage(split.test, sets);
    for (const auto& set : sets) {
      const std::string file = slug(set.corpus.name()) + ".jsonl";
      save_jsonl(dir_ / "sets" / file, set.corpus);
      json sidecar{{"name", set.corpus.name()},
                   {"plan", set.plan},
                   {"seed", config_.mix_seed},
                   {"prng", Rng::kAlgorithm},
                   {"counts", counts_to_json(set.corpus.counts())}};
      write_file(dir_ / "sets" / (slug(set.corpus.name()) + ".manifest.json"), sidecar.dump(2) + "\n");
      json entry{{"name", set.corpus.name()},
                 {"kind", set.kind},
                 {"file", "sets/" + file},
                 {"counts", counts_to_json(set.corpus.counts())}};
      if (!set.ratio.empty()) {
        entry["ratio"] = set.ratio;
        entry["size"] = set.size;
      }
      sets_json_.push_back(entry);
      set_names_.push_back(set.corpus.name());
    }
    write_manifest("running");

    for (const auto& set : sets) {
      stage_ = "set " + set.corpus.name();
      run_set(set, split);
      write_jobs(set);
      write_results();
      write_manifest("running");
    }

    stage_ = "report";
    write_results();
    write_manifest("complete");
    if (!reports_.empty()) write_report(dir_);
  } catch (const std::exception& e) {
    try {
      write_results();
      write_manifest("failed", {{"failed_stage", stage_}, {"error", e.what()}});
      write_file(dir_ / "FAILED", stage_ + ": " + e.what() + "\n");
    } catch (const std::exception&) {
    }
    throw RunFailure(dir_, stage_, e.what());
  }
  return {dir_, reports_, set_names_, delegated_};
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  fs::path dir;
  if (options.run_dir) {
    dir = *options.run_dir;
  } else {
    dir = config.output_dir /
          (slug(config.name) + "-" + utc_stamp() + "-" + sha256_hex(config.canonical.dump()).substr(0, 8));
  }
  RunState state(config, dir, options.log);
  return state.execute();
}

void write_report(const fs::path& dir, std::optional<std::string> baseline) {
  const auto reports = parse_results_csv(read_file(dir / "results.csv"));
  if (reports.empty()) throw Error("no results in " + (dir / "results.csv").string());

  std::map<std::string, std::pair<std::string, std::size_t>> sweep_meta;
  const fs::path manifest_path = dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    const json m = json::parse(read_file(manifest_path));
    if (!baseline && m.contains("baseline_set") && m["baseline_set"].is_string()) {
      baseline = m["baseline_set"].get<std::string>();
    }
    for (const auto& s : m.value("sets", json::array())) {
      if (s.contains("ratio")) sweep_meta[s["name"]] = {s["ratio"], s["size"]};
    }
  }

  const auto grid = build_grid(reports, baseline);
  const auto sig = compute_significance(grid);
  const auto art = render_report(grid, sig);
  write_file(dir / "summary.csv", art.csv);
  write_file(dir / "report.md", art.table);

  if (!sweep_meta.empty()) {
    std::vector<SweepPoint> points;
    for (const auto& model : grid.models) {
      for (const auto& set : grid.train_sets) {
        auto meta = sweep_meta.find(set);
        auto cell = grid.cells.find({model, set});
        if (meta == sweep_meta.end() || cell == grid.cells.end()) continue;
        points.push_back({model, meta->second.first, meta->second.second, cell->second});
      }
    }
    write_file(dir / "sweep.csv", sweep_csv(points));
  }
}

}  // namespace cmhate
