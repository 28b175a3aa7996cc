// SPDX-License-Identifier: Apache-2.0

#include "cmhate/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cmhate/errors.hpp"

namespace cmhate {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T get_as(const json& j, std::string_view key, std::string_view where) {
  try {
    return j.at(std::string(key)).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + std::string(key) + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, std::string_view key, T fallback, std::string_view where) {
  if (!j.contains(std::string(key))) return fallback;
  return get_as<T>(j, key, where);
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base_dir / path;
  return path.lexically_normal();
}

Label parse_label_value(const std::string& s) {
  try {
    return LabelParser().parse(s);
  } catch (const UnknownLabel&) {
    throw ConfigError("label mapping target '" + s + "' is not a label");
  }
}

FeatureConfig parse_features(const json& j) {
  check_keys(j, "features", {"orders", "min_df", "normalize"});
  FeatureConfig fc;
  if (j.contains("orders")) {
    fc.orders.clear();
    for (int o : get_as<std::vector<int>>(j, "orders", "features")) {
      if (o < 1 || o > 3) throw ConfigError("features.orders must lie in {1,2,3}");
      fc.orders.insert(o);
    }
    if (fc.orders.empty()) throw ConfigError("features.orders is empty");
  }
  fc.min_doc_freq = get_or<std::size_t>(j, "min_df", fc.min_doc_freq, "features");
  if (fc.min_doc_freq == 0) throw ConfigError("features.min_df must be >= 1");
  if (j.contains("normalize")) {
    const auto& n = j.at("normalize");
    if (n.is_boolean()) {
      fc.normalization = n.get<bool>() ? NormalizationPolicy{} : NormalizationPolicy::none();
    } else {
      check_keys(n, "features.normalize", {"lowercase", "strip_punctuation", "collapse_urls", "collapse_mentions"});
      auto& p = fc.normalization;
      p.lowercase = get_or(n, "lowercase", p.lowercase, "features.normalize");
      p.strip_punctuation = get_or(n, "strip_punctuation", p.strip_punctuation, "features.normalize");
      p.collapse_urls = get_or(n, "collapse_urls", p.collapse_urls, "features.normalize");
      p.collapse_mentions = get_or(n, "collapse_mentions", p.collapse_mentions, "features.normalize");
    }
  }
  return fc;
}

json features_to_json(const FeatureConfig& fc) {
  const auto& p = fc.normalization;
  return json{{"orders", std::vector<int>(fc.orders.begin(), fc.orders.end())},
              {"min_df", fc.min_doc_freq},
              {"normalize",
               {{"lowercase", p.lowercase},
                {"strip_punctuation", p.strip_punctuation},
                {"collapse_urls", p.collapse_urls},
                {"collapse_mentions", p.collapse_mentions}}}};
}

MlmSpec parse_mlm(const json& j) {
  MlmSpec m;
  m.job = {{"model_id", "xlm-roberta-base"}, {"head", "transformer"},   {"learning_rate", 2e-5},
           {"scheduler_gamma", 0.9},         {"max_epochs", 25},         {"patience", 4},
           {"batch_size", 16}};
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "name") {
      m.name = value.get<std::string>();
    } else {
      m.job[key] = value;
    }
  }
  if (m.name.empty()) m.name = m.job["model_id"].get<std::string>() + "-" + m.job["head"].get<std::string>();
  if (m.job["patience"].get<long>() >= m.job["max_epochs"].get<long>()) {
    throw ConfigError("model '" + m.name + "': patience must be below max_epochs");
  }
  return m;
}

void set_path(json& tree, const std::string& dotted, json value) {
  json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("bad override key '" + dotted + "'");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ConfigError("override '" + dotted + "': '" + part + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + dotted + "': index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object() && !node->is_null()) {
        throw ConfigError("override '" + dotted + "' descends into a scalar");
      }
      node = &(*node)[part];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace

json counts_to_json(const LabelCounts& c) { return json{{"hate", c.hate}, {"non-hate", c.non_hate}}; }

// ---------------------------------------------------------------------------

CorpusSpec CorpusSpec::from_json(const json& j, const fs::path& base_dir) {
  CorpusSpec spec;
  if (j.is_string()) {
    spec.path = resolve(base_dir, j.get<std::string>());
  } else {
    check_keys(j, "corpus", {"path", "format", "source", "labels", "name"});
    spec.path = resolve(base_dir, get_as<std::string>(j, "path", "corpus"));
    if (j.contains("labels")) {
      std::map<std::string, Label> table;
      for (const auto& [raw, target] : j.at("labels").items()) table[raw] = parse_label_value(target.get<std::string>());
      if (table.empty()) throw ConfigError("corpus labels mapping is empty");
      spec.labels = std::move(table);
    }
    spec.name = get_or<std::string>(j, "name", "", "corpus");
    if (j.contains("source")) spec.source = Source::parse(get_as<std::string>(j, "source", "corpus"));
  }
  spec.format = format_from_extension(spec.path);
  if (j.is_object() && j.contains("format")) {
    try {
      spec.format = parse_record_format(get_as<std::string>(j, "format", "corpus"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return spec;
}

json CorpusSpec::to_json() const {
  json j{{"path", path.string()},
         {"format", format == RecordFormat::Csv ? "csv" : "jsonl"},
         {"source", source.to_string()}};
  if (!name.empty()) j["name"] = name;
  if (labels) {
    json m = json::object();
    for (const auto& [raw, label] : *labels) m[raw] = std::string(cmhate::to_string(label));
    j["labels"] = m;
  }
  return j;
}

Corpus CorpusSpec::load() const {
  LoadOptions opts;
  opts.source = source;
  if (labels) opts.labels = LabelParser(*labels);
  if (!name.empty()) opts.name = name;
  return load_corpus(path, format, opts);
}

CountsSpec CountsSpec::from_json(const json& j) {
  CountsSpec c;
  if (j.is_string()) {
    if (j.get<std::string>() != "equal") throw ConfigError("counts must be \"equal\" or an object");
    c.mode = Mode::Equal;
    return c;
  }
  if (!j.is_object()) throw ConfigError("counts must be \"equal\" or an object");
  if (j.contains("nonhate_cap")) {
    check_keys(j, "counts", {"nonhate_cap"});
    c.mode = Mode::Proportional;
    c.nonhate_cap = get_as<std::size_t>(j, "nonhate_cap", "counts");
    return c;
  }
  check_keys(j, "counts", {"hate", "non-hate", "non_hate", "nonhate"});
  c.mode = Mode::Explicit;
  c.counts.hate = get_as<std::size_t>(j, "hate", "counts");
  bool found = false;
  for (const char* k : {"non-hate", "non_hate", "nonhate"}) {
    if (j.contains(k)) {
      c.counts.non_hate = get_as<std::size_t>(j, k, "counts");
      found = true;
    }
  }
  if (!found) throw ConfigError("counts lacks a non-hate entry");
  return c;
}

json CountsSpec::to_json() const {
  switch (mode) {
    case Mode::Equal: return "equal";
    case Mode::Proportional: return json{{"nonhate_cap", nonhate_cap}};
    case Mode::Explicit: break;
  }
  return counts_to_json(counts);
}

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::BaselineOnly: return "baseline_only";
    case ExperimentKind::Exp1Mix: return "exp1_mix";
    case ExperimentKind::Exp2Sweep: return "exp2_sweep";
    case ExperimentKind::Exp3NativeOnly: return "exp3_native_only";
  }
  return "baseline_only";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::BaselineOnly, ExperimentKind::Exp1Mix, ExperimentKind::Exp2Sweep,
                 ExperimentKind::Exp3NativeOnly}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(s) + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  check_keys(j, "config", {"name", "corpora", "base", "baseline_name", "split", "mix_seed", "experiment",
                           "models", "features", "seeds", "output_dir", "save_models"});
  ExperimentConfig c;
  try {
    c.name = get_or<std::string>(j, "name", c.name, "config");
    c.baseline_name = get_or<std::string>(j, "baseline_name", c.baseline_name, "config");
    c.mix_seed = get_or<std::uint64_t>(j, "mix_seed", c.mix_seed, "config");
    c.save_models = get_or<bool>(j, "save_models", false, "config");
    c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", "runs", "config"));

    if (!j.contains("corpora") || !j.at("corpora").is_object() || j.at("corpora").empty()) {
      throw ConfigError("config.corpora must name at least one corpus");
    }
    for (const auto& [key, value] : j.at("corpora").items()) {
      auto spec = CorpusSpec::from_json(value, base_dir);
      if (spec.name.empty()) spec.name = key;
      c.corpora.emplace(key, std::move(spec));
    }
    c.base = get_as<std::string>(j, "base", "config");

    if (j.contains("split")) {
      const auto& s = j.at("split");
      check_keys(s, "split", {"train", "val", "test", "seed"});
      c.split.train_frac = get_or(s, "train", c.split.train_frac, "split");
      c.split.val_frac = get_or(s, "val", c.split.val_frac, "split");
      c.split.test_frac = get_or(s, "test", c.split.test_frac, "split");
      c.split_seed = get_or<std::uint64_t>(s, "seed", c.split_seed, "split");
      try {
        c.split.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("split: ") + e.what());
      }
    }

    const json exp = j.value("experiment", json{{"kind", "baseline_only"}});
    check_keys(exp, "experiment",
               {"kind", "mixes", "donors", "batch_size_per_language", "num_steps", "ratio_modes", "sets"});
    c.kind = parse_experiment_kind(get_as<std::string>(exp, "kind", "experiment"));
    switch (c.kind) {
      case ExperimentKind::BaselineOnly: break;
      case ExperimentKind::Exp1Mix:
        for (const auto& m : exp.at("mixes")) {
          check_keys(m, "mix", {"name", "additions"});
          MixSpec mix;
          mix.name = get_as<std::string>(m, "name", "mix");
          for (const auto& a : m.at("additions")) {
            check_keys(a, "addition", {"corpus", "counts"});
            mix.additions.push_back(
                {get_as<std::string>(a, "corpus", "addition"), CountsSpec::from_json(a.at("counts"))});
          }
          if (mix.additions.empty()) throw ConfigError("mix '" + mix.name + "' has no additions");
          c.mixes.push_back(std::move(mix));
        }
        if (c.mixes.empty()) throw ConfigError("exp1_mix needs at least one mix");
        break;
      case ExperimentKind::Exp2Sweep:
        c.sweep.donors = get_as<std::vector<std::string>>(exp, "donors", "experiment");
        c.sweep.batch_size_per_language =
            get_or(exp, "batch_size_per_language", c.sweep.batch_size_per_language, "experiment");
        c.sweep.num_steps = get_or(exp, "num_steps", c.sweep.num_steps, "experiment");
        if (exp.contains("ratio_modes")) {
          c.sweep.ratio_modes.clear();
          for (const auto& r : get_as<std::vector<std::string>>(exp, "ratio_modes", "experiment")) {
            try {
              c.sweep.ratio_modes.push_back(parse_ratio_mode(r));
            } catch (const std::invalid_argument& e) {
              throw ConfigError(e.what());
            }
          }
        }
        if (c.sweep.donors.empty() || c.sweep.ratio_modes.empty() || c.sweep.num_steps == 0 ||
            c.sweep.batch_size_per_language == 0) {
          throw ConfigError("exp2_sweep needs donors, ratio modes, steps and a batch size");
        }
        break;
      case ExperimentKind::Exp3NativeOnly:
        for (const auto& s : exp.at("sets")) {
          check_keys(s, "native set", {"name", "donors"});
          NativeSetSpec set{get_as<std::string>(s, "name", "native set"),
                            get_as<std::vector<std::string>>(s, "donors", "native set")};
          if (set.donors.empty()) throw ConfigError("native set '" + set.name + "' has no donors");
          c.native_sets.push_back(std::move(set));
        }
        if (c.native_sets.empty()) throw ConfigError("exp3_native_only needs at least one set");
        break;
    }

    if (j.contains("features")) c.features = parse_features(j.at("features"));

    if (!j.contains("models") || !j.at("models").is_array() || j.at("models").empty()) {
      throw ConfigError("config.models must list at least one model");
    }
    std::set<std::string> model_names;
    for (const auto& m : j.at("models")) {
      std::string name;
      if (m.is_object() && m.value("kind", "") == "mlm") {
        c.mlm_models.push_back(parse_mlm(m));
        name = c.mlm_models.back().name;
      } else {
        c.models.push_back(ModelSpec::from_json(m));
        name = c.models.back().name;
      }
      if (!model_names.insert(name).second) throw ConfigError("duplicate model name '" + name + "'");
    }

    c.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds", "config");
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  json canon;
  canon["name"] = c.name;
  json corpora = json::object();
  for (const auto& [key, spec] : c.corpora) corpora[key] = spec.to_json();
  canon["corpora"] = corpora;
  canon["base"] = c.base;
  canon["baseline_name"] = c.baseline_name;
  canon["split"] = {{"train", c.split.train_frac}, {"val", c.split.val_frac}, {"test", c.split.test_frac},
                    {"seed", c.split_seed}};
  canon["mix_seed"] = c.mix_seed;
  json e{{"kind", to_string(c.kind)}};
  if (c.kind == ExperimentKind::Exp1Mix) {
    json mixes = json::array();
    for (const auto& m : c.mixes) {
      json adds = json::array();
      for (const auto& a : m.additions) adds.push_back({{"corpus", a.corpus}, {"counts", a.counts.to_json()}});
      mixes.push_back({{"name", m.name}, {"additions", adds}});
    }
    e["mixes"] = mixes;
  } else if (c.kind == ExperimentKind::Exp2Sweep) {
    e["donors"] = c.sweep.donors;
    e["batch_size_per_language"] = c.sweep.batch_size_per_language;
    e["num_steps"] = c.sweep.num_steps;
    json modes = json::array();
    for (auto r : c.sweep.ratio_modes) modes.push_back(to_string(r));
    e["ratio_modes"] = modes;
  } else if (c.kind == ExperimentKind::Exp3NativeOnly) {
    json sets = json::array();
    for (const auto& s : c.native_sets) sets.push_back({{"name", s.name}, {"donors", s.donors}});
    e["sets"] = sets;
  }
  canon["experiment"] = e;
  canon["features"] = features_to_json(c.features);
  json models = json::array();
  for (const auto& m : c.models) models.push_back(m.to_json());
  for (const auto& m : c.mlm_models) {
    json mj = m.job;
    mj["kind"] = "mlm";
    mj["name"] = m.name;
    models.push_back(mj);
  }
  canon["models"] = models;
  canon["seeds"] = c.seeds;
  canon["output_dir"] = c.output_dir.string();
  canon["save_models"] = c.save_models;
  c.canonical = std::move(canon);
  return c;
}

void ExperimentConfig::validate() const {
  for (const auto& [key, spec] : corpora) {
    if (!fs::is_regular_file(spec.path)) {
      throw ConfigError("corpus '" + key + "' refers to missing file " + spec.path.string());
    }
  }
  auto require = [&](const std::string& key, const std::string& where) {
    if (!corpora.contains(key)) throw ConfigError(where + " refers to unknown corpus '" + key + "'");
  };
  require(base, "base");
  std::set<std::string> names{baseline_name};
  auto unique_name = [&](const std::string& n) {
    if (n.empty()) throw ConfigError("training set names must not be empty");
    if (!names.insert(n).second) throw ConfigError("duplicate training set name '" + n + "'");
  };
  for (const auto& m : mixes) {
    unique_name(m.name);
    for (const auto& a : m.additions) require(a.corpus, "mix '" + m.name + "'");
  }
  for (const auto& d : sweep.donors) require(d, "sweep");
  for (const auto& s : native_sets) {
    unique_name(s.name);
    for (const auto& d : s.donors) require(d, "native set '" + s.name + "'");
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
}

void apply_overrides(json& tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq);
    const std::string raw = o.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    set_path(tree, key, std::move(value));
  }
}

ExperimentConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  json tree = read_json_file(path);
  if (tree.is_object() && tree.value("format", "") == "cmhate.run_manifest") {
    if (!tree.contains("config")) throw ConfigError("manifest has no config");
    tree = tree.at("config");
  }
  apply_overrides(tree, overrides);
  auto config = ExperimentConfig::from_json(tree, fs::absolute(path).parent_path());
  config.validate();
  return config;
}

// ---------------------------------------------------------------------------

PlanResult execute_plan(const json& plan, const fs::path& base_dir, std::optional<std::uint64_t> seed_override) {
  if (!plan.is_object()) throw ConfigError("plan must be an object");
  const std::string kind = plan.value("kind", "mix");
  const std::uint64_t seed = seed_override ? *seed_override : plan.value<std::uint64_t>("seed", 0);

  auto load_spec = [&](const json& j) {
    const auto spec = CorpusSpec::from_json(j, base_dir);
    if (!fs::is_regular_file(spec.path)) throw ConfigError("plan refers to missing file " + spec.path.string());
    return spec;
  };

  PlanResult result;
  json canonical_plan = plan;
  canonical_plan["kind"] = kind;
  canonical_plan["seed"] = seed;

  if (kind == "mix") {
    check_keys(plan, "plan", {"kind", "name", "seed", "base", "additions"});
    const auto base_spec = load_spec(plan.at("base"));
    std::vector<CorpusSpec> donor_specs;
    std::vector<CountsSpec> counts;
    for (const auto& a : plan.at("additions")) {
      check_keys(a, "addition", {"corpus", "counts"});
      donor_specs.push_back(load_spec(a.at("corpus")));
      counts.push_back(CountsSpec::from_json(a.at("counts")));
    }
    const Corpus base = base_spec.load();
    std::vector<Corpus> donors;
    for (const auto& s : donor_specs) donors.push_back(s.load());
    std::vector<CorpusRef> refs(donors.begin(), donors.end());
    MixPlan mp{base, {}, seed, plan.value("name", "")};
    for (std::size_t i = 0; i < donors.size(); ++i) {
      LabelCounts target;
      switch (counts[i].mode) {
        case CountsSpec::Mode::Explicit: target = counts[i].counts; break;
        case CountsSpec::Mode::Equal: target = derive_equal_counts(refs); break;
        case CountsSpec::Mode::Proportional:
          target = derive_proportional_counts(base, donors[i], counts[i].nonhate_cap);
          break;
      }
      mp.additions.push_back({donors[i], target});
    }
    result.outputs.push_back(build_mix(mp));
  } else if (kind == "sweep") {
    check_keys(plan, "plan", {"kind", "name", "seed", "base", "donors", "batch_size_per_language", "num_steps",
                              "ratio_mode"});
    const Corpus base = load_spec(plan.at("base")).load();
    std::vector<Corpus> donors;
    for (const auto& d : plan.at("donors")) donors.push_back(load_spec(d).load());
    std::vector<CorpusRef> refs(donors.begin(), donors.end());
    SweepPlan sp{base};
    sp.batch_size_per_language = plan.value<std::size_t>("batch_size_per_language", 200);
    sp.num_steps = plan.value<std::size_t>("num_steps", 7);
    sp.ratio_mode = parse_ratio_mode(plan.value("ratio_mode", "equal"));
    sp.seed = seed;
    result.outputs = build_sweep(sp, refs);
  } else if (kind == "native_only") {
    check_keys(plan, "plan", {"kind", "name", "seed", "donors"});
    std::vector<Corpus> donors;
    for (const auto& d : plan.at("donors")) donors.push_back(load_spec(d).load());
    std::vector<CorpusRef> refs(donors.begin(), donors.end());
    Corpus out = build_native_only(refs, seed);
    if (plan.contains("name")) out = out.renamed(plan.at("name").get<std::string>());
    result.outputs.push_back(std::move(out));
  } else {
    throw ConfigError("unknown plan kind '" + kind + "'");
  }

  json outputs = json::array();
  for (const auto& c : result.outputs) outputs.push_back({{"name", c.name()}, {"counts", counts_to_json(c.counts())}});
  result.manifest = {{"plan", canonical_plan}, {"seed", seed}, {"outputs", outputs}};
  return result;
}

}  // namespace cmhate
