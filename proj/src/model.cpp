// SPDX-License-Identifier: Apache-2.0

#include "cmhate/model.hpp"

#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "cmhate/errors.hpp"

namespace cmhate {
namespace {

constexpr std::string_view kFormat = "cmhate.model";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

nlohmann::json tree_to_json(const DecisionTree& t) {
  // Parallel arrays keep large forests compact.
  std::vector<std::int32_t> feature, left, right;
  std::vector<double> threshold;
  std::vector<std::size_t> hate, non_hate;
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    hate.push_back(n.votes[0]);
    non_hate.push_back(n.votes[1]);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"hate", hate},           {"non_hate", non_hate}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
  const auto feature = j.at("feature").get<std::vector<std::int32_t>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<std::int32_t>>();
  const auto right = j.at("right").get<std::vector<std::int32_t>>();
  const auto hate = j.at("hate").get<std::vector<std::size_t>>();
  const auto non_hate = j.at("non_hate").get<std::vector<std::size_t>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || hate.size() != n ||
      non_hate.size() != n) {
    throw Error("tree arrays have inconsistent lengths");
  }
  DecisionTree t;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node = {feature[i], threshold[i], left[i], right[i], {hate[i], non_hate[i]}};
    const bool leaf = node.left < 0;
    if (!leaf && (node.left >= static_cast<std::int32_t>(n) || node.right < 0 ||
                  node.right >= static_cast<std::int32_t>(n) || node.feature < 0)) {
      throw Error("tree node references are out of range");
    }
  }
  return t;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::NaiveBayes: return "nb";
    case ModelKind::LinearSvm: return "svm";
    case ModelKind::RandomForest: return "rf";
  }
  return "nb";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "nb" || s == "naive_bayes" || s == "NaiveBayes") return ModelKind::NaiveBayes;
  if (s == "svm" || s == "linear_svm" || s == "SVM") return ModelKind::LinearSvm;
  if (s == "rf" || s == "random_forest" || s == "RF") return ModelKind::RandomForest;
  throw std::invalid_argument("unknown model kind '" + std::string(s) + "'");
}

Weighting weighting_for(ModelKind kind) noexcept {
  return kind == ModelKind::NaiveBayes ? Weighting::Count : Weighting::L2NormalizedTF;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model entry must be an object");
  ModelSpec s;
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("model entry needs a kind");
  try {
    s.kind = parse_model_kind(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  static const std::map<ModelKind, std::set<std::string>> kParams{
      {ModelKind::NaiveBayes, {"alpha"}},
      {ModelKind::LinearSvm, {"lambda", "epochs", "eta0"}},
      {ModelKind::RandomForest, {"num_trees", "max_features"}}};
  const auto& params = kParams.at(s.kind);
  for (const auto& [key, value] : j.items()) {
    if (key == "kind" || key == "name" || key == "grid") continue;
    if (!params.contains(key)) {
      throw ConfigError("'" + key + "' is not a " + std::string(to_string(s.kind)) + " hyperparameter");
    }
  }
  s.name = j.value("name", std::string(to_string(s.kind)));
  s.alpha = j.value("alpha", s.alpha);
  s.lambda = j.value("lambda", s.lambda);
  s.epochs = j.value("epochs", s.epochs);
  s.eta0 = j.value("eta0", s.eta0);
  s.num_trees = j.value("num_trees", s.num_trees);
  s.max_features = j.value("max_features", s.max_features);
  if (auto it = j.find("grid"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("model grid must be an object");
    for (const auto& [key, values] : it->items()) {
      if (!params.contains(key)) throw ConfigError("grid key '" + key + "' is not a hyperparameter of this model");
      if (!values.is_array() || values.empty()) throw ConfigError("grid '" + key + "' needs a value list");
      s.grid[key] = values.get<std::vector<double>>();
    }
  }
  return s;
}

std::vector<ModelSpec> ModelSpec::expand_grid() const {
  std::vector<ModelSpec> out{*this};
  out.front().grid.clear();
  for (const auto& [key, values] : grid) {
    std::vector<ModelSpec> next;
    for (const auto& base : out) {
      for (double v : values) {
        ModelSpec s = base;
        if (key == "alpha") s.alpha = v;
        else if (key == "lambda") s.lambda = v;
        else if (key == "eta0") s.eta0 = v;
        else if (key == "epochs") s.epochs = static_cast<std::size_t>(v);
        else if (key == "num_trees") s.num_trees = static_cast<std::size_t>(v);
        else if (key == "max_features") s.max_features = static_cast<std::size_t>(v);
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  return out;
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)}, {"name", name}};
  switch (kind) {
    case ModelKind::NaiveBayes: j["alpha"] = alpha; break;
    case ModelKind::LinearSvm:
      j["lambda"] = lambda;
      j["epochs"] = epochs;
      j["eta0"] = eta0;
      break;
    case ModelKind::RandomForest:
      j["num_trees"] = num_trees;
      j["max_features"] = max_features;
      break;
  }
  return j;
}

ModelKind kind_of(const Model& m) noexcept {
  return std::visit(Overloaded{[](const NBModel&) { return ModelKind::NaiveBayes; },
                               [](const SVMModel&) { return ModelKind::LinearSvm; },
                               [](const RFModel&) { return ModelKind::RandomForest; }},
                    m);
}

Model train_model(const ModelSpec& spec, std::span<const SparseVector> x, std::span<const Label> y,
                  std::size_t num_features, std::uint64_t seed) {
  switch (spec.kind) {
    case ModelKind::NaiveBayes: return nb_train(x, y, num_features, spec.alpha);
    case ModelKind::LinearSvm:
      return svm_train(x, y, num_features, SVMParams{spec.lambda, spec.epochs, spec.eta0, seed});
    case ModelKind::RandomForest:
      return rf_train(x, y, num_features, RFParams{spec.num_trees, spec.max_features, true, seed});
  }
  throw std::logic_error("unreachable model kind");
}

Prediction predict(const Model& model, const SparseVector& x) {
  return std::visit(Overloaded{[&](const NBModel& m) { return nb_predict(m, x); },
                               [&](const SVMModel& m) { return svm_predict(m, x); },
                               [&](const RFModel& m) { return rf_predict(m, x); }},
                    model);
}

nlohmann::json model_to_json(const Model& model, const std::string& feature_space_ref) {
  nlohmann::json body = std::visit(
      Overloaded{
          [](const NBModel& m) -> nlohmann::json {
            return {{"alpha", m.alpha},
                    {"class_log_priors", {m.class_log_priors[0], m.class_log_priors[1]}},
                    {"feature_log_likelihoods",
                     {m.feature_log_likelihoods[0], m.feature_log_likelihoods[1]}}};
          },
          [](const SVMModel& m) -> nlohmann::json {
            return {{"weights", m.weights},   {"bias", m.bias},
                    {"lambda", m.lambda},     {"epochs", m.epochs},
                    {"eta0", m.eta0},         {"seed", m.seed},
                    {"epoch_objectives", m.epoch_objectives}, {"best_epoch", m.best_epoch}};
          },
          [](const RFModel& m) -> nlohmann::json {
            auto trees = nlohmann::json::array();
            for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
            return {{"num_trees", m.num_trees}, {"max_features", m.max_features},
                    {"bootstrap", m.bootstrap}, {"seed", m.seed},
                    {"num_features", m.num_features}, {"trees", std::move(trees)}};
          }},
      model);
  return {{"format", kFormat},
          {"version", kModelFormatVersion},
          {"kind", to_string(kind_of(model))},
          {"feature_space", feature_space_ref},
          {"model", std::move(body)}};
}

std::string feature_space_ref(const nlohmann::json& j) { return j.at("feature_space").get<std::string>(); }

Model model_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kFormat) throw Error("not a model file");
  if (j.at("version").get<int>() != kModelFormatVersion) throw Error("unsupported model version");
  const auto& b = j.at("model");
  switch (parse_model_kind(j.at("kind").get<std::string>())) {
    case ModelKind::NaiveBayes: {
      NBModel m;
      m.alpha = b.at("alpha").get<double>();
      const auto priors = b.at("class_log_priors").get<std::vector<double>>();
      const auto ll = b.at("feature_log_likelihoods").get<std::vector<std::vector<double>>>();
      if (priors.size() != 2 || ll.size() != 2 || ll[0].size() != ll[1].size()) {
        throw Error("malformed naive Bayes tables");
      }
      m.class_log_priors = {priors[0], priors[1]};
      m.feature_log_likelihoods = {ll[0], ll[1]};
      return m;
    }
    case ModelKind::LinearSvm: {
      SVMModel m;
      m.weights = b.at("weights").get<std::vector<double>>();
      m.bias = b.at("bias").get<double>();
      m.lambda = b.at("lambda").get<double>();
      m.epochs = b.at("epochs").get<std::size_t>();
      m.eta0 = b.at("eta0").get<double>();
      m.seed = b.at("seed").get<std::uint64_t>();
      m.epoch_objectives = b.at("epoch_objectives").get<std::vector<double>>();
      m.best_epoch = b.at("best_epoch").get<std::size_t>();
      return m;
    }
    case ModelKind::RandomForest: {
      RFModel m;
      m.num_trees = b.at("num_trees").get<std::size_t>();
      m.max_features = b.at("max_features").get<std::size_t>();
      m.bootstrap = b.at("bootstrap").get<bool>();
      m.seed = b.at("seed").get<std::uint64_t>();
      m.num_features = b.at("num_features").get<std::size_t>();
      for (const auto& t : b.at("trees")) m.trees.push_back(tree_from_json(t));
      return m;
    }
  }
  throw std::logic_error("unreachable model kind");
}

void save_model(const std::filesystem::path& path, const Model& model, const std::string& feature_space_ref) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << model_to_json(model, feature_space_ref).dump() << '\n';
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model '" + path.string() + "'");
  const auto j = nlohmann::json::parse(in);
  std::filesystem::path fs_path = feature_space_ref(j);
  if (fs_path.is_relative()) fs_path = path.parent_path() / fs_path;
  return {model_from_json(j), FeatureSpace::load(fs_path)};
}

}  // namespace cmhate
