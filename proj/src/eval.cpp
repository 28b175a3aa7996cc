// SPDX-License-Identifier: Apache-2.0

#include "cmhate/eval.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "cmhate/errors.hpp"
#include "cmhate/text.hpp"
#include "json.hpp"

namespace cmhate {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

Metrics metrics_from(const ConfusionMatrix& cm) noexcept {
  Metrics m;
  const auto tp = static_cast<double>(cm.tp);
  m.acc = ratio(tp + static_cast<double>(cm.tn), static_cast<double>(cm.total()));
  m.pre = ratio(tp, tp + static_cast<double>(cm.fp));
  m.rec = ratio(tp, tp + static_cast<double>(cm.fn));
  m.f1 = ratio(2.0 * m.pre * m.rec, m.pre + m.rec);
  return m;
}

Score score(std::span<const Label> gold, std::span<const Label> pred) {
  if (gold.size() != pred.size()) throw LengthMismatch(gold.size(), pred.size());
  if (gold.empty()) throw std::invalid_argument("cannot score an empty prediction list");
  Score s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::Hate;
    const bool p = pred[i] == Label::Hate;
    if (g && p) ++s.confusion.tp;
    else if (!g && p) ++s.confusion.fp;
    else if (g && !p) ++s.confusion.fn;
    else ++s.confusion.tn;
  }
  s.metrics = metrics_from(s.confusion);
  return s;
}

RunReport make_run_report(std::string model_name, std::string train_set_name, std::uint64_t seed,
                          std::vector<PredictionRecord> per_sample) {
  std::vector<Label> gold;
  std::vector<Label> pred;
  gold.reserve(per_sample.size());
  pred.reserve(per_sample.size());
  for (const auto& r : per_sample) {
    gold.push_back(r.gold);
    pred.push_back(r.pred);
  }
  RunReport rep{std::move(model_name), std::move(train_set_name), seed, score(gold, pred).metrics,
                std::move(per_sample)};
  return rep;
}

std::vector<double> CellSummary::f1_samples() const {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(r.metrics.f1);
  return out;
}

CellSummary summarize_cell(std::vector<RunReport> reports) {
  if (reports.empty()) throw std::invalid_argument("a cell needs at least one run report");
  for (const auto& r : reports) {
    if (r.model_name != reports.front().model_name || r.train_set_name != reports.front().train_set_name) {
      throw MixedCell();
    }
  }
  CellSummary c;
  const double n = static_cast<double>(reports.size());
  double lo = reports.front().metrics.f1;
  double hi = lo;
  for (const auto& r : reports) {
    c.mean.acc += r.metrics.acc;
    c.mean.pre += r.metrics.pre;
    c.mean.rec += r.metrics.rec;
    c.mean.f1 += r.metrics.f1;
    lo = std::min(lo, r.metrics.f1);
    hi = std::max(hi, r.metrics.f1);
  }
  c.mean.acc /= n;
  c.mean.pre /= n;
  c.mean.rec /= n;
  c.mean.f1 /= n;
  // Summation rounding must not push the mean outside the observed range.
  c.mean.f1 = std::clamp(c.mean.f1, lo, hi);
  c.mean_f1 = c.mean.f1;
  c.f1_spread = hi - lo;
  c.reports = std::move(reports);
  return c;
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["gold"] = std::string(to_string(r.gold));
    j["pred"] = std::string(to_string(r.pred));
    out << j.dump() << '\n';
  }
}

std::vector<PredictionRecord> read_predictions(std::istream& in) {
  const LabelParser labels;
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto label_of = [&](const char* key) {
        const auto& v = j.at(key);
        return labels.parse(v.is_string() ? v.get<std::string>() : v.dump());
      };
      const auto& id = j.at("id");
      out.push_back({id.is_string() ? id.get<std::string>() : id.dump(), label_of("gold"), label_of("pred")});
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open predictions '" + path.string() + "'");
  return read_predictions(in);
}

}  // namespace cmhate
