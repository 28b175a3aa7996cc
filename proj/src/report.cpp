// SPDX-License-Identifier: Apache-2.0

#include "cmhate/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cmhate/errors.hpp"
#include "cmhate/stats.hpp"

namespace cmhate {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error("bad number '" + s + "' in results");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

ReportGrid build_grid(const std::vector<RunReport>& reports, std::optional<std::string> baseline) {
  ReportGrid grid;
  std::map<CellKey, std::vector<RunReport>> grouped;
  for (const auto& r : reports) {
    if (std::find(grid.models.begin(), grid.models.end(), r.model_name) == grid.models.end()) {
      grid.models.push_back(r.model_name);
    }
    if (std::find(grid.train_sets.begin(), grid.train_sets.end(), r.train_set_name) == grid.train_sets.end()) {
      grid.train_sets.push_back(r.train_set_name);
    }
    grouped[{r.model_name, r.train_set_name}].push_back(r);
  }
  for (auto& [key, runs] : grouped) grid.cells.emplace(key, summarize_cell(std::move(runs)));
  if (baseline) {
    grid.baseline_set = *baseline;
  } else if (!grid.train_sets.empty()) {
    grid.baseline_set = grid.train_sets.front();
  }
  return grid;
}

std::map<CellKey, double> compute_significance(const ReportGrid& grid) {
  std::map<CellKey, double> out;
  for (const auto& [key, cell] : grid.cells) {
    if (key.train_set == grid.baseline_set) continue;
    auto base = grid.cells.find({key.model, grid.baseline_set});
    if (base == grid.cells.end()) continue;
    const auto a = cell.f1_samples();
    const auto b = base->second.f1_samples();
    if (a.size() < 2 || b.size() < 2) continue;
    try {
      out[key] = welch_t_test(a, b).p_two_tailed;
    } catch (const DegenerateVariance&) {
    }
  }
  return out;
}

bool is_starred(const ReportGrid& grid, const CellKey& key, const std::map<CellKey, double>& significance) {
  auto p = significance.find(key);
  if (p == significance.end() || !(p->second < kSignificanceLevel)) return false;
  auto cell = grid.cells.find(key);
  auto base = grid.cells.find({key.model, grid.baseline_set});
  if (cell == grid.cells.end() || base == grid.cells.end()) return false;
  return cell->second.mean_f1 > base->second.mean_f1;
}

std::vector<CellKey> best_cells(const ReportGrid& grid) {
  std::vector<CellKey> out;
  for (const auto& set : grid.train_sets) {
    double best = -1.0;
    for (const auto& model : grid.models) {
      auto it = grid.cells.find({model, set});
      if (it != grid.cells.end()) best = std::max(best, it->second.mean_f1);
    }
    for (const auto& model : grid.models) {
      auto it = grid.cells.find({model, set});
      if (it != grid.cells.end() && it->second.mean_f1 == best) out.push_back({model, set});
    }
  }
  return out;
}

ReportArtifact render_report(const ReportGrid& grid, const std::map<CellKey, double>& significance) {
  const auto best = best_cells(grid);
  auto is_best = [&](const CellKey& k) { return std::find(best.begin(), best.end(), k) != best.end(); };

  std::ostringstream csv;
  csv << "model,train_set,n_seeds,mean_acc,mean_pre,mean_rec,mean_f1,f1_spread,p_vs_baseline,test,best,"
         "starred\n";
  for (const auto& model : grid.models) {
    for (const auto& set : grid.train_sets) {
      const CellKey key{model, set};
      auto it = grid.cells.find(key);
      if (it == grid.cells.end()) continue;
      const auto& c = it->second;
      auto p = significance.find(key);
      csv << csv_field(model) << ',' << csv_field(set) << ',' << c.reports.size() << ','
          << format_double(c.mean.acc) << ',' << format_double(c.mean.pre) << ','
          << format_double(c.mean.rec) << ',' << format_double(c.mean_f1) << ','
          << format_double(c.f1_spread) << ',' << (p != significance.end() ? format_double(p->second) : "")
          << ',' << kSignificanceTest << ',' << (is_best(key) ? 1 : 0) << ','
          << (is_starred(grid, key, significance) ? 1 : 0) << '\n';
    }
  }

  std::ostringstream md;
  md << "| Model |";
  for (const auto& set : grid.train_sets) md << ' ' << set << " Acc | Pre | Rec | F1 (spread) |";
  md << "\n|---|";
  for (std::size_t i = 0; i < grid.train_sets.size(); ++i) md << "---|---|---|---|";
  md << '\n';
  for (const auto& model : grid.models) {
    md << "| " << model << " |";
    for (const auto& set : grid.train_sets) {
      const CellKey key{model, set};
      auto it = grid.cells.find(key);
      if (it == grid.cells.end()) {
        md << " - | - | - | - |";
        continue;
      }
      const auto& c = it->second;
      std::string f1 = fixed2(c.mean_f1) + (is_starred(grid, key, significance) ? "*" : "");
      if (is_best(key)) f1 = "**" + f1 + "**";
      md << ' ' << fixed2(c.mean.acc) << " | " << fixed2(c.mean.pre) << " | " << fixed2(c.mean.rec) << " | "
         << f1 << " (" << fixed2(c.f1_spread) << ") |";
    }
    md << '\n';
  }
  md << "\nBold: best F1 per training set. *: F1 improvement over '" << grid.baseline_set
     << "' with p < 0.05 (Welch's t-test over seeds).\n";
  return {csv.str(), md.str()};
}

std::string results_csv(const std::vector<RunReport>& reports) {
  std::ostringstream out;
  out << "model,train_set,seed,acc,pre,rec,f1\n";
  for (const auto& r : reports) {
    out << csv_field(r.model_name) << ',' << csv_field(r.train_set_name) << ',' << r.seed << ','
        << format_double(r.metrics.acc) << ',' << format_double(r.metrics.pre) << ','
        << format_double(r.metrics.rec) << ',' << format_double(r.metrics.f1) << '\n';
  }
  return out.str();
}

std::vector<RunReport> parse_results_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<RunReport> out;
  if (!std::getline(in, line)) return out;
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"model", "train_set", "seed", "acc", "pre", "rec", "f1"};
  if (header != expected) throw Error("results.csv header must be " + std::string("model,train_set,seed,acc,pre,rec,f1"));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) throw MalformedRecord(line_no, "expected 7 fields");
    RunReport r;
    r.model_name = f[0];
    r.train_set_name = f[1];
    r.seed = std::stoull(f[2]);
    r.metrics = {parse_double(f[3]), parse_double(f[4]), parse_double(f[5]), parse_double(f[6])};
    out.push_back(std::move(r));
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::set<std::size_t> sizes;
  std::vector<std::pair<std::string, std::string>> rows;  // (model, ratio) in first-appearance order
  std::map<std::tuple<std::string, std::string, std::size_t>, const CellSummary*> lookup;
  for (const auto& p : points) {
    sizes.insert(p.size);
    const auto row = std::make_pair(p.model, p.ratio);
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    lookup[{p.model, p.ratio, p.size}] = &p.summary;
  }
  std::ostringstream out;
  out << "model,ratio,score";
  for (auto s : sizes) out << ',' << s;
  out << '\n';
  const std::array<std::pair<const char*, double Metrics::*>, 4> scores{
      {{"ACC", &Metrics::acc}, {"F1", &Metrics::f1}, {"PRE", &Metrics::pre}, {"REC", &Metrics::rec}}};
  for (const auto& [model, ratio] : rows) {
    for (const auto& [name, member] : scores) {
      out << csv_field(model) << ',' << csv_field(ratio) << ',' << name;
      for (auto s : sizes) {
        out << ',';
        auto it = lookup.find({model, ratio, s});
        if (it != lookup.end()) out << format_double(it->second->mean.*member);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace cmhate
