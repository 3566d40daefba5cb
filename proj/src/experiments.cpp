#include "tbq/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tbq/idrf.hpp"

namespace tbq {

using nlohmann::json;

namespace {

constexpr double kReferenceRate = 2.0;

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

ScenarioOutcome outcome_of(const DistortionReport& r) {
  return {r.best_mse, r.best_params, r.evaluations, r.notes};
}

SweepRow evaluate_row(const SweepConfig& cfg, double sigma_n) {
  const GaussianTaskModel model(cfg.sigma_s, sigma_n);
  SweepRow row;
  row.sigma_n = sigma_n;
  auto spec_for = [&](ScenarioKind kind) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.model = model;
    spec.grid_range = cfg.grid_range;
    spec.grid_step = cfg.grid_step;
    return spec;
  };
  std::optional<DistortionReport> four_level;
  for (const auto& name : cfg.scenarios) {
    const std::string column(column_for_scenario(name));
    if (row.results.count(column)) continue;
    if (column == "idrf") {
      row.results[column] = {gaussian_idrf(model, kReferenceRate), {}, 0, {}};
    } else if (column == "quadratic" || column == "envelope") {
      // Both frontends realize the same family of 4-level partitions.
      if (!four_level) four_level = optimize_scenario(spec_for(ScenarioKind::kQuadratic));
      ScenarioOutcome out = outcome_of(*four_level);
      if (column == "envelope") {
        out.notes.push_back("shares the quadratic optimum: |x - (t1+t3)/2| < (t3-t1)/2 and x >= t2");
      }
      row.results[column] = out;
    } else if (column == "linear") {
      row.results[column] = outcome_of(optimize_scenario(spec_for(ScenarioKind::kLinear)));
    } else {
      row.results[column] = outcome_of(optimize_scenario(spec_for(ScenarioKind::kDelay)));
    }
  }
  return row;
}

json outcome_json(const ScenarioOutcome& o) {
  json j;
  j["best_mse"] = o.mse;
  j["best_params"] = o.params;
  j["evaluations"] = o.evaluations;
  j["notes"] = o.notes;
  return j;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "svg") return OutputFormat::kSvg;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::string_view column_for_scenario(std::string_view scenario) {
  if (scenario == "delay" || scenario == "linear_delay") return "linear_delay";
  for (auto c : kSweepColumns) {
    if (c == scenario) return c;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(scenario) + "'");
}

void SweepConfig::validate() const {
  if (sigma_n_values.empty()) throw std::invalid_argument("at least one sigma_n value is required");
  for (std::size_t i = 0; i < sigma_n_values.size(); ++i) {
    if (!(sigma_n_values[i] > 0.0) || !std::isfinite(sigma_n_values[i])) {
      throw std::invalid_argument("sigma_n values must be positive");
    }
    if (i > 0 && !(sigma_n_values[i - 1] < sigma_n_values[i])) {
      throw std::invalid_argument("sigma_n values must be strictly increasing");
    }
  }
  if (!(sigma_s > 0.0)) throw std::invalid_argument("sigma_s must be positive");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(grid_range > 0.0)) throw std::invalid_argument("grid range must be positive");
  if (scenarios.empty()) throw std::invalid_argument("at least one scenario is required");
  for (const auto& s : scenarios) column_for_scenario(s);
}

std::optional<double> SweepRow::value(std::string_view column) const {
  const auto it = results.find(column);
  if (it == results.end()) return std::nullopt;
  return it->second.mse;
}

SweepTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepTable table(cfg.sigma_n_values.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(cfg.sigma_n_values.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < table.size(); i = next++) {
          table[i] = evaluate_row(cfg, cfg.sigma_n_values[i]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

std::string emit_csv(const SweepTable& table) {
  std::string out = "sigma_n";
  for (auto c : kSweepColumns) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (const auto& row : table) {
    out += format_sig9(row.sigma_n);
    for (auto c : kSweepColumns) {
      out += ',';
      if (const auto v = row.value(c)) out += format_sig9(*v);
    }
    out += '\n';
  }
  return out;
}

std::string emit_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& row : table) {
    json r;
    r["sigma_n"] = row.sigma_n;
    json meta = json::object();
    for (auto c : kSweepColumns) {
      const std::string key(c);
      const auto it = row.results.find(c);
      if (it == row.results.end()) {
        r[key] = nullptr;
      } else {
        r[key] = it->second.mse;
        meta[key] = outcome_json(it->second);
      }
    }
    r["metadata"] = meta;
    rows.push_back(r);
  }
  return rows.dump(2) + "\n";
}

std::string emit_svg(const SweepTable& table) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 70.0, kRight = 170.0, kTop = 30.0, kBottom = 60.0;
  static constexpr std::array<const char*, 5> kColors = {"#d62728", "#1f77b4", "#ff7f0e",
                                                         "#9467bd", "#2ca02c"};
  double xmin = table.front().sigma_n;
  double xmax = table.back().sigma_n;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto& row : table) {
    xmin = std::min(xmin, row.sigma_n);
    xmax = std::max(xmax, row.sigma_n);
    for (auto c : kSweepColumns) {
      if (const auto v = row.value(c)) {
        ymin = std::min(ymin, *v);
        ymax = std::max(ymax, *v);
      }
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" "
       "height=\"500\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  s << "<line x1=\"" << format_fixed(kLeft, 1) << "\" y1=\"" << format_fixed(kTop + plot_h, 1)
    << "\" x2=\"" << format_fixed(kLeft + plot_w, 1) << "\" y2=\"" << format_fixed(kTop + plot_h, 1)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << format_fixed(kLeft, 1) << "\" y1=\"" << format_fixed(kTop, 1) << "\" x2=\""
    << format_fixed(kLeft, 1) << "\" y2=\"" << format_fixed(kTop + plot_h, 1)
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0;
    const double yv = ymin + (ymax - ymin) * t / 4.0;
    s << "<text x=\"" << format_fixed(px(xv), 1) << "\" y=\"" << format_fixed(kTop + plot_h + 18, 1)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << format_sig9(std::round(xv * 1e4) / 1e4)
      << "</text>\n";
    s << "<text x=\"" << format_fixed(kLeft - 6, 1) << "\" y=\"" << format_fixed(py(yv) + 4, 1)
      << "\" font-size=\"11\" text-anchor=\"end\">" << format_fixed(yv, 4) << "</text>\n";
  }
  s << "<text x=\"" << format_fixed(kLeft + plot_w / 2, 1) << "\" y=\"" << format_fixed(kHeight - 15, 1)
    << "\" font-size=\"14\" text-anchor=\"middle\">sigma_n</text>\n";
  s << "<text x=\"18\" y=\"" << format_fixed(kTop + plot_h / 2, 1)
    << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << format_fixed(kTop + plot_h / 2, 1) << ")\">MSE</text>\n";

  int legend_row = 0;
  for (std::size_t ci = 0; ci < kSweepColumns.size(); ++ci) {
    const auto c = kSweepColumns[ci];
    std::string points;
    for (const auto& row : table) {
      if (const auto v = row.value(c)) {
        if (!points.empty()) points += ' ';
        points += format_fixed(px(row.sigma_n), 2) + "," + format_fixed(py(*v), 2);
      }
    }
    if (points.empty()) continue;
    s << "<polyline fill=\"none\" stroke=\"" << kColors[ci] << "\" stroke-width=\"2\" points=\""
      << points << "\"/>\n";
    const double ly = kTop + 10 + 20 * legend_row++;
    const double lx = kLeft + plot_w + 15;
    s << "<line x1=\"" << format_fixed(lx, 1) << "\" y1=\"" << format_fixed(ly, 1) << "\" x2=\""
      << format_fixed(lx + 20, 1) << "\" y2=\"" << format_fixed(ly, 1) << "\" stroke=\""
      << kColors[ci] << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << format_fixed(lx + 26, 1) << "\" y=\"" << format_fixed(ly + 4, 1)
      << "\" font-size=\"12\">" << c << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string emit(const SweepTable& table, OutputFormat format) {
  if (table.empty()) throw std::invalid_argument("cannot emit an empty table");
  switch (format) {
    case OutputFormat::kCsv:
      return emit_csv(table);
    case OutputFormat::kJson:
      return emit_json(table);
    case OutputFormat::kSvg:
      return emit_svg(table);
  }
  throw std::invalid_argument("unknown output format");
}

void write_table(const SweepTable& table, OutputFormat format, const std::string& path) {
  const std::string body = emit(table, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

SweepTable parse_table_json(const std::string& text) {
  const json rows = json::parse(text);
  SweepTable table;
  for (const auto& r : rows) {
    SweepRow row;
    row.sigma_n = r.at("sigma_n").get<double>();
    const json& meta = r.contains("metadata") ? r.at("metadata") : json::object();
    for (auto c : kSweepColumns) {
      const std::string key(c);
      if (!r.contains(key) || r.at(key).is_null()) continue;
      ScenarioOutcome o;
      o.mse = r.at(key).get<double>();
      if (meta.contains(key)) {
        const auto& m = meta.at(key);
        o.params = m.at("best_params").get<std::vector<double>>();
        o.evaluations = m.at("evaluations").get<std::size_t>();
        o.notes = m.at("notes").get<std::vector<std::string>>();
      }
      row.results[key] = o;
    }
    table.push_back(row);
  }
  return table;
}

std::string report_to_json(const DistortionReport& report, int indent) {
  json j;
  j["scenario"] = std::string(to_string(report.scenario.kind));
  j["sigma_s"] = report.scenario.model.sigma_s();
  j["sigma_n"] = report.scenario.model.sigma_n();
  j["grid_range"] = report.scenario.grid_range;
  j["grid_step"] = report.scenario.grid_step;
  j["best_params"] = report.best_params;
  j["best_mse"] = report.best_mse;
  j["idrf_bound"] = report.idrf_bound;
  j["evaluations"] = report.evaluations;
  j["notes"] = report.notes;
  return j.dump(indent);
}

void apply_config_json(const std::string& text, SweepConfig& cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  try {
    if (j.contains("sigma_n")) cfg.sigma_n_values = j.at("sigma_n").get<std::vector<double>>();
    if (j.contains("sigma_s")) cfg.sigma_s = j.at("sigma_s").get<double>();
    if (j.contains("step")) cfg.grid_step = j.at("step").get<double>();
    if (j.contains("range")) cfg.grid_range = j.at("range").get<double>();
    if (j.contains("scenarios")) cfg.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    if (j.contains("out")) cfg.output_path = j.at("out").get<std::string>();
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid config value: ") + e.what());
  }
}

}  // namespace tbq
