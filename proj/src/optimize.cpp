#include "tbq/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tbq/estimate.hpp"
#include "tbq/idrf.hpp"
#include "tbq/normal.hpp"
#include "tbq/quantizer.hpp"

namespace tbq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenRatio = 0.61803398874989484820;
constexpr double kTableCellMass = 1e-14;
constexpr double kReferenceRate = 2.0;  // n_q * log2(kappa) with two one-bit ADCs

std::vector<double> symmetric_grid(double range, double step) {
  if (!(step > 0.0) || !(range > 0.0)) {
    throw std::invalid_argument("threshold grid needs positive range and step");
  }
  const auto k_max = static_cast<long>(std::floor(range / step + 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(2 * k_max + 1));
  for (long k = -k_max; k <= k_max; ++k) g.push_back(static_cast<double>(k) * step);
  return g;
}

// Edge table with -inf/+inf sentinels: the explained-energy contribution
// num^2 / mass of the cell between edge i and edge j, per unit gamma^2 sigma_x^2.
struct EdgeTable {
  std::vector<double> edges;
  std::vector<double> cdf;
  std::vector<double> sf;
  std::vector<double> pdf;

  EdgeTable(const std::vector<double>& grid, double sigma) {
    edges.reserve(grid.size() + 2);
    edges.push_back(-kInf);
    edges.insert(edges.end(), grid.begin(), grid.end());
    edges.push_back(kInf);
    for (double e : edges) {
      const double z = e / sigma;
      cdf.push_back(normal_cdf(z));
      sf.push_back(normal_sf(z));
      pdf.push_back(normal_pdf(z));
    }
  }

  std::size_t size() const { return edges.size(); }

  double contribution(std::size_t i, std::size_t j) const {
    const double mass = edges[i] >= 0.0 ? sf[i] - sf[j] : cdf[j] - cdf[i];
    if (mass < kStarvedCellMass) return 0.0;
    const double num = pdf[i] - pdf[j];
    return num * num / mass;
  }
};

struct TupleBest {
  double value = -kInf;
  std::array<std::size_t, 3> idx{};
  std::size_t count = 0;

  void offer(double v, const std::array<std::size_t, 3>& t) {
    ++count;
    if (v > value) {
      value = v;
      idx = t;
    }
  }
  // Larger value wins; equal values resolve to the lexicographically smaller tuple.
  void merge(const TupleBest& o) {
    count += o.count;
    if (o.value > value || (o.value == value && o.idx < idx)) {
      value = o.value;
      idx = o.idx;
    }
  }
};

bool strictly_increasing(const double* v, std::size_t n) {
  for (std::size_t i = 1; i < n; ++i) {
    if (!(v[i - 1] < v[i])) return false;
  }
  return true;
}

// Golden-section minimization of f over [lo, hi]; returns the best point seen.
std::pair<double, double> golden_section(const std::function<double(double)>& f, double lo,
                                         double hi, std::size_t& evals) {
  double a = lo;
  double b = hi;
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  evals += 2;
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (int it = 0; it < 100 && (b - a) > 1e-9 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
      ++evals;
      if (f1 < best_f) {
        best_f = f1;
        best_x = x1;
      }
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
      ++evals;
      if (f2 < best_f) {
        best_f = f2;
        best_x = x2;
      }
    }
  }
  return {best_x, best_f};
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kLinear:
      return "linear";
    case ScenarioKind::kQuadratic:
      return "quadratic";
    case ScenarioKind::kEnvelope:
      return "envelope";
    case ScenarioKind::kDelay:
      return "delay";
  }
  return "unknown";
}

ScenarioKind scenario_from_string(std::string_view name) {
  if (name == "linear") return ScenarioKind::kLinear;
  if (name == "quadratic") return ScenarioKind::kQuadratic;
  if (name == "envelope") return ScenarioKind::kEnvelope;
  if (name == "delay" || name == "linear_delay") return ScenarioKind::kDelay;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

std::size_t parameter_count(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kLinear:
      return 2;
    case ScenarioKind::kQuadratic:
    case ScenarioKind::kEnvelope:
      return 3;
    case ScenarioKind::kDelay:
      return 6;
  }
  return 0;
}

void ScenarioSpec::validate() const {
  if (!(grid_range > 0.0)) throw std::invalid_argument("grid_range must be positive");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  if (!(delay_threshold_step > 0.0) || !(delay_weight_step > 0.0) ||
      !(delay_weight_range >= 0.0)) {
    throw std::invalid_argument("delay grid steps must be positive");
  }
}

ThresholdSearchResult grid_search_thresholds(const GaussianTaskModel& model,
                                             std::size_t num_thresholds, double range,
                                             double step) {
  if (num_thresholds < 1 || num_thresholds > 3) {
    throw std::invalid_argument("grid_search_thresholds supports 1 to 3 thresholds");
  }
  const std::vector<double> grid = symmetric_grid(range, step);
  if (grid.size() < num_thresholds) throw std::invalid_argument("threshold grid too coarse");
  const EdgeTable table(grid, model.sigma_x());
  const std::size_t n = table.size();  // includes both sentinels
  const std::size_t last = n - 1;

  // Dense contribution matrix; rows are edges i, columns j > i.
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) c[i * n + j] = table.contribution(i, j);
  }
  auto cc = [&](std::size_t i, std::size_t j) { return c[i * n + j]; };

  TupleBest best;
  if (num_thresholds == 1) {
    for (std::size_t i = 1; i < last; ++i) best.offer(cc(0, i) + cc(i, last), {i, 0, 0});
  } else if (num_thresholds == 2) {
    for (std::size_t i = 1; i < last; ++i) {
      const double head = cc(0, i);
      for (std::size_t j = i + 1; j < last; ++j) {
        best.offer((head + cc(i, j)) + cc(j, last), {i, j, 0});
      }
    }
  } else {
    const unsigned workers = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
    std::vector<TupleBest> partial(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        TupleBest local;
        for (std::size_t i = 1 + w; i < last; i += workers) {
          const double head = cc(0, i);
          for (std::size_t j = i + 1; j < last; ++j) {
            const double mid = head + cc(i, j);
            const double* row = &c[j * n];
            for (std::size_t k = j + 1; k < last; ++k) {
              local.offer((mid + row[k]) + cc(k, last), {i, j, k});
            }
          }
        }
        partial[w] = local;
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& p : partial) best.merge(p);
  }

  ThresholdSearchResult out;
  for (std::size_t t = 0; t < num_thresholds; ++t) out.thresholds.push_back(table.edges[best.idx[t]]);
  out.mse = quantizer_mse(model, ThresholdQuantizer(out.thresholds));
  out.evaluations = best.count;
  return out;
}

double scenario_objective(const GaussianTaskModel& model, ScenarioKind kind,
                          const std::vector<double>& params) {
  if (params.size() != parameter_count(kind)) {
    throw std::invalid_argument("scenario_objective: wrong parameter count for " +
                                std::string(to_string(kind)));
  }
  if (kind == ScenarioKind::kDelay) {
    if (!(params[0] < params[1]) || !(params[2] < params[3])) return kInf;
    if (params[4] == 0.0 && params[5] == 0.0) return kInf;
    return two_shot_delay_mse(model, {params[0], params[1], params[2], params[3], params[4],
                                      params[5]});
  }
  if (!strictly_increasing(params.data(), params.size())) return kInf;
  return quantizer_mse(model, ThresholdQuantizer(params));
}

RefineResult refine_local(const GaussianTaskModel& model, const std::vector<double>& init,
                          ScenarioKind kind) {
  RefineResult out;
  out.params = init;
  out.mse = scenario_objective(model, kind, out.params);
  ++out.evaluations;
  if (!std::isfinite(out.mse)) throw std::invalid_argument("refine_local: infeasible start");

  const bool delay = kind == ScenarioKind::kDelay;
  // Threshold groups that must stay ordered, and which coordinates are free.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::vector<std::size_t> free_coords;
  if (delay) {
    groups = {{0, 2}, {2, 4}};
    free_coords = {0, 1, 2, 3, 4};
  } else {
    groups = {{0, init.size()}};
    for (std::size_t i = 0; i < init.size(); ++i) free_coords.push_back(i);
  }

  for (std::size_t cycle = 0; cycle < 200; ++cycle) {
    const double start = out.mse;
    for (std::size_t coord : free_coords) {
      auto& p = out.params;
      double lo = 0.0;
      double hi = 0.0;
      if (delay && coord == 4) {
        lo = p[4] - 0.5;
        hi = p[4] + 0.5;
      } else {
        std::pair<std::size_t, std::size_t> g{0, 0};
        for (const auto& gr : groups) {
          if (coord >= gr.first && coord < gr.second) g = gr;
        }
        double scale = model.sigma_x();
        if (delay && g.first == 2) scale *= std::max(std::hypot(p[4], p[5]), 1e-6);
        const double x = p[coord];
        const double margin = 1e-12 * (1.0 + std::fabs(x));
        lo = coord > g.first ? p[coord - 1] + margin : x - 2.0 * scale;
        hi = coord + 1 < g.second ? p[coord + 1] - margin : x + 2.0 * scale;
      }
      if (!(lo < hi)) continue;
      std::vector<double> trial = p;
      auto line = [&](double t) {
        trial[coord] = t;
        return scenario_objective(model, kind, trial);
      };
      const auto [x_best, f_best] = golden_section(line, lo, hi, out.evaluations);
      if (f_best < out.mse) {
        p[coord] = x_best;
        out.mse = f_best;
      }
    }
    out.cycles = cycle + 1;
    if (start - out.mse < 1e-9) break;
  }
  return out;
}

namespace {

// Cumulative moments of {X1 < u_i, a1 X1 + X2 < v_j} on two threshold grids,
// used to score every (tau1, tau2, tau3, tau4) candidate by table lookups.
class DelayTable {
 public:
  DelayTable(const GaussianTaskModel& model, double a1, const std::vector<double>& u_grid,
             const std::vector<double>& v_grid)
      : nu_(u_grid.size() + 2), nv_(v_grid.size() + 2), p_(nu_ * nv_, 0.0), e1_(nu_ * nv_, 0.0),
        e2_(nu_ * nv_, 0.0) {
    const double sx = model.sigma_x();
    const double window = 8.0 * sx;
    std::vector<double> u = {-window};
    for (double x : u_grid) u.push_back(std::clamp(x, -window, window));
    u.push_back(window);

    // 5-point Gauss-Legendre on pieces no wider than a tenth of sigma_x.
    static constexpr std::array<double, 5> kNodes = {-0.906179845938664, -0.538469310105683, 0.0,
                                                     0.538469310105683, 0.906179845938664};
    static constexpr std::array<double, 5> kWeights = {0.236926885056189, 0.478628670499366,
                                                       0.568888888888889, 0.478628670499366,
                                                       0.236926885056189};
    const double max_piece = 0.1 * sx / std::max(1.0, std::fabs(a1));
    std::vector<double> sp(nv_), s1(nv_), s2(nv_);
    for (std::size_t i = 1; i < nu_; ++i) {
      std::fill(sp.begin(), sp.end(), 0.0);
      std::fill(s1.begin(), s1.end(), 0.0);
      std::fill(s2.begin(), s2.end(), 0.0);
      const double lo = u[i - 1];
      const double hi = u[i];
      if (hi > lo) {
        const auto pieces = static_cast<std::size_t>(std::ceil((hi - lo) / max_piece));
        const double h = (hi - lo) / static_cast<double>(pieces);
        for (std::size_t piece = 0; piece < pieces; ++piece) {
          const double c = lo + h * (static_cast<double>(piece) + 0.5);
          for (std::size_t q = 0; q < kNodes.size(); ++q) {
            const double x1 = c + 0.5 * h * kNodes[q];
            const double w = 0.5 * h * kWeights[q] * normal_pdf(x1 / sx) / sx;
            for (std::size_t j = 1; j < nv_; ++j) {
              const double z = j + 1 == nv_ ? kInf : (v_grid[j - 1] - a1 * x1) / sx;
              const double mass = normal_cdf(z);
              sp[j] += w * mass;
              s1[j] += w * x1 * mass;
              s2[j] -= w * sx * normal_pdf(z);
            }
          }
        }
      }
      for (std::size_t j = 0; j < nv_; ++j) {
        at(p_, i, j) = at(p_, i - 1, j) + sp[j];
        at(e1_, i, j) = at(e1_, i - 1, j) + s1[j];
        at(e2_, i, j) = at(e2_, i - 1, j) + s2[j];
      }
    }
  }

  std::size_t nu() const { return nu_; }
  std::size_t nv() const { return nv_; }

  // Explained energy (E1^2 + E2^2) / P of the rectangle [i0, i1) x [j0, j1).
  double cell(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
    const double pr = rect(p_, i0, i1, j0, j1);
    if (pr < kTableCellMass) return 0.0;
    const double a = rect(e1_, i0, i1, j0, j1);
    const double b = rect(e2_, i0, i1, j0, j1);
    return (a * a + b * b) / pr;
  }

 private:
  double& at(std::vector<double>& v, std::size_t i, std::size_t j) { return v[i * nv_ + j]; }
  double get(const std::vector<double>& v, std::size_t i, std::size_t j) const {
    return v[i * nv_ + j];
  }
  double rect(const std::vector<double>& v, std::size_t i0, std::size_t i1, std::size_t j0,
              std::size_t j1) const {
    return get(v, i1, j1) - get(v, i0, j1) - get(v, i1, j0) + get(v, i0, j0);
  }

  std::size_t nu_;
  std::size_t nv_;
  std::vector<double> p_, e1_, e2_;
};

struct PairChoice {
  std::size_t lo = 1;
  std::size_t hi = 2;
};

// Best second-slot pair for a fixed first-slot pair (or vice versa when transposed).
PairChoice best_pair(const DelayTable& t, const PairChoice& fixed, bool sweep_v, double& value,
                     std::size_t& evals) {
  const std::size_t n = sweep_v ? t.nv() : t.nu();
  const std::size_t m = sweep_v ? t.nu() : t.nv();
  const std::array<std::size_t, 4> f = {0, fixed.lo, fixed.hi, m - 1};
  auto score = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      s += sweep_v ? t.cell(f[k], f[k + 1], a, b) : t.cell(a, b, f[k], f[k + 1]);
    }
    return s;
  };
  std::vector<double> head(n), tail(n);
  for (std::size_t c = 1; c + 1 < n; ++c) {
    head[c] = score(0, c);
    tail[c] = score(c, n - 1);
  }
  PairChoice best;
  value = -kInf;
  for (std::size_t c = 1; c + 1 < n; ++c) {
    for (std::size_t d = c + 1; d + 1 < n; ++d) {
      const double v = head[c] + score(c, d) + tail[d];
      ++evals;
      if (v > value) {
        value = v;
        best = {c, d};
      }
    }
  }
  return best;
}

std::size_t nearest_index(const std::vector<double>& grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == grid.size()) return grid.size() - 1;
  if (i > 0 && std::fabs(grid[i - 1] - x) <= std::fabs(grid[i] - x)) --i;
  return i;
}

PairChoice snap_pair(const std::vector<double>& grid, double a, double b) {
  std::size_t i = nearest_index(grid, a) + 1;  // table indices are offset by the -inf sentinel
  std::size_t j = nearest_index(grid, b) + 1;
  if (j <= i) j = i + 1;
  if (j > grid.size()) {
    j = grid.size();
    i = j - 1;
  }
  return {i, j};
}

struct DelayCandidate {
  std::vector<double> params;
  double mse = kInf;
};

DistortionReport optimize_delay(const ScenarioSpec& spec, DistortionReport report) {
  const auto& model = spec.model;
  const double sx = model.sigma_x();

  auto linear = grid_search_thresholds(model, 2, spec.grid_range * sx, spec.grid_step);
  auto linear_refined = refine_local(model, linear.thresholds, ScenarioKind::kLinear);
  report.evaluations += linear.evaluations + linear_refined.evaluations;
  const auto& tau = linear_refined.params;

  std::vector<DelayCandidate> candidates;
  {
    // a1 = 0, a2 = 1 reproduces two independent linear problems.
    DelayCandidate c{{tau[0], tau[1], tau[0], tau[1], 0.0, 1.0}, kInf};
    c.mse = scenario_objective(model, ScenarioKind::kDelay, c.params);
    ++report.evaluations;
    candidates.push_back(c);
  }

  const std::vector<double> u_grid = symmetric_grid(spec.grid_range * sx, spec.delay_threshold_step);
  struct Scored {
    double value;
    double a1;
    std::vector<double> params;
  };
  std::vector<Scored> scored;
  const auto weight_steps =
      static_cast<long>(std::floor(spec.delay_weight_range / spec.delay_weight_step + 1e-9));
  for (long w = -weight_steps; w <= weight_steps; ++w) {
    const double a1 = static_cast<double>(w) * spec.delay_weight_step;
    const double sy = sx * std::hypot(a1, 1.0);
    const std::vector<double> v_grid =
        symmetric_grid(spec.grid_range * sy, spec.delay_threshold_step);
    const DelayTable table(model, a1, u_grid, v_grid);

    Scored best{-kInf, a1, {}};
    const std::array<std::pair<bool, PairChoice>, 2> starts = {
        std::pair{true, snap_pair(u_grid, tau[0], tau[1])},
        std::pair{false, snap_pair(v_grid, tau[0] * sy / sx, tau[1] * sy / sx)}};
    for (const auto& [sweep_v_first, start] : starts) {
      PairChoice up = start;
      PairChoice vp = start;
      bool sweep_v = sweep_v_first;
      double value = -kInf;
      std::size_t unchanged = 0;
      for (int round = 0; round < 40 && unchanged < 2; ++round) {
        double v = -kInf;
        if (sweep_v) {
          const PairChoice next = best_pair(table, up, true, v, report.evaluations);
          unchanged = (round > 0 && next.lo == vp.lo && next.hi == vp.hi) ? unchanged + 1 : 0;
          vp = next;
        } else {
          const PairChoice next = best_pair(table, vp, false, v, report.evaluations);
          unchanged = (round > 0 && next.lo == up.lo && next.hi == up.hi) ? unchanged + 1 : 0;
          up = next;
        }
        value = v;
        sweep_v = !sweep_v;
      }
      if (value > best.value) {
        best.value = value;
        best.params = {u_grid[up.lo - 1], u_grid[up.hi - 1], v_grid[vp.lo - 1], v_grid[vp.hi - 1],
                       a1, 1.0};
      }
    }
    scored.push_back(std::move(best));
  }

  // Exact re-scoring of the most promising combiner weights, then local refinement.
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.value > b.value; });
  const std::size_t keep = std::min<std::size_t>(3, scored.size());
  for (std::size_t i = 0; i < keep; ++i) {
    DelayCandidate c{scored[i].params, kInf};
    c.mse = scenario_objective(model, ScenarioKind::kDelay, c.params);
    ++report.evaluations;
    candidates.push_back(c);
  }

  // a2 = 0: the second ADC re-quantizes X1.
  {
    const PairChoice first = snap_pair(u_grid, tau[0], tau[1]);
    DelayCandidate best{{}, kInf};
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
      for (std::size_t j = i + 1; j < u_grid.size(); ++j) {
        const std::vector<double> p = {u_grid[first.lo - 1], u_grid[first.hi - 1], u_grid[i],
                                       u_grid[j], 1.0, 0.0};
        const double m = scenario_objective(model, ScenarioKind::kDelay, p);
        ++report.evaluations;
        if (m < best.mse) best = {p, m};
      }
    }
    candidates.push_back(best);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const DelayCandidate& a, const DelayCandidate& b) { return a.mse < b.mse; });
  DelayCandidate winner = candidates.front();
  const std::size_t refine_count = std::min<std::size_t>(2, candidates.size());
  for (std::size_t i = 0; i < refine_count; ++i) {
    auto r = refine_local(model, candidates[i].params, ScenarioKind::kDelay);
    report.evaluations += r.evaluations;
    if (r.mse < winner.mse) winner = {r.params, r.mse};
  }

  report.best_params = winner.params;
  report.best_mse = winner.mse;
  std::ostringstream note;
  note << "a2 fixed to 1 with a1 swept over [" << -spec.delay_weight_range << ", "
       << spec.delay_weight_range << "] step " << spec.delay_weight_step
       << "; a2 = 0 direction searched separately";
  report.notes.push_back(note.str());
  return report;
}

}  // namespace

DistortionReport optimize_scenario(const ScenarioSpec& spec) {
  spec.validate();
  DistortionReport report;
  report.scenario = spec;
  report.idrf_bound = gaussian_idrf(spec.model, kReferenceRate);

  if (spec.kind == ScenarioKind::kDelay) return optimize_delay(spec, std::move(report));

  const std::size_t n = spec.kind == ScenarioKind::kLinear ? 2 : 3;
  const auto grid =
      grid_search_thresholds(spec.model, n, spec.grid_range * spec.model.sigma_x(), spec.grid_step);
  const auto refined = refine_local(spec.model, grid.thresholds, spec.kind);
  report.best_params = refined.params;
  report.best_mse = refined.mse;
  report.evaluations = grid.evaluations + refined.evaluations;
  if (spec.kind == ScenarioKind::kEnvelope) {
    report.notes.push_back("envelope chain |x - (t1+t3)/2| realizes the same 4-level partition");
  }
  return report;
}

namespace {

struct PrefixMoments {
  std::vector<double> p, pm, pm2;

  explicit PrefixMoments(const DiscretizedJointModel& dm)
      : p(dm.size() + 1, 0.0), pm(dm.size() + 1, 0.0), pm2(dm.size() + 1, 0.0) {
    for (std::size_t i = 0; i < dm.size(); ++i) {
      p[i + 1] = p[i] + dm.x_pmf[i];
      pm[i + 1] = pm[i] + dm.x_pmf[i] * dm.cond_s_mean[i];
      pm2[i + 1] = pm2[i] + dm.x_pmf[i] * dm.cond_s_second_moment[i];
    }
  }

  // Distortion of points [i, j) decoded by their pooled conditional mean.
  double cost(std::size_t i, std::size_t j) const {
    const double mass = p[j] - p[i];
    const double first = pm[j] - pm[i];
    const double second = pm2[j] - pm2[i];
    if (mass <= 0.0) return second;
    return second - first * first / mass;
  }
};

}  // namespace

double brute_force_quantizer_search(const DiscretizedJointModel& dm, std::size_t num_cells) {
  const std::size_t n = dm.size();
  if (n > 40) throw std::invalid_argument("brute_force_quantizer_search: grid exceeds 40 points");
  if (num_cells < 1 || num_cells > n) {
    throw std::invalid_argument("brute_force_quantizer_search: need 1 <= num_cells <= grid size");
  }
  const PrefixMoments pre(dm);
  // best[k][j]: minimum over splits of the first j points into k groups.
  std::vector<std::vector<double>> best(num_cells + 1, std::vector<double>(n + 1, kInf));
  best[0][0] = 0.0;
  for (std::size_t k = 1; k <= num_cells; ++k) {
    for (std::size_t j = k; j <= n; ++j) {
      for (std::size_t i = k - 1; i < j; ++i) {
        if (!std::isfinite(best[k - 1][i])) continue;
        best[k][j] = std::min(best[k][j], best[k - 1][i] + pre.cost(i, j));
      }
    }
  }
  return best[num_cells][n];
}

double brute_force_set_partition_search(const DiscretizedJointModel& dm, std::size_t num_cells) {
  const std::size_t n = dm.size();
  if (n > 12) throw std::invalid_argument("brute_force_set_partition_search: grid exceeds 12 points");
  if (num_cells < 1) throw std::invalid_argument("brute_force_set_partition_search: num_cells >= 1");
  // Restricted growth strings enumerate each set partition once.
  std::vector<std::size_t> label(n, 0);
  double best = kInf;
  std::vector<double> p(num_cells), pm(num_cells), pm2(num_cells);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t used) {
    if (pos == n) {
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(pm.begin(), pm.end(), 0.0);
      std::fill(pm2.begin(), pm2.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        p[label[i]] += dm.x_pmf[i];
        pm[label[i]] += dm.x_pmf[i] * dm.cond_s_mean[i];
        pm2[label[i]] += dm.x_pmf[i] * dm.cond_s_second_moment[i];
      }
      double total = 0.0;
      for (std::size_t g = 0; g < used; ++g) {
        total += p[g] > 0.0 ? pm2[g] - pm[g] * pm[g] / p[g] : pm2[g];
      }
      best = std::min(best, total);
      return;
    }
    const std::size_t limit = std::min(used + 1, num_cells);
    for (std::size_t g = 0; g < limit; ++g) {
      label[pos] = g;
      rec(pos + 1, std::max(used, g + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace tbq
