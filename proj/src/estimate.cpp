#include "tbq/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tbq/normal.hpp"
#include "tbq/quadrature.hpp"

namespace tbq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Integration window for X1 in units of sigma_x; the excluded mass is ~1e-15.
constexpr double kWindowSigmas = 8.0;
constexpr double kNumericalCellMass = 1e-14;

double starved_midpoint(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  return 0.5 * (a + b);
}

}  // namespace

double truncated_gaussian_mean(double mu, double sigma, double a, double b) {
  if (!(sigma > 0.0)) throw std::invalid_argument("truncated_gaussian_mean: sigma must be > 0");
  if (!(a < b)) throw std::invalid_argument("truncated_gaussian_mean: need a < b");
  const double alpha = (a - mu) / sigma;
  const double beta = (b - mu) / sigma;
  const double mass = normal_mass(alpha, beta);
  if (mass < kStarvedCellMass) return starved_midpoint(a, b);
  return mu + sigma * (normal_pdf(alpha) - normal_pdf(beta)) / mass;
}

double conditional_task_mean(const GaussianTaskModel& model, double lo, double hi) {
  return model.gamma() * truncated_gaussian_mean(0.0, model.sigma_x(), lo, hi);
}

std::vector<CellStatistics> cell_statistics(const GaussianTaskModel& model,
                                            const ThresholdQuantizer& q) {
  const double sx = model.sigma_x();
  std::vector<CellStatistics> cells(q.num_cells());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double lo = q.cell_lower(i);
    const double hi = q.cell_upper(i);
    cells[i].probability = normal_mass(lo / sx, hi / sx);
    cells[i].task_cond_mean = conditional_task_mean(model, lo, hi);
  }
  return cells;
}

double quantizer_mse(const GaussianTaskModel& model, const ThresholdQuantizer& q) {
  double explained = 0.0;
  for (const auto& c : cell_statistics(model, q)) {
    if (c.probability < kStarvedCellMass) continue;
    explained += c.probability * c.task_cond_mean * c.task_cond_mean;
  }
  return model.task_variance() - explained;
}

DelayCellMoments delay_cell_moments(const GaussianTaskModel& model, const DelayParams& p,
                                    double abs_tol) {
  if (!(p.tau1 < p.tau2) || !(p.tau3 < p.tau4)) {
    throw std::invalid_argument("two_shot_delay_mse: thresholds must satisfy tau1 < tau2, tau3 < tau4");
  }
  if (p.a1 == 0.0 && p.a2 == 0.0) {
    throw std::invalid_argument("two_shot_delay_mse: combiner weights must not both be zero");
  }
  const double sx = model.sigma_x();
  const std::array<double, 4> first = {-kInf, p.tau1, p.tau2, kInf};
  const std::array<double, 4> second = {-kInf, p.tau3, p.tau4, kInf};
  DelayCellMoments out;

  if (p.a2 == 0.0) {
    // The second ADC sees a scaled copy of X1: every cell is an X1 interval.
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        double lo = second[l] / p.a1;
        double hi = second[l + 1] / p.a1;
        if (p.a1 < 0.0) std::swap(lo, hi);
        lo = std::max(lo, first[k]);
        hi = std::min(hi, first[k + 1]);
        const int idx = 3 * k + l;
        if (!(lo < hi)) continue;
        out.probability[idx] = normal_mass(lo / sx, hi / sx);
        out.mean_x1[idx] = sx * (normal_pdf(lo / sx) - normal_pdf(hi / sx));
        out.mean_x2[idx] = 0.0;
      }
    }
    return out;
  }

  // Given x1, the second-slot cell l is an X2 interval; its mass and first
  // moment are closed form. Integrate the 9 moments over x1 strip by strip.
  auto integrand = [&](double x1) {
    std::array<double, 9> v{};
    const double w = normal_pdf(x1 / sx) / sx;
    for (int l = 0; l < 3; ++l) {
      double lo = (second[l] - p.a1 * x1) / p.a2;
      double hi = (second[l + 1] - p.a1 * x1) / p.a2;
      if (p.a2 < 0.0) std::swap(lo, hi);
      const double mass = normal_mass(lo / sx, hi / sx);
      const double first_moment = sx * (normal_pdf(lo / sx) - normal_pdf(hi / sx));
      v[3 * l] = w * mass;
      v[3 * l + 1] = w * x1 * mass;
      v[3 * l + 2] = w * first_moment;
    }
    return v;
  };

  const double window = kWindowSigmas * sx;
  std::vector<double> kinks;
  if (p.a1 != 0.0) {
    kinks.push_back(p.tau3 / p.a1);
    kinks.push_back(p.tau4 / p.a1);
  }
  for (int k = 0; k < 3; ++k) {
    const double lo = std::max(first[k], -window);
    const double hi = std::min(first[k + 1], window);
    if (!(lo < hi)) continue;
    std::vector<double> cuts = {lo};
    for (double c : kinks) {
      if (c > lo && c < hi) cuts.push_back(c);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    std::array<double, 9> acc{};
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const auto part = integrate_gk<9>(integrand, cuts[s], cuts[s + 1], abs_tol);
      for (std::size_t j = 0; j < 9; ++j) acc[j] += part[j];
    }
    for (int l = 0; l < 3; ++l) {
      const int idx = 3 * k + l;
      out.probability[idx] = acc[3 * l];
      out.mean_x1[idx] = acc[3 * l + 1];
      out.mean_x2[idx] = acc[3 * l + 2];
    }
  }
  return out;
}

double delay_mse_from_moments(const GaussianTaskModel& model, const DelayCellMoments& m) {
  double explained1 = 0.0;
  double explained2 = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double prob = m.probability[i];
    // Integrated moments carry ~1e-15 absolute noise; below this the ratio is noise.
    if (prob < kNumericalCellMass) continue;
    explained1 += m.mean_x1[i] * m.mean_x1[i] / prob;
    explained2 += m.mean_x2[i] * m.mean_x2[i] / prob;
  }
  const double g2 = model.gamma() * model.gamma();
  return model.task_variance() - 0.5 * g2 * (explained1 + explained2);
}

double two_shot_delay_mse(const GaussianTaskModel& model, const DelayParams& p) {
  return delay_mse_from_moments(model, delay_cell_moments(model, p));
}

}  // namespace tbq
