#include "tbq/idrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tbq/errors.hpp"

namespace tbq {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

double gaussian_idrf(const GaussianTaskModel& model, double rate_bits) {
  if (!(rate_bits >= 0.0)) throw std::invalid_argument("gaussian_idrf: rate must be >= 0");
  const double mmse = model.mmse();
  return mmse + (model.task_variance() - mmse) * std::exp2(-2.0 * rate_bits);
}

DistortionMatrix reduce_to_direct(const DiscretizedJointModel& dm,
                                  std::vector<double> reconstruction_grid) {
  if (dm.size() == 0 || reconstruction_grid.empty()) {
    throw std::invalid_argument("reduce_to_direct: grids must be non-empty");
  }
  DistortionMatrix d;
  d.rows = dm.size();
  d.cols = reconstruction_grid.size();
  d.values.resize(d.rows * d.cols);
  for (std::size_t r = 0; r < d.rows; ++r) {
    const double m1 = dm.cond_s_mean[r];
    const double m2 = dm.cond_s_second_moment[r];
    for (std::size_t c = 0; c < d.cols; ++c) {
      const double s = reconstruction_grid[c];
      // Clamp rounding below the conditional variance floor, which is >= 0.
      d.values[r * d.cols + c] = std::max(0.0, m2 - 2.0 * s * m1 + s * s);
    }
  }
  d.reconstruction = std::move(reconstruction_grid);
  return d;
}

std::vector<double> default_reconstruction_grid(const GaussianTaskModel& model,
                                                std::size_t points) {
  if (points < 2) throw std::invalid_argument("reconstruction grid needs >= 2 points");
  const double half = 4.0 * model.gamma() * model.sigma_x();
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

BlahutArimotoResult blahut_arimoto(const DistortionMatrix& d, std::span<const double> x_pmf,
                                   double slope, const BlahutArimotoOptions& options) {
  if (!(slope > 0.0)) throw std::invalid_argument("blahut_arimoto: slope must be positive");
  if (x_pmf.size() != d.rows) throw std::invalid_argument("blahut_arimoto: pmf/matrix mismatch");
  const std::size_t nx = d.rows;
  const std::size_t ns = d.cols;

  // Row-shifted kernel exp(-beta (d - d_min)); the shift cancels in every ratio.
  std::vector<double> row_min(nx);
  std::vector<double> kernel(nx * ns);
  for (std::size_t r = 0; r < nx; ++r) {
    const double* row = &d.values[r * ns];
    row_min[r] = *std::min_element(row, row + ns);
    for (std::size_t c = 0; c < ns; ++c) {
      kernel[r * ns + c] = std::exp(-slope * (row[c] - row_min[r]));
    }
  }
  double shift_term = 0.0;
  for (std::size_t r = 0; r < nx; ++r) shift_term += x_pmf[r] * row_min[r];

  // Reproduction point minimizing the expected distortion (the R = 0 solution).
  std::size_t zero_rate = 0;
  double zero_rate_distortion = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ns; ++j) {
    double v = 0.0;
    for (std::size_t r = 0; r < nx; ++r) v += x_pmf[r] * d(r, j);
    if (v < zero_rate_distortion) {
      zero_rate_distortion = v;
      zero_rate = j;
    }
  }

  BlahutArimotoResult out;
  std::vector<double> q(ns);
  bool point_mass_representable = true;
  for (std::size_t r = 0; r < nx; ++r) {
    if (x_pmf[r] > 0.0 && !(kernel[r * ns + zero_rate] > 0.0)) point_mass_representable = false;
  }
  if (!options.initial_pmf && point_mass_representable) {
    // Below the critical slope the zero-rate point mass is optimal; its dual gap
    // is ln max_j c_j, so check it before iterating.
    double max_c = 0.0, log_partition = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      double cj = 0.0;
      for (std::size_t r = 0; r < nx; ++r) {
        if (x_pmf[r] == 0.0) continue;
        cj += x_pmf[r] * kernel[r * ns + j] / kernel[r * ns + zero_rate];
      }
      max_c = std::max(max_c, cj);
    }
    for (std::size_t r = 0; r < nx; ++r) {
      if (x_pmf[r] > 0.0) log_partition += x_pmf[r] * std::log(kernel[r * ns + zero_rate]);
    }
    const double gap = std::log(max_c);
    if (gap < options.tol) {
      if (options.record_trace) {
        out.distortion_trace.push_back(zero_rate_distortion);
        out.objective_trace.push_back(shift_term - log_partition / slope);
      }
      out.point = RdPoint{0.0, zero_rate_distortion, slope};
      out.iterations = 1;
      out.residual = std::max(gap, 0.0);
      out.reproduction_pmf.assign(ns, 0.0);
      out.reproduction_pmf[zero_rate] = 1.0;
      return out;
    }
  }
  if (options.initial_pmf) {
    if (options.initial_pmf->size() != ns) {
      throw std::invalid_argument("blahut_arimoto: initial pmf has wrong size");
    }
    q = *options.initial_pmf;
  } else {
    // Narrow bump at the zero-rate reproduction point.
    const double span = d.reconstruction.back() - d.reconstruction.front();
    const double width = std::max(0.025 * span, 1e-12);
    for (std::size_t c = 0; c < ns; ++c) {
      const double z = (d.reconstruction[c] - d.reconstruction[zero_rate]) / width;
      q[c] = std::exp(-0.5 * z * z);
    }
  }
  const double qsum = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= qsum;

  std::vector<double> z(nx);
  std::vector<double> c(ns);

  auto partition = [&] {
    for (std::size_t r = 0; r < nx; ++r) {
      const double* k = &kernel[r * ns];
      double s = 0.0;
      for (std::size_t j = 0; j < ns; ++j) s += q[j] * k[j];
      z[r] = s;
    }
  };
  auto distortion_of_current = [&] {
    double dist = 0.0;
    for (std::size_t r = 0; r < nx; ++r) {
      if (x_pmf[r] == 0.0 || z[r] == 0.0) continue;
      const double* k = &kernel[r * ns];
      const double* row = &d.values[r * ns];
      double acc = 0.0;
      for (std::size_t j = 0; j < ns; ++j) acc += q[j] * k[j] * row[j];
      dist += x_pmf[r] * acc / z[r];
    }
    return dist;
  };

  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (; it < options.max_iter; ++it) {
    partition();
    std::fill(c.begin(), c.end(), 0.0);
    double log_partition = 0.0;
    for (std::size_t r = 0; r < nx; ++r) {
      if (x_pmf[r] == 0.0) continue;
      if (!(z[r] > 0.0)) {
        throw ConvergenceError("blahut_arimoto: reproduction support collapsed", gap);
      }
      log_partition += x_pmf[r] * std::log(z[r]);
      const double w = x_pmf[r] / z[r];
      const double* k = &kernel[r * ns];
      for (std::size_t j = 0; j < ns; ++j) c[j] += w * k[j];
    }
    if (options.record_trace) {
      out.distortion_trace.push_back(distortion_of_current());
      out.objective_trace.push_back(shift_term - log_partition / slope);
    }
    double max_log_c = -std::numeric_limits<double>::infinity();
    double mean_log_c = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      if (q[j] <= 0.0) continue;
      const double lc = std::log(c[j]);
      max_log_c = std::max(max_log_c, lc);
      mean_log_c += q[j] * lc;
    }
    gap = max_log_c - mean_log_c;
    for (std::size_t j = 0; j < ns; ++j) q[j] *= c[j];
    if (gap < options.tol) {
      ++it;
      break;
    }
  }
  if (!(gap < options.tol)) {
    std::ostringstream msg;
    msg << "blahut_arimoto: no convergence after " << options.max_iter
        << " iterations (residual " << gap << ")";
    throw ConvergenceError(msg.str(), gap);
  }

  // Final conditional and its true output marginal.
  const double qs = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= qs;
  partition();
  std::vector<double> q_out(ns, 0.0);
  double dist = 0.0;
  for (std::size_t r = 0; r < nx; ++r) {
    if (x_pmf[r] == 0.0) continue;
    const double* k = &kernel[r * ns];
    const double* row = &d.values[r * ns];
    for (std::size_t j = 0; j < ns; ++j) {
      const double cond = q[j] * k[j] / z[r];
      q_out[j] += x_pmf[r] * cond;
      dist += x_pmf[r] * cond * row[j];
    }
  }
  double info = 0.0;
  for (std::size_t r = 0; r < nx; ++r) {
    if (x_pmf[r] == 0.0) continue;
    const double* k = &kernel[r * ns];
    for (std::size_t j = 0; j < ns; ++j) {
      const double cond = q[j] * k[j] / z[r];
      if (cond <= 0.0 || q_out[j] <= 0.0) continue;
      info += x_pmf[r] * cond * std::log(cond / q_out[j]);
    }
  }
  out.point = RdPoint{std::max(0.0, info / kLn2), dist, slope};
  out.iterations = it;
  out.residual = gap;
  out.reproduction_pmf = std::move(q_out);
  return out;
}

std::vector<double> default_slopes(std::size_t count, double lo, double hi) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("default_slopes: need count >= 2 and 0 < lo < hi");
  }
  std::vector<double> s(count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    s[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return s;
}

std::vector<RdPoint> trace_rd_curve(const DistortionMatrix& d, std::span<const double> x_pmf,
                                    std::span<const double> slopes,
                                    const BlahutArimotoOptions& options) {
  std::vector<RdPoint> curve;
  curve.reserve(slopes.size());
  for (double s : slopes) curve.push_back(blahut_arimoto(d, x_pmf, s, options).point);
  return curve;
}

RdPoint solve_for_rate(const DistortionMatrix& d, std::span<const double> x_pmf,
                       double target_bits, double rate_tol, const BlahutArimotoOptions& options) {
  if (!(target_bits > 0.0)) throw std::invalid_argument("solve_for_rate: target must be > 0");
  double lo = std::log(1e-3);
  double hi = std::log(1e4);
  RdPoint best = blahut_arimoto(d, x_pmf, std::exp(hi), options).point;
  if (best.rate < target_bits) {
    throw std::invalid_argument("solve_for_rate: target rate beyond the reproduction grid's reach");
  }
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const RdPoint p = blahut_arimoto(d, x_pmf, std::exp(mid), options).point;
    if (std::fabs(p.rate - target_bits) < std::fabs(best.rate - target_bits)) best = p;
    if (std::fabs(p.rate - target_bits) <= rate_tol) return p;
    if (p.rate < target_bits) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace tbq
