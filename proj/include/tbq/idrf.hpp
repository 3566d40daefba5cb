// Indirect distortion-rate limit for reconstructing S from a rate-limited
// description of X: Gaussian closed form and a Blahut-Arimoto solver on the
// equivalent direct problem with distortion E[(S - s_hat)^2 | X = x].
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tbq/model.hpp"

namespace tbq {

struct RdPoint {
  double rate = 0.0;        // bits per symbol
  double distortion = 0.0;
  double slope = 0.0;       // Lagrange multiplier beta (nats per unit distortion)
};

/// mmse + (sigma_s^2 - mmse) * 2^{-2R}.
double gaussian_idrf(const GaussianTaskModel& model, double rate_bits);

/// Row-major |x_grid| x |reconstruction| matrix of conditional distortions.
struct DistortionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> reconstruction;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// d(x, s_hat) = E[S^2 | x] - 2 s_hat E[S | x] + s_hat^2.
DistortionMatrix reduce_to_direct(const DiscretizedJointModel& dm,
                                  std::vector<double> reconstruction_grid);

/// Evenly spaced reproduction points over +-4 * gamma * sigma_x.
std::vector<double> default_reconstruction_grid(const GaussianTaskModel& model,
                                                std::size_t points);

struct BlahutArimotoOptions {
  double tol = 1e-5;                 // Blahut's upper-minus-lower rate bound, nats
  std::size_t max_iter = 100000;
  bool record_trace = false;
  /// Starting reproduction pmf; defaults to a narrow bump at the zero-rate point.
  std::optional<std::vector<double>> initial_pmf;
};

struct BlahutArimotoResult {
  RdPoint point;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> reproduction_pmf;
  /// Per-iteration distortion of the conditional induced by the current marginal.
  std::vector<double> distortion_trace;
  /// Per-iteration value of min_Q { D + I/beta } (non-increasing).
  std::vector<double> objective_trace;
};

/// Throws ConvergenceError (carrying the residual) after max_iter iterations.
BlahutArimotoResult blahut_arimoto(const DistortionMatrix& d, std::span<const double> x_pmf,
                                   double slope, const BlahutArimotoOptions& options = {});

/// 30 geometrically spaced slopes over [1e-3, 1e3].
std::vector<double> default_slopes(std::size_t count = 30, double lo = 1e-3, double hi = 1e3);

std::vector<RdPoint> trace_rd_curve(const DistortionMatrix& d, std::span<const double> x_pmf,
                                    std::span<const double> slopes,
                                    const BlahutArimotoOptions& options = {});

/// Bisection on log(slope) until the BA rate is within rate_tol bits of target.
RdPoint solve_for_rate(const DistortionMatrix& d, std::span<const double> x_pmf,
                       double target_bits, double rate_tol = 1e-4,
                       const BlahutArimotoOptions& options = {});

}  // namespace tbq
