// Jointly Gaussian task/measurement pair S ~ N(0, sigma_s^2), X = S + N.
#pragma once

#include <cstddef>
#include <vector>

namespace tbq {

class GaussianTaskModel {
 public:
  /// Throws std::invalid_argument unless sigma_s > 0 and sigma_n >= 0.
  GaussianTaskModel(double sigma_s, double sigma_n);

  double sigma_s() const { return sigma_s_; }
  double sigma_n() const { return sigma_n_; }
  double sigma_x() const { return sigma_x_; }
  double task_variance() const { return sigma_s_ * sigma_s_; }

  /// Linear MMSE gain E[S | X = x] = gamma * x.
  double gamma() const { return gamma_; }

  /// Var(S | X), independent of x.
  double conditional_variance() const { return task_variance() * (1.0 - gamma_); }

  /// Distortion of the unquantized MMSE estimator.
  double mmse() const { return conditional_variance(); }

 private:
  double sigma_s_;
  double sigma_n_;
  double sigma_x_;
  double gamma_;
};

struct DiscretizedJointModel {
  std::vector<double> x_grid;
  std::vector<double> x_pmf;
  std::vector<double> s_grid;
  std::vector<double> cond_s_mean;
  std::vector<double> cond_s_second_moment;

  std::size_t size() const { return x_grid.size(); }
};

/// Uniform grid over +-half_width_sigmas * sigma_x. Each point carries the
/// Gaussian mass of its cell (midpoints between neighbours, outermost cells
/// extended to infinity), renormalized to sum to one. s_grid mirrors the
/// conditional means so that callers have a reconstruction axis handy.
DiscretizedJointModel discretize(const GaussianTaskModel& model, double half_width_sigmas,
                                 std::size_t points);

/// Builds a discretized model from an arbitrary sorted x grid and a pmf.
/// Conditional moments follow the Gaussian model. Used by the brute-force oracles.
DiscretizedJointModel discretize_on_grid(const GaussianTaskModel& model,
                                         std::vector<double> x_grid);

}  // namespace tbq
