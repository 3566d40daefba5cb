#include "tbq/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tbq/normal.hpp"

namespace tbq {

GaussianTaskModel::GaussianTaskModel(double sigma_s, double sigma_n)
    : sigma_s_(sigma_s), sigma_n_(sigma_n) {
  if (!(sigma_s > 0.0) || !std::isfinite(sigma_s)) {
    throw std::invalid_argument("sigma_s must be positive and finite, got " +
                                std::to_string(sigma_s));
  }
  if (!(sigma_n >= 0.0) || !std::isfinite(sigma_n)) {
    throw std::invalid_argument("sigma_n must be non-negative and finite, got " +
                                std::to_string(sigma_n));
  }
  const double vs = sigma_s * sigma_s;
  const double vx = vs + sigma_n * sigma_n;
  sigma_x_ = std::sqrt(vx);
  gamma_ = vs / vx;
}

DiscretizedJointModel discretize_on_grid(const GaussianTaskModel& model,
                                         std::vector<double> x_grid) {
  if (x_grid.size() < 2) throw std::invalid_argument("discretization needs at least 2 points");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i - 1] < x_grid[i])) {
      throw std::invalid_argument("discretization grid must be strictly increasing");
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double sx = model.sigma_x();
  const std::size_t n = x_grid.size();

  DiscretizedJointModel dm;
  dm.x_pmf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? -inf : 0.5 * (x_grid[i - 1] + x_grid[i]);
    const double hi = i + 1 == n ? inf : 0.5 * (x_grid[i] + x_grid[i + 1]);
    dm.x_pmf[i] = normal_mass(lo / sx, hi / sx);
  }
  const double total = std::accumulate(dm.x_pmf.begin(), dm.x_pmf.end(), 0.0);
  for (double& p : dm.x_pmf) p /= total;

  dm.cond_s_mean.resize(n);
  dm.cond_s_second_moment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = model.gamma() * x_grid[i];
    dm.cond_s_mean[i] = m;
    dm.cond_s_second_moment[i] = model.conditional_variance() + m * m;
  }
  dm.s_grid = dm.cond_s_mean;
  dm.x_grid = std::move(x_grid);
  return dm;
}

DiscretizedJointModel discretize(const GaussianTaskModel& model, double half_width_sigmas,
                                 std::size_t points) {
  if (points < 2) throw std::invalid_argument("discretize: points must be >= 2");
  if (!(half_width_sigmas > 0.0)) {
    throw std::invalid_argument("discretize: half_width_sigmas must be positive");
  }
  const double half = half_width_sigmas * model.sigma_x();
  std::vector<double> grid(points);
  const double step = 2.0 * half / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = -half + step * static_cast<double>(i);
  return discretize_on_grid(model, std::move(grid));
}

}  // namespace tbq
