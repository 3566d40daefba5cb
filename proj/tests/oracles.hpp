// Independent reference computations for the test suites. Nothing here calls
// into the library's estimation or optimization code.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

/// Composite Simpson rule in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a,
                           long double b, int panels = 200000) {
  if (panels % 2) ++panels;
  const long double h = (b - a) / panels;
  long double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + h * i) * (i % 2 ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

inline long double std_normal_cdf_simpson(long double z) {
  auto pdf = [](long double t) { return std::exp(-0.5L * t * t) / std::sqrt(2.0L * 3.14159265358979323846L); };
  return 0.5L + (z >= 0 ? simpson(pdf, 0.0L, z) : -simpson(pdf, z, 0.0L));
}

struct LloydMaxResult {
  std::vector<double> thresholds;
  std::vector<double> codebook;
  double mse = 0.0;
};

/// Lloyd-Max fixed point for N(0,1): centroid and midpoint conditions iterated to
/// convergence, distortion evaluated by Simpson quadrature of (x - c)^2 phi(x).
inline LloydMaxResult lloyd_max_standard_normal(int levels) {
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  std::vector<double> c(levels);
  for (int i = 0; i < levels; ++i) c[i] = -1.5 + 3.0 * (i + 0.5) / levels;
  std::vector<double> t(levels - 1);
  for (int it = 0; it < 100000; ++it) {
    for (int i = 0; i + 1 < levels; ++i) t[i] = 0.5 * (c[i] + c[i + 1]);
    double move = 0.0;
    for (int i = 0; i < levels; ++i) {
      const double a = i == 0 ? -INFINITY : t[i - 1];
      const double b = i + 1 == levels ? INFINITY : t[i];
      const double mass = cdf(b) - cdf(a);
      const double nc = (phi(a) - phi(b)) / mass;
      move = std::max(move, std::fabs(nc - c[i]));
      c[i] = nc;
    }
    if (move < 1e-15) break;
  }
  for (int i = 0; i + 1 < levels; ++i) t[i] = 0.5 * (c[i] + c[i + 1]);
  long double mse = 0.0L;
  for (int i = 0; i < levels; ++i) {
    const long double a = i == 0 ? -12.0L : t[i - 1];
    const long double b = i + 1 == levels ? 12.0L : t[i];
    const long double ci = c[i];
    mse += simpson([&](long double x) { return (x - ci) * (x - ci) * std::exp(-0.5L * x * x) /
                                                std::sqrt(2.0L * 3.14159265358979323846L); },
                   a, b, 20000);
  }
  return {t, c, static_cast<double>(mse)};
}

struct McEstimate {
  double mse = 0.0;
  double se = 0.0;
};

/// Per-cell power sums of the task samples; the in-sample conditional-mean
/// decoder's squared error and its variance follow without storing samples.
class CellAccumulator {
 public:
  explicit CellAccumulator(std::size_t cells) : n_(cells, 0), s_(cells, std::array<long double, 4>{}) {}

  void add(std::size_t cell, long double s) {
    ++n_[cell];
    long double p = s;
    for (auto& v : s_[cell]) {
      v += p;
      p *= s;
    }
  }

  /// Sum over samples of (s - m)^2 and (s - m)^4 with m the cell mean.
  std::pair<long double, long double> error_sums() const {
    long double e2 = 0.0L, e4 = 0.0L;
    for (std::size_t c = 0; c < n_.size(); ++c) {
      if (n_[c] == 0) continue;
      const long double n = n_[c];
      const auto& p = s_[c];
      const long double m = p[0] / n;
      e2 += p[1] - 2 * m * p[0] + n * m * m;
      e4 += p[3] - 4 * m * p[2] + 6 * m * m * p[1] - 4 * m * m * m * p[0] + n * m * m * m * m;
    }
    return {e2, e4};
  }

 private:
  std::vector<std::uint64_t> n_;
  std::vector<std::array<long double, 4>> s_;
};

inline std::size_t cell_index(const std::vector<double>& t, double x) {
  return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
}

/// One-shot quantizer MSE with empirically estimated cell means.
inline McEstimate mc_quantizer_mse(double sigma_s, double sigma_n, const std::vector<double>& t,
                                   std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  CellAccumulator acc(t.size() + 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = sigma_s * z(rng);
    const double x = s + sigma_n * z(rng);
    acc.add(cell_index(t, x), s);
  }
  const auto [e2, e4] = acc.error_sums();
  const long double n = samples;
  const long double mean = e2 / n;
  const long double var = e4 / n - mean * mean;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

/// Two-slot delay scenario: the first ADC quantizes X1 with (t1, t2), the second
/// quantizes a1 X1 + a2 X2 with (t3, t4); both tasks are decoded from the joint cell.
inline McEstimate mc_delay_mse(double sigma_s, double sigma_n, double t1, double t2, double t3,
                               double t4, double a1, double a2, std::size_t samples,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::vector<double> first = {t1, t2};
  const std::vector<double> second = {t3, t4};
  // m[cell][a][b] = sum of s1^a s2^b for a, b in 0..4 (only a + b <= 4 is used).
  std::vector<std::array<std::array<long double, 5>, 5>> m(9);
  for (auto& cell : m)
    for (auto& row : cell) row.fill(0.0L);
  for (std::size_t i = 0; i < samples; ++i) {
    const double s1 = sigma_s * z(rng);
    const double x1 = s1 + sigma_n * z(rng);
    const double s2 = sigma_s * z(rng);
    const double x2 = s2 + sigma_n * z(rng);
    auto& cell = m[3 * cell_index(first, x1) + cell_index(second, a1 * x1 + a2 * x2)];
    long double pa = 1.0L;
    for (int a = 0; a <= 4; ++a) {
      long double pb = pa;
      for (int b = 0; a + b <= 4; ++b) {
        cell[a][b] += pb;
        pb *= s2;
      }
      pa *= s1;
    }
  }
  // e = ((s1 - m1)^2 + (s2 - m2)^2) / 2 with in-sample cell means m1, m2.
  long double sum_e = 0.0L, sum_e2 = 0.0L;
  for (const auto& c : m) {
    const long double n = c[0][0];
    if (n == 0.0L) continue;
    const long double m1 = c[1][0] / n;
    const long double m2 = c[0][1] / n;
    // (s - m)^2 = s^2 - 2 m s + m^2 as coefficients on powers 0..2.
    const std::array<long double, 3> p = {m1 * m1, -2 * m1, 1.0L};
    const std::array<long double, 3> q = {m2 * m2, -2 * m2, 1.0L};
    long double e1 = 0, e2 = 0, e1sq = 0, e2sq = 0, e12 = 0;
    for (int a = 0; a <= 2; ++a) {
      e1 += p[a] * c[a][0];
      e2 += q[a] * c[0][a];
      for (int b = 0; b <= 2; ++b) {
        e1sq += p[a] * p[b] * c[a + b][0];
        e2sq += q[a] * q[b] * c[0][a + b];
        e12 += p[a] * q[b] * c[a][b];
      }
    }
    sum_e += 0.5L * (e1 + e2);
    sum_e2 += 0.25L * (e1sq + e2sq + 2.0L * e12);
  }
  const long double N = samples;
  const long double mean = sum_e / N;
  const long double var = sum_e2 / N - mean * mean;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / N))};
}

}  // namespace oracle
