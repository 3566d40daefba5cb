#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tbq/errors.hpp"
#include "tbq/idrf.hpp"

using namespace tbq;

namespace {

struct Instance {
  DiscretizedJointModel dm;
  DistortionMatrix d;
};

Instance make_instance(std::size_t points, std::size_t recon) {
  GaussianTaskModel m(1.0, 1.0);
  auto dm = discretize(m, 6.0, points);
  auto d = reduce_to_direct(dm, default_reconstruction_grid(m, recon));
  return Instance{std::move(dm), std::move(d)};
}

const Instance& unit_instance() {
  static const Instance inst = make_instance(601, 121);
  return inst;
}

// Coarser grid for tests that run many solves.
const Instance& small_instance() {
  static const Instance inst = make_instance(201, 41);
  return inst;
}

}  // namespace

TEST(GaussianIdrf, ClosedFormExamples) {
  for (double sn : {0.0, 0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(gaussian_idrf(GaussianTaskModel(1.0, sn), 0.0), 1.0);
  }
  GaussianTaskModel noiseless(1.0, 0.0);
  for (double r : {0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(gaussian_idrf(noiseless, r), std::pow(2.0, -2 * r), 1e-15);
  GaussianTaskModel m(1.0, 1.0);
  EXPECT_NEAR(gaussian_idrf(m, 2.0), 0.5 + 0.5 / 16.0, 1e-15);
  EXPECT_NEAR(gaussian_idrf(m, 30.0), m.mmse(), 1e-15);
  EXPECT_THROW(gaussian_idrf(m, -1.0), std::invalid_argument);
}

TEST(GaussianIdrf, DecreasingAndConvexInRate) {
  GaussianTaskModel m(1.3, 0.7);
  double prev = gaussian_idrf(m, 0.0), prev_drop = INFINITY;
  for (double r = 0.1; r <= 5.0; r += 0.1) {
    const double v = gaussian_idrf(m, r);
    EXPECT_LT(v, prev);
    EXPECT_LT(prev - v, prev_drop);
    prev_drop = prev - v;
    prev = v;
  }
}

TEST(ReduceToDirect, Examples) {
  GaussianTaskModel m(1.0, 1.0);
  const auto dm = discretize_on_grid(m, {-1.0, 0.0, 1.0, 2.0});
  const auto d = reduce_to_direct(dm, dm.cond_s_mean);
  EXPECT_NEAR(d(1, 1), 0.5, 1e-15);
  for (std::size_t r = 0; r < d.rows; ++r) {
    double row_min = INFINITY;
    for (std::size_t c = 0; c < d.cols; ++c) {
      EXPECT_GE(d(r, c), 0.0);
      row_min = std::min(row_min, d(r, c));
    }
    EXPECT_NEAR(row_min, m.conditional_variance(), 1e-14);
    EXPECT_NEAR(d(r, r), m.conditional_variance(), 1e-14);
  }
  const auto& big = unit_instance().d;
  EXPECT_EQ(big.rows, 601u);
  EXPECT_EQ(big.cols, 121u);
  EXPECT_GE(*std::min_element(big.values.begin(), big.values.end()), 0.0);
}

TEST(BlahutArimoto, ZeroRateEndpoint) {
  const auto& inst = unit_instance();
  double best = INFINITY;
  for (std::size_t c = 0; c < inst.d.cols; ++c) {
    double v = 0.0;
    for (std::size_t r = 0; r < inst.d.rows; ++r) v += inst.dm.x_pmf[r] * inst.d(r, c);
    best = std::min(best, v);
  }
  const auto res = blahut_arimoto(inst.d, inst.dm.x_pmf, 1e-3);
  EXPECT_LT(res.point.rate, 1e-3);
  EXPECT_NEAR(res.point.distortion, best, 1e-3);
  // Iterating from a uniform start reaches the same endpoint.
  BlahutArimotoOptions opt;
  opt.initial_pmf = std::vector<double>(inst.d.cols, 1.0);
  opt.tol = 1e-4;
  const auto iterated = blahut_arimoto(inst.d, inst.dm.x_pmf, 0.05, opt);
  EXPECT_LT(iterated.point.rate, 1e-2);
  EXPECT_NEAR(iterated.point.distortion, best, 1e-2);
}

TEST(BlahutArimoto, RateTwoMatchesClosedForm) {
  const auto& inst = small_instance();
  const auto p = solve_for_rate(inst.d, inst.dm.x_pmf, 2.0, 1e-3);
  EXPECT_NEAR(p.rate, 2.0, 1e-3);
  EXPECT_NEAR(p.distortion, 0.53125, 1e-2);
}

TEST(BlahutArimoto, ObjectiveNeverIncreases) {
  const auto& inst = unit_instance();
  BlahutArimotoOptions opt;
  opt.record_trace = true;
  for (double beta : {0.5, 4.0, 200.0}) {
    const auto res = blahut_arimoto(inst.d, inst.dm.x_pmf, beta, opt);
    ASSERT_EQ(res.objective_trace.size(), res.iterations);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      EXPECT_LE(res.objective_trace[i], res.objective_trace[i - 1] + 1e-13) << beta << " @" << i;
    }
  }
}

TEST(BlahutArimoto, DistortionNeverIncreasesNearRateTwo) {
  const auto& inst = unit_instance();
  BlahutArimotoOptions opt;
  opt.record_trace = true;
  const auto res = blahut_arimoto(inst.d, inst.dm.x_pmf, 16.0, opt);
  for (std::size_t i = 1; i < res.distortion_trace.size(); ++i) {
    EXPECT_LE(res.distortion_trace[i], res.distortion_trace[i - 1] + 1e-13) << i;
    EXPECT_LE(res.objective_trace[i], res.objective_trace[i - 1] + 1e-13) << i;
  }
  EXPECT_NEAR(res.distortion_trace.back(), res.point.distortion, 1e-6);
}

TEST(BlahutArimoto, CurveIsConvexAndNonIncreasing) {
  const auto& inst = small_instance();
  const auto slopes = default_slopes(20, 0.05, 200.0);
  auto curve = trace_rd_curve(inst.d, inst.dm.x_pmf, slopes);
  std::sort(curve.begin(), curve.end(), [](auto& a, auto& b) { return a.rate < b.rate; });
  // Slopes below the critical one all land on the zero-rate point.
  curve.erase(std::unique(curve.begin(), curve.end(),
                          [](auto& a, auto& b) { return b.rate - a.rate < 1e-9; }),
              curve.end());
  ASSERT_GE(curve.size(), 10u);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_LE(curve[i].distortion, curve[i - 1].distortion + 1e-9);
  }
  for (std::size_t i = 2; i < curve.size(); ++i) {
    const double s1 = (curve[i - 1].distortion - curve[i - 2].distortion) /
                      (curve[i - 1].rate - curve[i - 2].rate);
    const double s2 = (curve[i].distortion - curve[i - 1].distortion) /
                      (curve[i].rate - curve[i - 1].rate);
    EXPECT_GE(s2, s1 - 1e-6) << i;
  }
  // Every point lies on or above the continuous closed form.
  GaussianTaskModel m(1.0, 1.0);
  for (const auto& p : curve) EXPECT_GE(p.distortion, gaussian_idrf(m, p.rate) - 5e-3);
}

TEST(BlahutArimoto, IterationCapRaisesConvergenceError) {
  const auto& inst = unit_instance();
  BlahutArimotoOptions opt;
  opt.max_iter = 3;
  opt.tol = 1e-15;
  try {
    blahut_arimoto(inst.d, inst.dm.x_pmf, 4.0, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(BlahutArimoto, RejectsBadInput) {
  const auto& inst = unit_instance();
  EXPECT_THROW(blahut_arimoto(inst.d, inst.dm.x_pmf, 0.0), std::invalid_argument);
  const std::vector<double> short_pmf = {1.0};
  EXPECT_THROW(blahut_arimoto(inst.d, short_pmf, 1.0), std::invalid_argument);
}
