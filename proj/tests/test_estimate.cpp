#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <utility>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tbq/estimate.hpp"

using namespace tbq;

namespace {

constexpr double kInf = INFINITY;

double simpson_half_normal_mean() {
  return static_cast<double>(
      2.0L * oracle::simpson([](long double x) { return x * std::exp(-0.5L * x * x) /
                                                        std::sqrt(2.0L * 3.14159265358979323846L); },
                             0.0L, 40.0L));
}

}  // namespace

TEST(TruncatedMean, Examples) {
  EXPECT_NEAR(truncated_gaussian_mean(0.0, 1.0, -kInf, kInf), 0.0, 1e-15);
  const double half = simpson_half_normal_mean();
  EXPECT_NEAR(half, 0.7978846, 1e-7);
  EXPECT_NEAR(truncated_gaussian_mean(0.0, 1.0, 0.0, kInf), half, 1e-12);
  EXPECT_NEAR(truncated_gaussian_mean(0.0, 1.0, -1.0, 1.0), 0.0, 1e-15);
}

TEST(TruncatedMean, MatchesQuadratureOnBoundedCells) {
  for (auto [a, b] : {std::pair{-0.3, 1.7}, std::pair{2.0, 2.5}, std::pair{-6.0, -4.0}}) {
    auto w = [](long double x) { return std::exp(-0.5L * x * x); };
    const long double num = oracle::simpson([&](long double x) { return x * w(x); }, a, b, 20000);
    const long double den = oracle::simpson(w, a, b, 20000);
    EXPECT_NEAR(truncated_gaussian_mean(0.0, 1.0, a, b), static_cast<double>(num / den), 1e-10);
  }
  // Shifted and scaled.
  EXPECT_NEAR(truncated_gaussian_mean(3.0, 2.0, 3.0, kInf), 3.0 + 2.0 * simpson_half_normal_mean(),
              1e-12);
}

TEST(TruncatedMean, StarvedCellsStayInsideTheInterval) {
  EXPECT_DOUBLE_EQ(truncated_gaussian_mean(0.0, 1.0, 50.0, 52.0), 51.0);
  EXPECT_DOUBLE_EQ(truncated_gaussian_mean(0.0, 1.0, 60.0, kInf), 60.0);
  EXPECT_DOUBLE_EQ(truncated_gaussian_mean(0.0, 1.0, -kInf, -60.0), -60.0);
  const double far = truncated_gaussian_mean(0.0, 1.0, 30.0, 31.0);
  EXPECT_GE(far, 30.0);
  EXPECT_LT(far, 31.0);
}

TEST(ConditionalTaskMean, MatchesMonteCarlo) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> z(0.0, 1.0);
  long double sum = 0.0L, sum2 = 0.0L;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < 10000000; ++i) {
    const double s = z(rng);
    const double x = s + z(rng);
    if (x >= 0.0) {
      sum += s;
      sum2 += static_cast<long double>(s) * s;
      ++hits;
    }
  }
  const double mean = static_cast<double>(sum / hits);
  const double se = std::sqrt(static_cast<double>((sum2 / hits - sum / hits * (sum / hits)) / hits));
  GaussianTaskModel m(1.0, 1.0);
  const double v = conditional_task_mean(m, 0.0, kInf);
  EXPECT_NEAR(v, 0.5641896, 1e-7);
  EXPECT_LE(std::fabs(v - mean), 3.0 * se);
}

TEST(ConditionalTaskMean, Examples) {
  EXPECT_NEAR(conditional_task_mean(GaussianTaskModel(1.0, 1.0), -kInf, kInf), 0.0, 1e-15);
  EXPECT_NEAR(conditional_task_mean(GaussianTaskModel(1.0, 0.0), 0.0, kInf),
              simpson_half_normal_mean(), 1e-12);
}

TEST(QuantizerMse, NoThresholdsGivesPriorVariance) {
  for (double sn : {0.0, 0.5, 2.0}) {
    EXPECT_NEAR(quantizer_mse(GaussianTaskModel(1.0, sn), ThresholdQuantizer()), 1.0, 1e-15);
  }
  EXPECT_NEAR(quantizer_mse(GaussianTaskModel(3.0, 1.0), ThresholdQuantizer()), 9.0, 1e-12);
}

TEST(QuantizerMse, OneBitMatchesMonteCarlo) {
  GaussianTaskModel m(1.0, 0.0);
  const double v = quantizer_mse(m, ThresholdQuantizer({0.0}));
  const double half = simpson_half_normal_mean();
  EXPECT_NEAR(v, 1.0 - half * half, 1e-12);
  EXPECT_NEAR(v, 0.3633803, 1e-7);
  const auto mc = oracle::mc_quantizer_mse(1.0, 0.0, {0.0}, 10000000, 99);
  EXPECT_LE(std::fabs(v - mc.mse), 3.0 * mc.se);
}

TEST(QuantizerMse, LloydMaxThreeLevels) {
  const auto lm = oracle::lloyd_max_standard_normal(3);
  EXPECT_NEAR(lm.thresholds[1], 0.6120, 5e-4);
  GaussianTaskModel m(1.0, 0.0);
  EXPECT_NEAR(quantizer_mse(m, ThresholdQuantizer({-0.6120, 0.6120})), lm.mse, 5e-4);
  EXPECT_NEAR(quantizer_mse(m, ThresholdQuantizer(lm.thresholds)), lm.mse, 1e-9);
}

TEST(QuantizerMse, BoundsAndRefinement) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> noise(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    GaussianTaskModel m(1.0, noise(rng));
    std::vector<double> t(3);
    for (auto& v : t) v = u(rng);
    std::sort(t.begin(), t.end());
    const double d = quantizer_mse(m, ThresholdQuantizer(t));
    EXPECT_GE(d, m.mmse() - 1e-12);
    EXPECT_LE(d, m.task_variance() + 1e-12);
    auto finer = t;
    finer.push_back(u(rng));
    std::sort(finer.begin(), finer.end());
    if (std::adjacent_find(finer.begin(), finer.end()) != finer.end()) continue;
    EXPECT_LE(quantizer_mse(m, ThresholdQuantizer(finer)), d + 1e-14);
  }
}

TEST(CellStatistics, ProbabilitiesSumToOne) {
  GaussianTaskModel m(1.0, 0.7);
  const auto cells = cell_statistics(m, ThresholdQuantizer({-1.0, 0.2, 0.9}));
  ASSERT_EQ(cells.size(), 4u);
  double total = 0.0, mean = 0.0;
  for (const auto& c : cells) {
    total += c.probability;
    mean += c.probability * c.task_cond_mean;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(mean, 0.0, 1e-14);
}

TEST(TwoShotDelay, ReducesToOneShotWithoutCrossWeight) {
  GaussianTaskModel m(1.0, 1.0);
  DelayParams p{-0.8, 0.8, -0.8, 0.8, 0.0, 1.0};
  EXPECT_NEAR(two_shot_delay_mse(m, p), quantizer_mse(m, ThresholdQuantizer({-0.8, 0.8})), 1e-9);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const DelayParams q{a, b, c, d, 0.0, 1.0};
    const double expected = 0.5 * (quantizer_mse(m, ThresholdQuantizer({a, b})) +
                                   quantizer_mse(m, ThresholdQuantizer({c, d})));
    EXPECT_NEAR(two_shot_delay_mse(m, q), expected, 1e-9);
  }
}

TEST(TwoShotDelay, MatchesMonteCarloWithCrossWeight) {
  GaussianTaskModel m(1.0, 1.0);
  const double v = two_shot_delay_mse(m, DelayParams{-0.8, 0.8, -0.8, 0.8, 0.3, 1.0});
  const auto mc = oracle::mc_delay_mse(1.0, 1.0, -0.8, 0.8, -0.8, 0.8, 0.3, 1.0, 10000000, 4242);
  EXPECT_LE(std::fabs(v - mc.mse), 3.0 * mc.se) << v << " vs " << mc.mse << " se " << mc.se;
}

TEST(TwoShotDelay, ZeroSecondWeightIsHandled) {
  GaussianTaskModel m(1.0, 0.5);
  const double v = two_shot_delay_mse(m, DelayParams{-0.5, 0.5, -0.3, 0.4, 1.0, 0.0});
  const auto mc = oracle::mc_delay_mse(1.0, 0.5, -0.5, 0.5, -0.3, 0.4, 1.0, 0.0, 2000000, 8);
  EXPECT_LE(std::fabs(v - mc.mse), 3.0 * mc.se);
}

TEST(TwoShotDelay, RejectsInvalidInput) {
  GaussianTaskModel m(1.0, 1.0);
  EXPECT_THROW(two_shot_delay_mse(m, DelayParams{1.0, 0.0, -1.0, 1.0, 0.0, 1.0}),
               std::invalid_argument);
  EXPECT_THROW(two_shot_delay_mse(m, DelayParams{-1.0, 1.0, -1.0, 1.0, 0.0, 0.0}),
               std::invalid_argument);
}
