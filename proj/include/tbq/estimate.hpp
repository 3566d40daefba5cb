// MMSE decoding and exact distortion for interval quantizers of X, plus the
// two-slot delay-element scenario where the second ADC sees a1*X1 + a2*X2.
#pragma once

#include <vector>

#include "tbq/model.hpp"
#include "tbq/quantizer.hpp"

namespace tbq {

/// Cells below this probability are "starved": they carry no usable mean and
/// contribute nothing to the distortion sum.
inline constexpr double kStarvedCellMass = 1e-300;

struct CellStatistics {
  double probability = 0.0;
  double task_cond_mean = 0.0;  // E[S | X in cell]
};

/// Mean of N(mu, sigma^2) truncated to [a, b); a and b may be infinite.
/// For a starved interval the midpoint is returned (or the finite endpoint
/// when the other one is infinite).
double truncated_gaussian_mean(double mu, double sigma, double a, double b);

/// E[S | X in [lo, hi)] = gamma * E[X | X in [lo, hi)].
double conditional_task_mean(const GaussianTaskModel& model, double lo, double hi);

std::vector<CellStatistics> cell_statistics(const GaussianTaskModel& model,
                                            const ThresholdQuantizer& q);

/// E[(S - E[S | cell])^2] = sigma_s^2 - sum_cells p * m^2.
double quantizer_mse(const GaussianTaskModel& model, const ThresholdQuantizer& q);

struct DelayParams {
  double tau1 = 0.0;  // first-slot ADC on X1
  double tau2 = 0.0;
  double tau3 = 0.0;  // second-slot ADC on a1*X1 + a2*X2
  double tau4 = 0.0;
  double a1 = 0.0;
  double a2 = 1.0;
};

/// Per-cell joint moments of the 3x3 partition of the (X1, X2) plane.
/// Index = 3 * first_cell + second_cell.
struct DelayCellMoments {
  double probability[9] = {};
  double mean_x1[9] = {};  // E[X1 ; cell]
  double mean_x2[9] = {};  // E[X2 ; cell]
};

DelayCellMoments delay_cell_moments(const GaussianTaskModel& model, const DelayParams& p,
                                    double abs_tol = 1e-11);

/// Average over the two slots of E[(S_j - E[S_j | both ADC outputs])^2].
/// Throws std::invalid_argument on unsorted thresholds or a1 = a2 = 0.
double two_shot_delay_mse(const GaussianTaskModel& model, const DelayParams& p);

/// Distortion from precomputed cell moments; shared with the optimizer's tables.
double delay_mse_from_moments(const GaussianTaskModel& model, const DelayCellMoments& m);

}  // namespace tbq
