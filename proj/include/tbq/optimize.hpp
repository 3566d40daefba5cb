// Threshold and combiner searches for the four Gaussian scenarios, plus the
// exact partition oracles on discretized models.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tbq/model.hpp"

namespace tbq {

enum class ScenarioKind { kLinear, kQuadratic, kEnvelope, kDelay };

std::string_view to_string(ScenarioKind kind);
/// Throws std::invalid_argument for unknown names.
ScenarioKind scenario_from_string(std::string_view name);

/// Free parameters: linear 2 thresholds, quadratic/envelope 3 thresholds,
/// delay (tau1..tau4, a1, a2).
std::size_t parameter_count(ScenarioKind kind);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kLinear;
  GaussianTaskModel model{1.0, 1.0};
  double grid_range = 3.0;  // threshold grid half-width, in units of sigma_x
  double grid_step = 0.01;  // absolute threshold step
  // Coarse grids for the two-slot delay search.
  double delay_threshold_step = 0.05;
  double delay_weight_step = 0.1;
  double delay_weight_range = 2.0;

  void validate() const;
};

struct DistortionReport {
  ScenarioSpec scenario;
  std::vector<double> best_params;
  double best_mse = 0.0;
  double idrf_bound = 0.0;
  std::size_t evaluations = 0;
  std::vector<std::string> notes;
};

struct ThresholdSearchResult {
  std::vector<double> thresholds;
  double mse = 0.0;
  std::size_t evaluations = 0;
};

/// Exhaustive sweep over strictly increasing tuples on {k * step : |k * step| <= range}.
/// Ties resolve to the lexicographically smallest tuple.
ThresholdSearchResult grid_search_thresholds(const GaussianTaskModel& model,
                                             std::size_t num_thresholds, double range,
                                             double step);

struct RefineResult {
  std::vector<double> params;
  double mse = 0.0;
  std::size_t evaluations = 0;
  std::size_t cycles = 0;
};

/// Cyclic coordinate descent with a golden-section line search per coordinate.
/// Threshold coordinates stay strictly ordered; for the delay scenario a2 is held
/// fixed. Never returns a value worse than the starting point.
RefineResult refine_local(const GaussianTaskModel& model, const std::vector<double>& init,
                          ScenarioKind kind);

/// Objective used by refine_local; +inf for infeasible parameter vectors.
double scenario_objective(const GaussianTaskModel& model, ScenarioKind kind,
                          const std::vector<double>& params);

DistortionReport optimize_scenario(const ScenarioSpec& spec);

/// Exact minimum over partitions of the ordered grid into num_cells contiguous
/// groups, with conditional-mean decoding per group. Grids above 40 points are rejected.
double brute_force_quantizer_search(const DiscretizedJointModel& dm, std::size_t num_cells);

/// Same minimum over all (not necessarily contiguous) partitions into at most
/// num_cells groups. Grids above 12 points are rejected.
double brute_force_set_partition_search(const DiscretizedJointModel& dm, std::size_t num_cells);

}  // namespace tbq
