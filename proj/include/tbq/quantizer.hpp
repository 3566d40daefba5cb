// Interval quantizers and banks of kappa-level ADCs.
//
// Cells are left-closed: level k covers [t_k, t_{k+1}) with implicit
// sentinels t_0 = -inf and t_kappa = +inf.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tbq {

/// Level index of `w` for a strictly increasing threshold row.
std::size_t adc_level(std::span<const double> row_thresholds, double w);

class ThresholdQuantizer {
 public:
  ThresholdQuantizer() = default;
  /// Throws std::invalid_argument on ties, unsorted input or non-finite values.
  explicit ThresholdQuantizer(std::vector<double> thresholds);

  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t num_thresholds() const { return thresholds_.size(); }
  std::size_t num_cells() const { return thresholds_.size() + 1; }

  /// Lower/upper edge of cell i, with +-infinity at the ends.
  double cell_lower(std::size_t i) const;
  double cell_upper(std::size_t i) const;

 private:
  std::vector<double> thresholds_;
};

std::size_t cell_of(const ThresholdQuantizer& q, double x);

/// Throws std::invalid_argument if `values` is not strictly increasing and finite.
void require_strictly_increasing(std::span<const double> values, const char* what);

class AdcBank {
 public:
  /// Each row must hold kappa - 1 strictly increasing thresholds.
  AdcBank(std::size_t kappa, std::vector<std::vector<double>> threshold_matrix);

  std::size_t num_adcs() const { return rows_.size(); }
  std::size_t kappa() const { return kappa_; }
  const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }

  /// kappa^{n_q}; saturates at SIZE_MAX.
  std::size_t alphabet_size() const;

 private:
  std::size_t kappa_;
  std::vector<std::vector<double>> rows_;
};

using AdcWord = std::vector<std::size_t>;

/// Componentwise adc_level. Throws std::invalid_argument on dimension mismatch.
AdcWord bank_output(const AdcBank& bank, std::span<const double> analog_values);

}  // namespace tbq
