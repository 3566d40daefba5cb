#include "tbq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tbq {

void require_strictly_increasing(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(what) + ": thresholds must be finite");
    }
    if (i > 0 && !(values[i - 1] < values[i])) {
      throw std::invalid_argument(std::string(what) + ": thresholds must be strictly increasing");
    }
  }
}

std::size_t adc_level(std::span<const double> row_thresholds, double w) {
  // Number of thresholds <= w, i.e. the left-closed cell index.
  return static_cast<std::size_t>(
      std::upper_bound(row_thresholds.begin(), row_thresholds.end(), w) - row_thresholds.begin());
}

ThresholdQuantizer::ThresholdQuantizer(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
  require_strictly_increasing(thresholds_, "ThresholdQuantizer");
}

double ThresholdQuantizer::cell_lower(std::size_t i) const {
  if (i == 0) return -std::numeric_limits<double>::infinity();
  return thresholds_.at(i - 1);
}

double ThresholdQuantizer::cell_upper(std::size_t i) const {
  if (i == thresholds_.size()) return std::numeric_limits<double>::infinity();
  return thresholds_.at(i);
}

std::size_t cell_of(const ThresholdQuantizer& q, double x) { return adc_level(q.thresholds(), x); }

AdcBank::AdcBank(std::size_t kappa, std::vector<std::vector<double>> threshold_matrix)
    : kappa_(kappa), rows_(std::move(threshold_matrix)) {
  if (kappa < 2) throw std::invalid_argument("AdcBank: kappa must be >= 2");
  if (rows_.empty()) throw std::invalid_argument("AdcBank: need at least one ADC");
  for (const auto& r : rows_) {
    if (r.size() != kappa - 1) {
      throw std::invalid_argument("AdcBank: each row needs kappa - 1 thresholds");
    }
    require_strictly_increasing(r, "AdcBank");
  }
}

std::size_t AdcBank::alphabet_size() const {
  std::size_t out = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / kappa_) {
      return std::numeric_limits<std::size_t>::max();
    }
    out *= kappa_;
  }
  return out;
}

AdcWord bank_output(const AdcBank& bank, std::span<const double> analog_values) {
  if (analog_values.size() != bank.num_adcs()) {
    throw std::invalid_argument("bank_output: expected " + std::to_string(bank.num_adcs()) +
                                " analog values, got " + std::to_string(analog_values.size()));
  }
  AdcWord word(analog_values.size());
  for (std::size_t i = 0; i < word.size(); ++i) word[i] = adc_level(bank.row(i), analog_values[i]);
  return word;
}

}  // namespace tbq
