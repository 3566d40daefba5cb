#include "tbq/normal.hpp"

#include <cmath>

namespace tbq {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSaturation = 40.0;
}  // namespace

double normal_pdf(double z) {
  if (!std::isfinite(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
  if (z <= -kSaturation) return 0.0;
  if (z >= kSaturation) return 1.0;
  if (z <= 0.0) return 0.5 * std::erfc(-z * kInvSqrt2);
  // Mirror the lower half so that cdf(z) + cdf(-z) == 1 up to one rounding.
  return 1.0 - 0.5 * std::erfc(z * kInvSqrt2);
}

double normal_sf(double z) { return normal_cdf(-z); }

double normal_mass(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  return normal_cdf(b) - normal_cdf(a);
}

}  // namespace tbq
