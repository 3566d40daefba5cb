// Standard normal primitives used by every closed-form cell computation.
#pragma once

namespace tbq {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double z);

/// Lower tail P(Z <= z). Saturates to 0/1 beyond |z| > 40.
double normal_cdf(double z);

/// Upper tail P(Z > z) = normal_cdf(-z), without cancellation for large z.
double normal_sf(double z);

/// P(a <= Z < b) for a <= b (endpoints may be infinite). Uses whichever tail
/// keeps both terms small so far-tail cells keep their relative precision.
double normal_mass(double a, double b);

}  // namespace tbq
