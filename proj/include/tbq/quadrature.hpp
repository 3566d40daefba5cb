// Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace tbq {

namespace gk_detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N, class F>
void gk15(F& f, double a, double b, std::array<double, N>& kronrod, std::array<double, N>& gauss) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::array<double, N> fc = f(c);
  for (std::size_t k = 0; k < N; ++k) {
    kronrod[k] = fc[k] * kWgk[7];
    gauss[k] = fc[k] * kWg[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::array<double, N> f1 = f(c - dx);
    const std::array<double, N> f2 = f(c + dx);
    for (std::size_t k = 0; k < N; ++k) {
      const double s = f1[k] + f2[k];
      kronrod[k] += kWgk[j] * s;
      if (j % 2 == 1) gauss[k] += kWg[j / 2] * s;
    }
  }
  for (std::size_t k = 0; k < N; ++k) {
    kronrod[k] *= h;
    gauss[k] *= h;
  }
}

template <std::size_t N, class F>
void adapt(F& f, double a, double b, double tol, int depth, std::array<double, N>& acc) {
  std::array<double, N> kronrod{};
  std::array<double, N> gauss{};
  gk15<N>(f, a, b, kronrod, gauss);
  double err = 0.0;
  for (std::size_t k = 0; k < N; ++k) err = std::fmax(err, std::fabs(kronrod[k] - gauss[k]));
  if (err <= tol || depth <= 0) {
    for (std::size_t k = 0; k < N; ++k) acc[k] += kronrod[k];
    return;
  }
  const double m = 0.5 * (a + b);
  adapt<N>(f, a, m, 0.5 * tol, depth - 1, acc);
  adapt<N>(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace gk_detail

/// Integrates every component of `f` over the finite interval [a, b].
/// The absolute tolerance applies to the worst component; subdivision stops
/// at `max_depth` bisections.
template <std::size_t N, class F>
std::array<double, N> integrate_gk(F&& f, double a, double b, double abs_tol,
                                   int max_depth = 30) {
  std::array<double, N> acc{};
  if (!(a < b)) return acc;
  gk_detail::adapt<N>(f, a, b, abs_tol, max_depth, acc);
  return acc;
}

}  // namespace tbq
