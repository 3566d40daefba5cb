#include "tbq/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "tbq/errors.hpp"

namespace tbq {

namespace {

constexpr double kRootTolerance = 1e-12;

double bisect(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > kRootTolerance * (1.0 + std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool same_point(double a, double b) { return std::fabs(a - b) <= 1e-9 * (1.0 + std::fabs(a)); }

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::from_roots(std::span<const double> roots, double leading) {
  std::vector<double> c = {leading};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

std::vector<double> Polynomial::sign_changes() const {
  if (degree() < 1) return {};
  // Cauchy bound on root magnitudes.
  const double lead = coeffs_.back();
  double bound = 0.0;
  for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
    bound = std::max(bound, std::fabs(coeffs_[i] / lead));
  }
  bound += 1.0;
  // Between consecutive sign changes of the derivative the polynomial is
  // monotone, so each such interval holds at most one sign change.
  std::vector<double> knots = {-bound};
  for (double c : derivative().sign_changes()) {
    if (c > -bound && c < bound) knots.push_back(c);
  }
  knots.push_back(bound);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const double fa = (*this)(a);
    const double fb = (*this)(b);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) roots.push_back(bisect(*this, a, b));
  }
  return roots;
}

std::uint64_t PolynomialBank::word(double x) const {
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < polynomials.size(); ++i) {
    if (polynomials[i](x) > 0.0) w |= std::uint64_t{1} << i;
  }
  return w;
}

std::size_t gamma_poly(std::size_t n_q, std::size_t delta) {
  if (n_q < 1 || delta < 1) throw std::invalid_argument("gamma_poly: n_q and delta must be >= 1");
  const std::size_t roots = n_q * delta + (delta % 2 == 1 ? 1 : 0);
  if (n_q >= 63) return roots;
  return std::min<std::size_t>(std::size_t{1} << n_q, roots);
}

std::vector<std::size_t> AssociatedCode::transitions() const {
  std::vector<std::size_t> k;
  for (std::size_t t = 1; t < words.size(); ++t) {
    const std::uint64_t diff = words[t - 1] ^ words[t];
    k.push_back(static_cast<std::size_t>(std::countr_zero(diff)));
  }
  return k;
}

std::string AssociatedCode::to_string() const {
  std::string out;
  for (std::size_t t = 0; t < words.size(); ++t) {
    if (t > 0) out += ',';
    // Most significant bit first, so bit 0 is the rightmost character.
    for (std::size_t b = width; b-- > 0;) out += ((words[t] >> b) & 1U) ? '1' : '0';
  }
  return out;
}

bool is_valid_code(const AssociatedCode& code, std::size_t delta) {
  if (code.words.empty() || code.width == 0 || code.width > 63) return false;
  const std::uint64_t mask = (std::uint64_t{1} << code.width) - 1;
  std::set<std::uint64_t> seen;
  std::vector<std::size_t> flips(code.width, 0);
  for (std::size_t t = 0; t < code.words.size(); ++t) {
    if (code.words[t] & ~mask) return false;
    if (!seen.insert(code.words[t]).second) return false;
    if (t == 0) continue;
    const std::uint64_t diff = code.words[t - 1] ^ code.words[t];
    if (std::popcount(diff) != 1) return false;
    if (++flips[static_cast<std::size_t>(std::countr_zero(diff))] > delta) return false;
  }
  return true;
}

AssociatedCode build_associated_code(std::size_t num_thresholds, std::size_t n_q,
                                     std::size_t delta) {
  if (n_q < 1 || n_q > 63) throw std::invalid_argument("build_associated_code: n_q must be 1..63");
  const std::size_t capacity = gamma_poly(n_q, delta);
  if (num_thresholds + 1 > capacity) {
    throw InfeasibleError("infeasible: " + std::to_string(num_thresholds) +
                          " thresholds exceed the " + std::to_string(capacity - 1) +
                          " realizable with n_q=" + std::to_string(n_q) +
                          ", delta=" + std::to_string(delta));
  }
  AssociatedCode code;
  code.width = n_q;
  code.words = {0};
  std::set<std::uint64_t> used = {0};
  std::vector<std::size_t> flips(n_q, 0);

  // Depth-first walk on the hypercube; least-used bits are tried first.
  std::function<bool(std::size_t)> extend = [&](std::size_t remaining) {
    if (remaining == 0) return true;
    std::size_t budget = 0;
    for (std::size_t f : flips) budget += delta - f;
    if (budget < remaining) return false;
    std::vector<std::size_t> order(n_q);
    for (std::size_t i = 0; i < n_q; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return flips[a] < flips[b]; });
    for (std::size_t bit : order) {
      if (flips[bit] >= delta) continue;
      const std::uint64_t next = code.words.back() ^ (std::uint64_t{1} << bit);
      if (used.count(next)) continue;
      used.insert(next);
      code.words.push_back(next);
      ++flips[bit];
      if (extend(remaining - 1)) return true;
      --flips[bit];
      code.words.pop_back();
      used.erase(next);
    }
    return false;
  };
  if (!extend(num_thresholds)) {
    throw InfeasibleError("no associated code found for " + std::to_string(num_thresholds) +
                          " thresholds");
  }
  return code;
}

PolynomialBank synthesize_polynomials(std::span<const double> thresholds,
                                      const AssociatedCode& code, std::size_t delta) {
  if (thresholds.size() + 1 != code.words.size()) {
    throw std::invalid_argument("synthesize_polynomials: need one more code word than thresholds");
  }
  if (!is_valid_code(code, delta)) {
    throw std::invalid_argument("synthesize_polynomials: code violates the associated-code rules");
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw std::invalid_argument("synthesize_polynomials: thresholds must be strictly increasing");
    }
  }
  const auto k = code.transitions();
  std::vector<std::vector<double>> roots(code.width);
  for (std::size_t t = 0; t < k.size(); ++t) roots[k[t]].push_back(thresholds[t]);

  PolynomialBank bank;
  bank.delta = delta;
  const std::uint64_t last = code.words.back();
  for (std::size_t i = 0; i < code.width; ++i) {
    const double sign = ((last >> i) & 1U) ? 1.0 : -1.0;
    bank.polynomials.push_back(Polynomial::from_roots(roots[i], sign));
  }
  return bank;
}

namespace {

std::vector<double> bank_change_points(const PolynomialBank& bank) {
  std::vector<double> pts;
  for (const auto& p : bank.polynomials) {
    const auto r = p.sign_changes();
    pts.insert(pts.end(), r.begin(), r.end());
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> unique;
  for (double x : pts) {
    if (unique.empty() || !same_point(unique.back(), x)) unique.push_back(x);
  }
  return unique;
}

std::vector<double> cell_samples(const std::vector<double>& cuts) {
  if (cuts.empty()) return {0.0};
  std::vector<double> s;
  s.push_back(cuts.front() - 1.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  s.push_back(cuts.back() + 1.0);
  return s;
}

}  // namespace

std::vector<std::uint64_t> sign_pattern_words(const PolynomialBank& bank) {
  std::set<std::uint64_t> words;
  for (double x : cell_samples(bank_change_points(bank))) words.insert(bank.word(x));
  return {words.begin(), words.end()};
}

bool verify_emulation(const PolynomialBank& bank, std::span<const double> thresholds) {
  for (const auto& p : bank.polynomials) {
    if (p.is_zero() || p.degree() > static_cast<int>(bank.delta)) return false;
  }
  const auto cuts = bank_change_points(bank);
  if (cuts.size() != thresholds.size()) return false;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!same_point(cuts[i], thresholds[i])) return false;
  }
  std::set<std::uint64_t> words;
  for (double x : cell_samples(cuts)) {
    if (!words.insert(bank.word(x)).second) return false;
  }
  return true;
}

}  // namespace tbq
