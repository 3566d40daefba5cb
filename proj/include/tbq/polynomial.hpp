// Polynomial analog frontends driving zero-threshold one-bit ADCs.
//
// A bank of n_q polynomials f_i, each feeding an ADC that outputs 1(f_i(x) > 0),
// partitions the real line by the sign changes of the f_i. Any threshold
// vector with at most gamma_poly(n_q, delta) - 1 entries can be emulated.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tbq {

class Polynomial {
 public:
  Polynomial() = default;
  /// Coefficients in ascending power order; trailing zeros are trimmed.
  explicit Polynomial(std::vector<double> coefficients);

  /// Expands c * prod (x - r).
  static Polynomial from_roots(std::span<const double> roots, double leading);

  const std::vector<double>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  double operator()(double x) const;
  Polynomial derivative() const;

  /// Sorted real points where the polynomial changes sign. Touching roots
  /// (even multiplicity) are excluded. Bisection to ~1e-12 absolute.
  std::vector<double> sign_changes() const;

 private:
  std::vector<double> coeffs_;
};

struct PolynomialBank {
  std::vector<Polynomial> polynomials;
  std::size_t delta = 0;  // degree cap

  std::size_t num_adcs() const { return polynomials.size(); }
  /// ADC output word, bit i = 1(f_i(x) > 0).
  std::uint64_t word(double x) const;
};

/// Cell capacity min(2^{n_q}, n_q * delta + [delta odd]).
std::size_t gamma_poly(std::size_t n_q, std::size_t delta);

struct AssociatedCode {
  std::size_t width = 0;
  std::vector<std::uint64_t> words;

  /// Bit position that flips between words t-1 and t, for t = 1..size-1.
  std::vector<std::size_t> transitions() const;
  std::string to_string() const;
};

/// Checks distinct words, single-bit steps and a per-bit flip budget of delta.
bool is_valid_code(const AssociatedCode& code, std::size_t delta);

/// Throws InfeasibleError when num_thresholds > gamma_poly(n_q, delta) - 1.
AssociatedCode build_associated_code(std::size_t num_thresholds, std::size_t n_q,
                                     std::size_t delta);

/// f_i = sign_i * prod_{t : k_t = i} (x - tau_t), with sign_i fixed by the last
/// code word; bits ending at 0 give the negated product.
PolynomialBank synthesize_polynomials(std::span<const double> thresholds,
                                      const AssociatedCode& code, std::size_t delta);

/// Distinct ADC words seen along the real line, sampled inside each cell
/// induced by the bank's sign changes.
std::vector<std::uint64_t> sign_pattern_words(const PolynomialBank& bank);

/// True iff the bank's word changes exactly at `thresholds` and all cells
/// carry distinct words.
bool verify_emulation(const PolynomialBank& bank, std::span<const double> thresholds);

}  // namespace tbq
