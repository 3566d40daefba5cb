// Envelope-detector chains A_s(x) = |...||x - b_1| - b_2| ... - b_s| followed by
// a one-bit ADC at threshold t, and the threshold sets such chains realize.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tbq {

struct EnvelopeChain {
  std::vector<double> offsets;  // b_1..b_s in application order
  double adc_threshold = 0.0;

  std::size_t depth() const { return offsets.size(); }
};

double envelope_eval(const EnvelopeChain& chain, double x);

/// Continuous piecewise-linear function: knots in increasing x plus the slopes
/// of the two unbounded end pieces.
struct PiecewiseLinear {
  std::vector<double> knot_x;
  std::vector<double> knot_y;
  double left_slope = 1.0;
  double right_slope = 1.0;

  double operator()(double x) const;
};

/// Exact breakpoint form of A_s; every piece has slope +-1.
PiecewiseLinear envelope_pieces(std::span<const double> offsets);

/// Sorted solutions of A_s(x) = t, obtained by pushing the level t back through
/// the chain. Levels that would require a negative detector output are dropped,
/// so the result has at most 2^s points.
std::vector<double> induced_thresholds(const EnvelopeChain& chain);

/// Palindromic pair sums v_i + v_{L+1-i} constant, recursively on both halves.
/// Throws std::invalid_argument unless the length is a power of two >= 2.
bool is_fully_symmetric(std::span<const double> v);

/// min(2^{n_q}, n_q * 2^delta).
std::size_t gamma_env(std::size_t n_q, std::size_t delta);

struct EnvelopeSetVerdict {
  bool achievable = false;
  std::vector<std::vector<double>> witness;  // one sorted part per chain
};

/// Searches every partition of v into n_q fully-symmetric parts of length 2^delta.
/// With `allow_shallower`, parts may instead have length 2^s for any 1 <= s <= delta
/// and at most n_q parts are used. Throws std::invalid_argument on a size mismatch.
EnvelopeSetVerdict is_achievable_envelope_set(std::span<const double> v, std::size_t n_q,
                                              std::size_t delta, bool allow_shallower = false);

/// Inverse of induced_thresholds on sorted fully-symmetric input.
EnvelopeChain synthesize_envelope_chain(std::span<const double> v);

}  // namespace tbq
