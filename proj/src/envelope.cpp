#include "tbq/envelope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tbq {

namespace {

double tolerance_for(std::span<const double> v) {
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  return 1e-9 * scale;
}

bool symmetric_within(std::span<const double> v, double tol) {
  const std::size_t n = v.size();
  const double ref = v.front() + v.back();
  for (std::size_t i = 1; i < n / 2; ++i) {
    if (std::fabs(v[i] + v[n - 1 - i] - ref) > tol) return false;
  }
  return true;
}

bool fully_symmetric_within(std::span<const double> v, double tol) {
  if (v.size() == 2) return true;
  if (!symmetric_within(v, tol)) return false;
  const std::size_t h = v.size() / 2;
  return fully_symmetric_within(v.first(h), tol) && fully_symmetric_within(v.subspan(h), tol);
}

}  // namespace

double envelope_eval(const EnvelopeChain& chain, double x) {
  double y = x;
  for (double b : chain.offsets) y = std::fabs(y - b);
  return y;
}

double PiecewiseLinear::operator()(double x) const {
  if (knot_x.empty()) return right_slope * x;
  if (x <= knot_x.front()) return knot_y.front() + left_slope * (x - knot_x.front());
  if (x >= knot_x.back()) return knot_y.back() + right_slope * (x - knot_x.back());
  const auto it = std::upper_bound(knot_x.begin(), knot_x.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - knot_x.begin());
  const double x0 = knot_x[i - 1];
  const double x1 = knot_x[i];
  const double w = (x - x0) / (x1 - x0);
  return knot_y[i - 1] + w * (knot_y[i] - knot_y[i - 1]);
}

PiecewiseLinear envelope_pieces(std::span<const double> offsets) {
  PiecewiseLinear f;  // identity: no knots, slope 1 on both ends
  for (double b : offsets) {
    PiecewiseLinear g;
    auto push = [&](double x, double y) {
      if (!g.knot_x.empty() && g.knot_x.back() == x) return;
      g.knot_x.push_back(x);
      g.knot_y.push_back(std::fabs(y - b));
    };
    // Left unbounded piece: y = y0 + left_slope (x - x0), crossing b at most once.
    const double x0 = f.knot_x.empty() ? 0.0 : f.knot_x.front();
    const double y0 = f.knot_x.empty() ? 0.0 : f.knot_y.front();
    if (f.left_slope != 0.0) {
      const double xc = x0 + (b - y0) / f.left_slope;
      if (f.knot_x.empty() || xc < x0) push(xc, b);
    }
    for (std::size_t i = 0; i < f.knot_x.size(); ++i) {
      push(f.knot_x[i], f.knot_y[i]);
      if (i + 1 < f.knot_x.size()) {
        const double ya = f.knot_y[i] - b;
        const double yb = f.knot_y[i + 1] - b;
        if ((ya < 0.0 && yb > 0.0) || (ya > 0.0 && yb < 0.0)) {
          const double xc = f.knot_x[i] + (f.knot_x[i + 1] - f.knot_x[i]) * ya / (ya - yb);
          push(xc, b);
        }
      }
    }
    if (!f.knot_x.empty() && f.right_slope != 0.0) {
      const double xr = f.knot_x.back();
      const double xc = xr + (b - f.knot_y.back()) / f.right_slope;
      if (xc > xr) push(xc, b);
    }
    // Both ends of f run off to +-infinity; after |.| they run to +infinity.
    g.left_slope = -std::fabs(f.left_slope);
    g.right_slope = std::fabs(f.right_slope);
    f = std::move(g);
  }
  return f;
}

std::vector<double> induced_thresholds(const EnvelopeChain& chain) {
  if (chain.offsets.empty()) throw std::invalid_argument("envelope chain needs at least one stage");
  if (chain.adc_threshold < 0.0) return {};
  std::vector<double> levels = {chain.adc_threshold};
  for (std::size_t k = chain.offsets.size(); k-- > 0;) {
    const double b = chain.offsets[k];
    std::vector<double> next;
    for (double u : levels) {
      for (double y : {b - u, b + u}) {
        // Stages before k output |.| >= 0, so negative targets are unreachable.
        if (k > 0 && y < 0.0) continue;
        next.push_back(y);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    levels = std::move(next);
  }
  return levels;
}

bool is_fully_symmetric(std::span<const double> v) {
  if (v.size() < 2 || !std::has_single_bit(v.size())) {
    throw std::invalid_argument("is_fully_symmetric: length must be a power of two >= 2");
  }
  return fully_symmetric_within(v, tolerance_for(v));
}

std::size_t gamma_env(std::size_t n_q, std::size_t delta) {
  if (n_q < 1 || delta < 1) throw std::invalid_argument("gamma_env: n_q and delta must be >= 1");
  if (delta >= 63 || n_q >= 63) throw std::invalid_argument("gamma_env: arguments too large");
  return std::min<std::size_t>(std::size_t{1} << n_q, n_q * (std::size_t{1} << delta));
}

EnvelopeSetVerdict is_achievable_envelope_set(std::span<const double> v, std::size_t n_q,
                                              std::size_t delta, bool allow_shallower) {
  if (n_q < 1 || delta < 1 || delta > 20) {
    throw std::invalid_argument("is_achievable_envelope_set: need n_q >= 1 and 1 <= delta <= 20");
  }
  const std::size_t part = std::size_t{1} << delta;
  if (!allow_shallower && v.size() != n_q * part) {
    throw std::invalid_argument("is_achievable_envelope_set: expected " +
                                std::to_string(n_q * part) + " thresholds, got " +
                                std::to_string(v.size()));
  }
  if (allow_shallower && (v.size() > n_q * part || v.size() < 2)) {
    throw std::invalid_argument("is_achievable_envelope_set: size outside the shallow-chain range");
  }
  std::vector<double> values(v.begin(), v.end());
  std::sort(values.begin(), values.end());
  const double tol = tolerance_for(values);
  std::vector<std::size_t> sizes;
  for (std::size_t s = allow_shallower ? 1 : delta; s <= delta; ++s) sizes.push_back(std::size_t{1} << s);

  std::vector<bool> taken(values.size(), false);
  EnvelopeSetVerdict verdict;
  std::vector<std::vector<double>> parts;

  std::function<bool(std::size_t)> solve = [&](std::size_t parts_left) -> bool {
    std::size_t first = 0;
    while (first < values.size() && taken[first]) ++first;
    if (first == values.size()) return true;
    if (parts_left == 0) return false;
    for (std::size_t len : sizes) {
      // `first` is the smallest element of its part; choose the largest one.
      for (std::size_t last = first + 1; last < values.size(); ++last) {
        if (taken[last]) continue;
        const double centre = 0.5 * (values[first] + values[last]);
        // Mirror pairs strictly inside (first, last).
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        std::vector<bool> claimed(values.size(), false);
        for (std::size_t i = first + 1; i < last; ++i) {
          if (taken[i] || claimed[i] || values[i] > centre + tol) continue;
          const double mirror = 2.0 * centre - values[i];
          for (std::size_t j = last; j-- > i + 1;) {
            if (taken[j] || claimed[j]) continue;
            if (std::fabs(values[j] - mirror) <= tol) {
              pairs.emplace_back(i, j);
              claimed[i] = claimed[j] = true;
              break;
            }
          }
        }
        const std::size_t need = len / 2 - 1;
        if (pairs.size() < need) continue;
        std::vector<std::size_t> pick(need);
        std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t from,
                                                                   std::size_t depth) -> bool {
          if (depth == need) {
            std::vector<std::size_t> idx = {first, last};
            for (std::size_t p : pick) {
              idx.push_back(pairs[p].first);
              idx.push_back(pairs[p].second);
            }
            std::sort(idx.begin(), idx.end());
            std::vector<double> group;
            for (std::size_t i : idx) group.push_back(values[i]);
            if (!fully_symmetric_within(group, tol)) return false;
            for (std::size_t i : idx) taken[i] = true;
            parts.push_back(group);
            if (solve(parts_left - 1)) return true;
            parts.pop_back();
            for (std::size_t i : idx) taken[i] = false;
            return false;
          }
          for (std::size_t p = from; p < pairs.size(); ++p) {
            pick[depth] = p;
            if (choose(p + 1, depth + 1)) return true;
          }
          return false;
        };
        if (choose(0, 0)) return true;
      }
    }
    return false;
  };

  verdict.achievable = solve(n_q);
  if (verdict.achievable) verdict.witness = parts;
  return verdict;
}

EnvelopeChain synthesize_envelope_chain(std::span<const double> v) {
  if (v.size() < 2 || !std::has_single_bit(v.size())) {
    throw std::invalid_argument("synthesize_envelope_chain: length must be a power of two >= 2");
  }
  if (!std::is_sorted(v.begin(), v.end())) {
    throw std::invalid_argument("synthesize_envelope_chain: thresholds must be sorted");
  }
  if (!is_fully_symmetric(v)) {
    throw std::invalid_argument("synthesize_envelope_chain: thresholds are not fully symmetric");
  }
  EnvelopeChain chain;
  std::vector<double> cur(v.begin(), v.end());
  while (cur.size() > 1) {
    const double centre = 0.5 * (cur.front() + cur.back());
    chain.offsets.push_back(centre);
    // The upper half, measured from the centre, is the level set of the rest of the chain.
    std::vector<double> upper(cur.begin() + static_cast<std::ptrdiff_t>(cur.size() / 2), cur.end());
    for (double& u : upper) u = std::max(0.0, u - centre);
    cur = std::move(upper);
  }
  chain.adc_threshold = cur.front();
  return chain;
}

}  // namespace tbq
