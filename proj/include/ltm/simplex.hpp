#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ltm/errors.hpp"

namespace ltm {

// Probability-simplex helpers shared by every learner. Multiplicative-update
// states live here as plain vectors; after each update they are floored at
// 1e-300 and renormalized so weights stay strictly positive over long horizons
// (raw exponential weights underflow otherwise). A zero/non-finite total is a
// hard failure rather than something to paper over.

inline constexpr double kWeightFloor = 1e-300;
inline constexpr double kSimplexTol = 1e-9;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void floor_and_normalize(std::vector<double>& w) {
  if (w.empty()) throw std::invalid_argument("floor_and_normalize: empty vector");
  double sum = 0.0;
  for (double& x : w) {
    if (!std::isfinite(x) || x < 0.0)
      throw numerical_error("floor_and_normalize: negative or non-finite weight");
    if (x < kWeightFloor) x = kWeightFloor;
    sum += x;
  }
  if (!std::isfinite(sum) || sum <= 0.0)
    throw numerical_error("floor_and_normalize: weight mass vanished");
  for (double& x : w) x /= sum;
}

inline bool is_distribution(const std::vector<double>& w, double tol = kSimplexTol) {
  if (w.empty()) return false;
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

inline std::vector<double> uniform_weights(int num_actions) {
  if (num_actions <= 0) throw std::invalid_argument("uniform_weights: need at least one action");
  return std::vector<double>(static_cast<std::size_t>(num_actions), 1.0 / num_actions);
}

// w(i) proportional to exp(x(i)); the max is subtracted before exponentiating so the
// largest weight is exactly 1 pre-normalization and nothing overflows.
inline std::vector<double> softmax_from_exponents(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("softmax_from_exponents: empty vector");
  double m = x[0];
  for (double v : x) {
    if (!std::isfinite(v)) throw numerical_error("softmax_from_exponents: non-finite exponent");
    m = std::max(m, v);
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::exp(x[i] - m);
  floor_and_normalize(w);
  return w;
}

// (1-gamma)*w + gamma/K, the usual exploration floor
inline std::vector<double> mix_with_uniform(const std::vector<double>& w, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("mix_with_uniform: gamma must lie in [0, 1)");
  std::vector<double> q(w.size());
  const double u = gamma / static_cast<double>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) q[i] = (1.0 - gamma) * w[i] + u;
  return q;
}

}  // namespace ltm
