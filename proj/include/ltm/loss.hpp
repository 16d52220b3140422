#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltm/simplex.hpp"

namespace ltm {

// Loss-vector checks and the per-round regret quantities every module shares.
// Losses handed to learners live in [-1, 1]^K; internal surrogate losses have
// wider, per-module declared bounds.

inline void check_loss_range(const std::vector<double>& loss, double bound,
                             const char* who = "loss") {
  for (double v : loss) {
    if (!std::isfinite(v) || std::abs(v) > bound)
      throw std::invalid_argument(std::string(who) + ": entry outside [-" +
                                  std::to_string(bound) + ", " + std::to_string(bound) + "]");
  }
}

inline int count_nonzero(const std::vector<double>& v) {
  int c = 0;
  for (double x : v) c += (x != 0.0);
  return c;
}

// r(i) = p.loss - loss(i), the instantaneous regret of the play p against each
// action. The identity sum_i p(i) r(i) = 0 holds by construction.
inline std::vector<double> instantaneous_regret(const std::vector<double>& p,
                                                const std::vector<double>& loss) {
  if (p.size() != loss.size())
    throw std::invalid_argument("instantaneous_regret: size mismatch");
  if (!is_distribution(p))
    throw std::invalid_argument("instantaneous_regret: p is not a distribution");
  const double pl = dot(p, loss);
  std::vector<double> r(loss.size());
  for (std::size_t i = 0; i < loss.size(); ++i) r[i] = pl - loss[i];
  return r;
}

}  // namespace ltm
