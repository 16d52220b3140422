#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltm/errors.hpp"
#include "ltm/learner.hpp"
#include "ltm/loss.hpp"
#include "ltm/reduction.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Bandit-feedback version of the confidence reduction for sparse losses. The
// observed coordinate is inflated into the usual importance-weighted estimator
// and pushed through the same master/confidence split, but both halves are
// swapped for variants that survive the estimator's variance: the master is
// follow-the-regularized-leader with an entropy + log-barrier hybrid (the
// barrier keeps consecutive iterates within a factor 2 of each other), and each
// confidence routine is mirror descent under the one-sided barrier
// (1/eta)*ln(1/z), floored at delta so a paused action can come back cheaply.

// One-hot estimator: loss_at(sampled)/p_tilde(sampled) on the sampled slot,
// exactly zero elsewhere. Averaging over the draw recovers the full vector.
inline std::vector<double> estimate_loss(double loss_at_sampled, int sampled,
                                         const std::vector<double>& p_tilde) {
  if (sampled < 0 || static_cast<std::size_t>(sampled) >= p_tilde.size())
    throw std::invalid_argument("estimate_loss: sampled action out of range");
  if (!(p_tilde[static_cast<std::size_t>(sampled)] > 0.0))
    throw numerical_error("estimate_loss: sampled an action with zero probability");
  std::vector<double> est(p_tilde.size(), 0.0);
  est[static_cast<std::size_t>(sampled)] =
      loss_at_sampled / p_tilde[static_cast<std::size_t>(sampled)];
  return est;
}

// c(i) = -z(i)*r_hat(i) - eta*z(i)*ell_hat(i)^2. The second term over-reports
// the loss of actions with noisy estimates; it is what cancels the estimator's
// variance inside the master's second-order bound. Entries are unbounded (the
// estimator reaches K/eta), so no range check applies here.
inline std::vector<double> master_loss(const std::vector<double>& z,
                                       const std::vector<double>& r_hat,
                                       const std::vector<double>& ell_hat, double eta) {
  if (z.size() != r_hat.size() || z.size() != ell_hat.size() || z.empty())
    throw std::invalid_argument("master_loss: size mismatch");
  std::vector<double> c(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    c[i] = -z[i] * r_hat[i] - eta * z[i] * ell_hat[i] * ell_hat[i];
  return c;
}

// Mirror-descent step for one confidence value under the one-sided barrier:
//   z_new = argmin_{z in [delta,1]} -r*z + D(z, z_old),  D from (1/eta)ln(1/z).
// Stationarity gives 1/z_new = 1/z_old - eta*r, so the unconstrained minimizer
// is z_old/(1 - eta*r*z_old), clamped to the box (the objective is convex in z,
// so clamping is exact). A non-positive denominator means the objective
// decreases all the way up to the boundary: return 1.
inline double z_update(double z_old, double r, double eta, double delta) {
  if (!(eta > 0.0)) throw std::invalid_argument("z_update: eta must be positive");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("z_update: delta must lie in (0, 1]");
  if (!(z_old >= delta) || z_old > 1.0)
    throw std::invalid_argument("z_update: z_old must lie in [delta, 1]");
  if (!std::isfinite(r)) throw std::invalid_argument("z_update: non-finite regret");
  const double denom = 1.0 - eta * r * z_old;
  if (!(denom > 0.0)) return 1.0;
  return std::clamp(z_old / denom, delta, 1.0);
}

// Minimizes sum_i w(i)*cum(i) + (1/eta)*sum_i w(i)ln w(i) + gamma*sum_i ln(1/w(i))
// over the simplex. Stationarity with multiplier lambda reads
//
//   g_i(w) := cum(i) + (ln w + 1)/eta - gamma/w = lambda,  sum_i w_i = 1.
//
// g_i is increasing and concave in w, so each coordinate is a monotone 1-D
// root for fixed lambda (Newton that never overshoots once below the root),
// and sum_i w_i(lambda) increases in lambda, handled by Newton inside a
// bisection bracket. Solves warm-start from the previous solution; the
// barrier's stability makes that nearly free on consecutive rounds.
class FtrlSolver {
 public:
  FtrlSolver(int num_actions, double eta, double gamma)
      : eta_(eta), gamma_(gamma), w_(uniform_weights(num_actions)) {
    if (!(eta > 0.0)) throw std::invalid_argument("FtrlSolver: eta must be positive");
    if (!(gamma >= 0.0)) throw std::invalid_argument("FtrlSolver: gamma must be non-negative");
  }

  int num_actions() const { return static_cast<int>(w_.size()); }

  const std::vector<double>& solve(const std::vector<double>& cum) {
    if (cum.size() != w_.size()) throw std::invalid_argument("FtrlSolver: size mismatch");
    double scale = 1.0;
    for (double c : cum) {
      if (!std::isfinite(c)) throw numerical_error("FtrlSolver: non-finite cumulative loss");
      scale = std::max(scale, std::abs(c));
    }

    // Bracket the multiplier: at min_i g_i(1/K) every coordinate sits at or
    // below 1/K, at max_i g_i(1/K) at or above.
    const double u = 1.0 / static_cast<double>(w_.size());
    double lo = stationarity(cum[0], u);
    double hi = lo;
    for (std::size_t i = 1; i < cum.size(); ++i) {
      const double g = stationarity(cum[i], u);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    scale = std::max(scale, std::max(std::abs(lo), std::abs(hi)));

    double lambda = warm_ ? std::clamp(lambda_, lo, hi) : 0.5 * (lo + hi);
    std::vector<double> w = w_;
    double slope = 0.0;
    auto excess = [&](double lam) {
      double sum = 0.0;
      slope = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = coordinate(cum[i], lam, w[i], scale);
        sum += w[i];
        slope += eta_ * w[i] * w[i] / (w[i] + eta_ * gamma_);
      }
      return sum - 1.0;
    };

    double h = excess(lambda);
    int it = 0;
    for (; std::abs(h) > kSumTol && it < kMaxOuter; ++it) {
      if (h > 0.0)
        hi = lambda;
      else
        lo = lambda;
      const double newton = lambda - h / slope;
      lambda = (slope > 0.0 && newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
      h = excess(lambda);
    }
    iterations_ = it;

    double dev = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      dev = std::max(dev, std::abs(stationarity(cum[i], w[i]) - lambda));
    residual_ = dev / scale + std::abs(h);
    if (std::abs(h) > kSumTol || residual_ > 1e-10)
      throw numerical_error("FtrlSolver: no convergence after " + std::to_string(it) +
                            " iterations (mass excess " + std::to_string(h) + ", residual " +
                            std::to_string(residual_) + ")");
    w_ = w;
    lambda_ = lambda;
    warm_ = true;
    return w_;
  }

  const std::vector<double>& weights() const { return w_; }
  // KKT residual of the last solve, relative to the problem's magnitude.
  double last_residual() const { return residual_; }
  int last_iterations() const { return iterations_; }

 private:
  static constexpr double kSumTol = 1e-12;
  static constexpr int kMaxOuter = 100;

  double stationarity(double c, double w) const {
    return c + (std::log(w) + 1.0) / eta_ - gamma_ / w;
  }

  // Root of g(w) = lambda in w > 0 from a positive hint. g is concave and
  // increasing, so a Newton step from above lands below the root and every
  // step from below stays below it; the halving guard only fires when the
  // tangent shoots past zero.
  double coordinate(double c, double lambda, double hint, double scale) const {
    double w = hint;
    for (int it = 0; it < 80; ++it) {
      const double g = stationarity(c, w) - lambda;
      if (std::abs(g) <= 1e-13 * scale) break;
      const double gp = 1.0 / (eta_ * w) + gamma_ / (w * w);
      double next = w - g / gp;
      if (!(next > 0.0)) next = 0.5 * w;
      if (std::abs(next - w) <= 1e-16 * w) {
        w = next;
        break;
      }
      w = next;
    }
    return w;
  }

  double eta_;
  double gamma_;
  std::vector<double> w_;
  double lambda_ = 0.0;
  bool warm_ = false;
  double residual_ = 0.0;
  int iterations_ = 0;
};

// One-shot solve, cold start. Tests compare this against grid and
// projected-gradient oracles.
inline std::vector<double> ftrl_solve(const std::vector<double>& cum, double eta, double gamma) {
  FtrlSolver solver(static_cast<int>(cum.size()), eta, gamma);
  return solver.solve(cum);
}

struct BanditConfig {
  int num_actions = 0;
  long long horizon = 0;
  // Comparator class the tuning targets; non-positive picks the defaults.
  double switches = -1.0;  // S, default sqrt(horizon)
  double distinct = -1.0;  // n, default num_actions
  int sparsity = -1;       // rho, default num_actions
  // Overrides; non-positive derives them from the above:
  //   eta   = min(1/500, max(S^(1/3)*rho^(-2/3)*(nT)^(-1/3), sqrt(ln K/(T*rho))))
  //   delta = min(1, sqrt(S/(T*eta*n)))
  //   gamma = 200*K^2
  double eta = -1.0;
  double delta = -1.0;
  double gamma = -1.0;
};

class SparseBandit : public Learner {
 public:
  explicit SparseBandit(const BanditConfig& cfg) : solver_(make_solver(cfg)) {
    const std::size_t K = static_cast<std::size_t>(cfg.num_actions);
    cum_c_.assign(K, 0.0);
    w_ = uniform_weights(cfg.num_actions);
    z_.assign(K, 1.0);
    p_.assign(K, 0.0);
    p_tilde_.assign(K, 0.0);
  }

  int num_actions() const override { return static_cast<int>(cum_c_.size()); }
  double eta() const { return eta_; }
  double delta() const { return delta_; }
  double gamma() const { return gamma_; }
  bool eta_clamped() const { return eta_clamped_; }
  bool delta_clamped() const { return delta_clamped_; }

  // The distribution handed to the sampler: p(i) ∝ z(i)*w(i) smoothed with
  // eta/K of uniform exploration so every estimator denominator is bounded.
  const std::vector<double>& distribution() override {
    refresh();
    return p_tilde_;
  }

  // Diagnostic views, same round as distribution().
  const std::vector<double>& master_weights() {
    refresh();
    return w_;
  }
  const std::vector<double>& confidence() {
    refresh();
    return z_;
  }
  const std::vector<double>& pre_mix() {
    refresh();
    return p_;
  }
  const FtrlSolver& solver() const { return solver_; }

  // Only loss[sampled] is read; the rest of the vector never existed as far as
  // this learner is concerned.
  void update(const std::vector<double>& loss, int sampled) override {
    if (loss.size() != cum_c_.size()) throw std::invalid_argument("SparseBandit: loss size mismatch");
    if (sampled < 0 || static_cast<std::size_t>(sampled) >= cum_c_.size())
      throw std::invalid_argument("SparseBandit: sampled action out of range");
    const double observed = loss[static_cast<std::size_t>(sampled)];
    if (!std::isfinite(observed) || std::abs(observed) > 1.0)
      throw std::invalid_argument("SparseBandit: observed loss must lie in [-1, 1]");
    refresh();
    const std::vector<double> est = estimate_loss(observed, sampled, p_tilde_);
    const double mean = p_[static_cast<std::size_t>(sampled)] * est[static_cast<std::size_t>(sampled)];
    std::vector<double> r_hat(cum_c_.size());
    for (std::size_t i = 0; i < r_hat.size(); ++i) r_hat[i] = mean - est[i];
    const std::vector<double> c = master_loss(z_, r_hat, est, eta_);
    for (std::size_t i = 0; i < c.size(); ++i) cum_c_[i] += c[i];
    solver_.solve(cum_c_);
    for (std::size_t i = 0; i < z_.size(); ++i) z_[i] = z_update(z_[i], r_hat[i], eta_, delta_);
    fresh_ = false;
  }

 private:
  // Resolves and validates the whole config (filling eta_/delta_/gamma_ and the
  // clamp flags) before the solver member is built.
  FtrlSolver make_solver(const BanditConfig& cfg) {
    if (cfg.num_actions <= 0) throw std::invalid_argument("SparseBandit: need at least one action");
    if (cfg.horizon <= 0) throw std::invalid_argument("SparseBandit: horizon must be positive");
    const double T = static_cast<double>(cfg.horizon);
    const double S = cfg.switches > 0.0 ? cfg.switches : std::sqrt(T);
    const double n = cfg.distinct > 0.0 ? cfg.distinct : static_cast<double>(cfg.num_actions);
    const double rho = cfg.sparsity > 0 ? static_cast<double>(cfg.sparsity)
                                        : static_cast<double>(cfg.num_actions);
    if (cfg.eta > 0.0) {
      if (cfg.eta > 1.0 / 500.0)
        throw std::invalid_argument("SparseBandit: eta must not exceed 1/500");
      eta_ = cfg.eta;
    } else {
      const double tuned =
          std::max(std::cbrt(S) / (std::cbrt(rho * rho) * std::cbrt(n * T)),
                   std::sqrt(std::log(static_cast<double>(cfg.num_actions)) / (T * rho)));
      eta_clamped_ = tuned > 1.0 / 500.0;
      eta_ = std::min(1.0 / 500.0, std::max(tuned, 1e-12));
    }
    if (cfg.delta > 0.0) {
      if (cfg.delta > 1.0) throw std::invalid_argument("SparseBandit: delta must lie in (0, 1]");
      delta_ = cfg.delta;
    } else {
      const double tuned = std::sqrt(S / (T * eta_ * n));
      delta_clamped_ = tuned > 1.0;
      delta_ = std::min(1.0, tuned);
    }
    gamma_ = cfg.gamma > 0.0
                 ? cfg.gamma
                 : 200.0 * static_cast<double>(cfg.num_actions) * static_cast<double>(cfg.num_actions);
    return FtrlSolver(cfg.num_actions, eta_, gamma_);
  }

  void refresh() {
    if (fresh_) return;
    w_ = solver_.weights();
    p_ = confidence_distribution(w_, z_);
    p_tilde_ = mix_with_uniform(p_, eta_);
    fresh_ = true;
  }

  double eta_ = 0.0;
  double delta_ = 0.0;
  double gamma_ = 0.0;
  bool eta_clamped_ = false;
  bool delta_clamped_ = false;
  FtrlSolver solver_;
  std::vector<double> cum_c_;
  std::vector<double> w_, z_, p_, p_tilde_;
  bool fresh_ = false;
};

}  // namespace ltm
