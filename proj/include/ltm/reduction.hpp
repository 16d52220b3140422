#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ltm/errors.hpp"
#include "ltm/fixed_share.hpp"
#include "ltm/hedge.hpp"
#include "ltm/learner.hpp"
#include "ltm/loss.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Switching regret out of static learners. One master runs over the K actions
// while K two-action fixed-share routines each track how much their action can
// currently be trusted (the probability z(i) they put on their live side). The
// played distribution re-weights the master by those confidences,
//
//   p(i) ∝ z(i) * w(i),
//
// and the master is fed c(i) = -z(i)*r(i) with r(i) = p.loss - loss(i), which
// keeps its losses in [-2,2] and makes w.c = 0 every round. Each routine i sees
// the two-action loss (0, 5*eta - r(i)): it wakes its action up only once the
// action beats the crowd by a margin, and the 5*eta hurdle is sized so that the
// master's second-order term pays for it. A comparator that re-uses an action
// costs ln(T)/eta per block plus ln(K)/eta once, instead of ln(K)/eta per block.

// min(1/5, sqrt((S ln T + n ln K)/T)) for a comparator with at most S blocks
// over n distinct actions: balances the per-block re-entry cost against the
// second-order term. Degenerate corners (T = 1 with one action) floor at a
// tiny positive rate so constructors stay valid.
inline double switching_rate(double switches, double distinct, long long horizon,
                             int num_actions) {
  if (horizon <= 0) throw std::invalid_argument("switching_rate: horizon must be positive");
  if (!(switches > 0.0) || !(distinct > 0.0))
    throw std::invalid_argument("switching_rate: block and action counts must be positive");
  if (num_actions <= 0) throw std::invalid_argument("switching_rate: need at least one action");
  const double T = static_cast<double>(horizon);
  const double raw =
      std::sqrt((switches * std::log(T) + distinct * std::log(static_cast<double>(num_actions))) / T);
  return std::min(0.2, std::max(raw, 1e-9));
}

// p(i) ∝ z(i)*w(i). Throws if every product is zero; that cannot happen when w
// comes from exponential weights (strictly positive) and z from a mixed
// fixed-share state, so hitting it means a learner is broken.
inline std::vector<double> confidence_distribution(const std::vector<double>& w,
                                                   const std::vector<double>& z) {
  if (w.empty() || w.size() != z.size())
    throw std::invalid_argument("confidence_distribution: size mismatch");
  std::vector<double> p(w.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i]))
      throw std::invalid_argument("confidence_distribution: weights must be non-negative");
    if (!(z[i] >= 0.0) || z[i] > 1.0)
      throw std::invalid_argument("confidence_distribution: confidence must lie in [0, 1]");
    p[i] = w[i] * z[i];
    sum += p[i];
  }
  if (!(sum > 0.0))
    throw numerical_error("confidence_distribution: every confidence-weight product is zero");
  for (double& x : p) x /= sum;
  return p;
}

// Grid version: w and z live on K*M cells laid out action-major (cell (i,j) at
// index i*M + j); the action's probability marginalizes the rate index,
// p(i) ∝ sum_j z(i,j)*w(i,j).
inline std::vector<double> confidence_distribution(const std::vector<double>& w,
                                                   const std::vector<double>& z,
                                                   int num_actions) {
  if (num_actions <= 0)
    throw std::invalid_argument("confidence_distribution: need at least one action");
  if (w.empty() || w.size() != z.size() || w.size() % static_cast<std::size_t>(num_actions) != 0)
    throw std::invalid_argument("confidence_distribution: cell layout mismatch");
  const std::size_t M = w.size() / static_cast<std::size_t>(num_actions);
  std::vector<double> p(static_cast<std::size_t>(num_actions), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const std::size_t cell = i * M + j;
      if (!(w[cell] >= 0.0) || !std::isfinite(w[cell]))
        throw std::invalid_argument("confidence_distribution: weights must be non-negative");
      if (!(z[cell] >= 0.0) || z[cell] > 1.0)
        throw std::invalid_argument("confidence_distribution: confidence must lie in [0, 1]");
      p[i] += w[cell] * z[cell];
    }
    sum += p[i];
  }
  if (!(sum > 0.0))
    throw numerical_error("confidence_distribution: every confidence-weight product is zero");
  for (double& x : p) x /= sum;
  return p;
}

struct SimpleReductionConfig {
  int num_actions = 0;
  long long horizon = 0;
  // The tuned rate wants the comparator's true block count S and distinct-action
  // count n, which nobody knows up front; these are guesses (GridReduction is
  // the variant that does not need them). Non-positive picks the defaults.
  double switch_guess = -1.0;    // default sqrt(horizon)
  double distinct_guess = -1.0;  // default num_actions
  double eta = -1.0;             // explicit rate override; default switching_rate(...)
  bool biased = true;            // false drops the 5*eta hurdle from the sub losses
  double share = -1.0;           // fixed-share mix of the sub-routines; default 1/horizon
};

class SimpleReduction : public Learner {
 public:
  explicit SimpleReduction(const SimpleReductionConfig& cfg)
      : eta_(resolve_eta(cfg)), biased_(cfg.biased), master_(cfg.num_actions, eta_) {
    const double share =
        cfg.share >= 0.0 ? cfg.share : std::min(0.5, 1.0 / static_cast<double>(cfg.horizon));
    // The live-side loss 5*eta - r stays within [-3, 3]; the routine's own rate
    // must then sit at or below 1/6 regardless of eta.
    const double sub_eta = std::min(eta_, 1.0 / 6.0);
    subs_.reserve(static_cast<std::size_t>(cfg.num_actions));
    for (int i = 0; i < cfg.num_actions; ++i) subs_.emplace_back(2, sub_eta, share, 3.0);
    w_.assign(subs_.size(), 0.0);
    z_.assign(subs_.size(), 0.0);
    p_.assign(subs_.size(), 0.0);
  }

  int num_actions() const override { return master_.num_actions(); }
  double eta() const { return eta_; }

  const std::vector<double>& distribution() override {
    refresh();
    return p_;
  }

  // Diagnostic views of the same round's state as distribution().
  const std::vector<double>& master_weights() {
    refresh();
    return w_;
  }
  const std::vector<double>& confidence() {
    refresh();
    return z_;
  }

  void update(const std::vector<double>& loss, int /*sampled*/) override {
    if (loss.size() != subs_.size())
      throw std::invalid_argument("SimpleReduction: loss size mismatch");
    check_loss_range(loss, 1.0, "SimpleReduction loss");
    refresh();
    const std::vector<double> r = instantaneous_regret(p_, loss);
    std::vector<double> c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) c[i] = -z_[i] * r[i];
    master_.update(c);
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const double live = biased_ ? 5.0 * eta_ - r[i] : -r[i];
      subs_[i].update({0.0, live});
    }
    fresh_ = false;
  }

 private:
  static double resolve_eta(const SimpleReductionConfig& cfg) {
    if (cfg.num_actions <= 0)
      throw std::invalid_argument("SimpleReduction: need at least one action");
    if (cfg.horizon <= 0) throw std::invalid_argument("SimpleReduction: horizon must be positive");
    if (cfg.eta > 0.0) {
      if (cfg.eta > 0.2) throw std::invalid_argument("SimpleReduction: eta must lie in (0, 1/5]");
      return cfg.eta;
    }
    const double S =
        cfg.switch_guess > 0.0 ? cfg.switch_guess : std::sqrt(static_cast<double>(cfg.horizon));
    const double n =
        cfg.distinct_guess > 0.0 ? cfg.distinct_guess : static_cast<double>(cfg.num_actions);
    return switching_rate(S, n, cfg.horizon, cfg.num_actions);
  }

  void refresh() {
    if (fresh_) return;
    w_ = master_.weights();
    for (std::size_t i = 0; i < subs_.size(); ++i) z_[i] = subs_[i].distribution()[1];
    p_ = confidence_distribution(w_, z_);
    fresh_ = true;
  }

  double eta_;
  bool biased_;
  HedgeV1 master_;
  std::vector<FixedShareVariant> subs_;  // two actions each; index 1 is the live side
  std::vector<double> w_, z_, p_;        // snapshot for the round in flight
  bool fresh_ = false;
};

// Rate grid eta_j = min(1/5, 2^{j-1}/sqrt(T)) for j = 1..M with
// M = floor(log2(sqrt(T)/5)) + 1; the returned size is M. Needs T >= 26 so the
// grid is nonempty. The rates double up to the 1/5 cap, so some grid point is
// within a factor 2 of any rate the tuned version would have picked.
inline std::vector<double> grid_rates(long long horizon) {
  if (horizon < 26)
    throw std::invalid_argument("grid_rates: horizon must be at least 26 for a nonempty grid");
  const double root = std::sqrt(static_cast<double>(horizon));
  const int M = static_cast<int>(std::floor(std::log2(root / 5.0))) + 1;
  std::vector<double> rates(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) rates[static_cast<std::size_t>(j)] = std::min(0.2, std::ldexp(1.0, j) / root);
  return rates;
}

struct GridReductionConfig {
  int num_actions = 0;
  long long horizon = 0;   // at least 26, see grid_rates
  double share = -1.0;     // fixed-share mix of the sub-routines; default 1/horizon
};

// Parameter-free version: one cell per (action, rate) pair. The master runs
// over all K*M cells with per-cell rates, each cell has its own two-action
// confidence routine, and the played distribution marginalizes the rate index.
// The hurdle fed to cell (i,j) is 5*eta_j*|r(i)| - r(i) — proportional to the
// observed regret magnitude rather than a flat 5*eta — which is what lets the
// same machine also get small regret when the losses happen to be easy.
class GridReduction : public Learner {
 public:
  explicit GridReduction(const GridReductionConfig& cfg)
      : num_actions_(cfg.num_actions),
        rates_(grid_rates(cfg.horizon)),
        master_(cell_rates(cfg.num_actions, rates_), 2.0) {
    const double share =
        cfg.share >= 0.0 ? cfg.share : std::min(0.5, 1.0 / static_cast<double>(cfg.horizon));
    // Live-side losses reach 2|r| <= 4 here, so the routines' own rates cap at
    // 1/8; the grid rate only sizes the hurdle.
    subs_.reserve(rates_.size() * static_cast<std::size_t>(cfg.num_actions));
    for (int i = 0; i < cfg.num_actions; ++i)
      for (double rate : rates_) subs_.emplace_back(2, std::min(rate, 0.125), share, 4.0);
    w_.assign(subs_.size(), 0.0);
    z_.assign(subs_.size(), 0.0);
    p_.assign(static_cast<std::size_t>(cfg.num_actions), 0.0);
  }

  int num_actions() const override { return num_actions_; }
  int grid_size() const { return static_cast<int>(rates_.size()); }
  const std::vector<double>& rates() const { return rates_; }

  const std::vector<double>& distribution() override {
    refresh();
    return p_;
  }

  // Cell-level views (action-major layout), same round as distribution().
  const std::vector<double>& master_weights() {
    refresh();
    return w_;
  }
  const std::vector<double>& confidence() {
    refresh();
    return z_;
  }

  void update(const std::vector<double>& loss, int /*sampled*/) override {
    if (loss.size() != p_.size()) throw std::invalid_argument("GridReduction: loss size mismatch");
    check_loss_range(loss, 1.0, "GridReduction loss");
    refresh();
    const std::vector<double> r = instantaneous_regret(p_, loss);
    const std::size_t M = rates_.size();
    std::vector<double> c(subs_.size());
    for (std::size_t i = 0; i < p_.size(); ++i)
      for (std::size_t j = 0; j < M; ++j) c[i * M + j] = -z_[i * M + j] * r[i];
    master_.update(c, w_);
    for (std::size_t i = 0; i < p_.size(); ++i) {
      for (std::size_t j = 0; j < M; ++j) {
        const double live = 5.0 * rates_[j] * std::abs(r[i]) - r[i];
        subs_[i * M + j].update({0.0, live});
      }
    }
    fresh_ = false;
  }

 private:
  static std::vector<double> cell_rates(int num_actions, const std::vector<double>& rates) {
    if (num_actions <= 0) throw std::invalid_argument("GridReduction: need at least one action");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(num_actions) * rates.size());
    for (int i = 0; i < num_actions; ++i) out.insert(out.end(), rates.begin(), rates.end());
    return out;
  }

  void refresh() {
    if (fresh_) return;
    w_ = master_.weights();
    for (std::size_t cell = 0; cell < subs_.size(); ++cell)
      z_[cell] = subs_[cell].distribution()[1];
    p_ = confidence_distribution(w_, z_, num_actions_);
    fresh_ = true;
  }

  int num_actions_;
  std::vector<double> rates_;
  HedgeV2 master_;
  std::vector<FixedShareVariant> subs_;  // K*M cells, action-major
  std::vector<double> w_, z_;            // per cell
  std::vector<double> p_;                // per action
  bool fresh_ = false;
};

}  // namespace ltm
