#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ltm/loss.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Hedge with a second-order correction:
//
//   w_t(i) ∝ exp( -sum_{tau<t} ( eta*c_tau(i) + eta^2*c_tau(i)^2 ) )
//
// For losses in [-2, 2] and eta <= 1/5 the potential
// sum_i exp(eta*R_t(i) - eta^2*G_t(i)) never increases (R = cumulative regret,
// G = cumulative squared loss), which gives the second-order static bound
//   sum_t (w_t.c_t - c_t(i)) <= ln(K)/eta + eta*sum_t c_t(i)^2  for every i.
// The correction term makes negative-loss rounds count for slightly less,
// which is exactly what lets the reduction on top cancel its bias.
class HedgeV1 {
 public:
  HedgeV1(int num_actions, double eta) : eta_(eta) {
    if (num_actions <= 0) throw std::invalid_argument("HedgeV1: need at least one action");
    if (!(eta > 0.0) || eta > 0.2) throw std::invalid_argument("HedgeV1: eta must lie in (0, 1/5]");
    neg_cum_.assign(static_cast<std::size_t>(num_actions), 0.0);
  }

  int num_actions() const { return static_cast<int>(neg_cum_.size()); }
  double eta() const { return eta_; }

  std::vector<double> weights() const { return softmax_from_exponents(neg_cum_); }

  void update(const std::vector<double>& c) {
    if (c.size() != neg_cum_.size()) throw std::invalid_argument("HedgeV1: loss size mismatch");
    check_loss_range(c, kLossBound, "HedgeV1 loss");
    for (std::size_t i = 0; i < c.size(); ++i)
      neg_cum_[i] -= eta_ * c[i] + eta_ * eta_ * c[i] * c[i];
  }

  static constexpr double kLossBound = 2.0;

 private:
  double eta_;
  std::vector<double> neg_cum_;  // -sum(eta*c + eta^2*c^2), fed to the softmax
};

// Hedge over experts with individual learning rates:
//
//   w_t(i) ∝ eta_i * exp( sum_{tau<t} ( eta_i*r_tau(i) - eta_i^2*r_tau(i)^2 ) ),
//   r_tau(i) = w_tau.c_tau - c_tau(i).
//
// ln of sum_i eta_i*exp(...) is non-increasing as long as eta_i*r stays >= -1/2,
// so each expert i enjoys the second-order bound at its own rate. The update
// needs the weights that were actually played, so callers pass them back in.
//
// With losses declared in [-b, b], |r| can reach 2b; the constructor rejects
// max(eta_i)*b > 1/2 and caps the declared bound at 2 (rates <= 1/8 are always
// safe standalone; the reductions feed |c| <= 2 and rates <= 1/5).
class HedgeV2 {
 public:
  HedgeV2(std::vector<double> etas, double loss_bound = 2.0)
      : etas_(std::move(etas)), loss_bound_(std::min(loss_bound, 2.0)) {
    if (etas_.empty()) throw std::invalid_argument("HedgeV2: need at least one action");
    if (!(loss_bound > 0.0)) throw std::invalid_argument("HedgeV2: loss bound must be positive");
    double max_eta = 0.0;
    for (double e : etas_) {
      if (!(e > 0.0) || e > 0.2)
        throw std::invalid_argument("HedgeV2: every eta must lie in (0, 1/5]");
      max_eta = std::max(max_eta, e);
    }
    if (max_eta * loss_bound_ > 0.5)
      throw std::invalid_argument("HedgeV2: eta * loss bound must not exceed 1/2");
    cum_.assign(etas_.size(), 0.0);
  }

  int num_actions() const { return static_cast<int>(etas_.size()); }
  const std::vector<double>& etas() const { return etas_; }

  std::vector<double> weights() const {
    std::vector<double> expo(etas_.size());
    for (std::size_t i = 0; i < etas_.size(); ++i) expo[i] = std::log(etas_[i]) + cum_[i];
    return softmax_from_exponents(expo);
  }

  // c: this round's losses; w_played: the weights returned before the round.
  void update(const std::vector<double>& c, const std::vector<double>& w_played) {
    if (c.size() != cum_.size() || w_played.size() != cum_.size())
      throw std::invalid_argument("HedgeV2: size mismatch");
    check_loss_range(c, loss_bound_, "HedgeV2 loss");
    if (!is_distribution(w_played)) throw std::invalid_argument("HedgeV2: w_played is not a distribution");
    const double wc = dot(w_played, c);
    for (std::size_t i = 0; i < cum_.size(); ++i) {
      const double r = wc - c[i];
      cum_[i] += etas_[i] * r - etas_[i] * etas_[i] * r * r;
    }
  }

 private:
  std::vector<double> etas_;
  double loss_bound_;
  std::vector<double> cum_;  // sum(eta_i*r - eta_i^2*r^2) per action
};

}  // namespace ltm
