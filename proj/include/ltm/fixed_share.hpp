#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ltm/loss.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Fixed-share with a second-order correction. The played distribution is the
// mixed one and the exponential update runs on it, not on the pre-mix state:
//
//   q_t = (1-gamma)*q~_t + gamma/K,
//   q~_{t+1}(b) ∝ q_t(b) * exp( -eta*h_t(b) - eta^2*h_t(b)^2 ).
//
// The mixing floor (min_b q_t(b) >= gamma/K) is what bounds the cost of
// re-entering an expert after it has been ignored for a long stretch, giving
// the switching bound  sum_t (q_t.h_t - h_t(b_t)) <= O(S*ln(KT/gamma))/eta +
// eta*sum_t h_t(b_t)^2  for any comparator sequence b with S blocks.
//
// The exponent must stay tame: construction rejects eta*loss_bound > 1/2, and
// eta <= 1/5 regardless. gamma defaults to 1/T at the call site; an anytime
// variant with gamma_t = 1/(t+1) is available behind a flag.
class FixedShareVariant {
 public:
  FixedShareVariant(int num_actions, double eta, double gamma, double loss_bound,
                    bool anytime = false)
      : eta_(eta), gamma_(gamma), loss_bound_(loss_bound), anytime_(anytime) {
    if (num_actions <= 0) throw std::invalid_argument("FixedShareVariant: need at least one action");
    if (!(eta > 0.0) || eta > 0.2)
      throw std::invalid_argument("FixedShareVariant: eta must lie in (0, 1/5]");
    if (!(loss_bound > 0.0)) throw std::invalid_argument("FixedShareVariant: loss bound must be positive");
    if (eta * loss_bound > 0.5)
      throw std::invalid_argument("FixedShareVariant: eta * loss bound must not exceed 1/2");
    if (gamma < 0.0 || gamma > 0.5)
      throw std::invalid_argument("FixedShareVariant: gamma must lie in [0, 1/2]");
    base_ = uniform_weights(num_actions);
  }

  int num_actions() const { return static_cast<int>(base_.size()); }
  double eta() const { return eta_; }
  double gamma() const { return anytime_ ? 1.0 / static_cast<double>(round_ + 1) : gamma_; }
  const std::vector<double>& pre_mix() const { return base_; }

  std::vector<double> distribution() const {
    const double g = gamma();
    std::vector<double> q(base_.size());
    const double u = g / static_cast<double>(base_.size());
    for (std::size_t b = 0; b < base_.size(); ++b) q[b] = (1.0 - g) * base_[b] + u;
    return q;
  }

  void update(const std::vector<double>& h) {
    if (h.size() != base_.size()) throw std::invalid_argument("FixedShareVariant: loss size mismatch");
    check_loss_range(h, loss_bound_, "FixedShareVariant loss");
    const std::vector<double> q = distribution();
    for (std::size_t b = 0; b < base_.size(); ++b)
      base_[b] = q[b] * std::exp(-eta_ * h[b] - eta_ * eta_ * h[b] * h[b]);
    floor_and_normalize(base_);
    ++round_;
  }

 private:
  double eta_;
  double gamma_;
  double loss_bound_;
  bool anytime_;
  long long round_ = 1;
  std::vector<double> base_;  // q~, the pre-mix state
};

// Textbook fixed-share for comparison: exponential update on the played state
// first, then mix toward uniform.
//
//   q~'(b) ∝ q_t(b) * exp(-eta*h_t(b)),   q_{t+1} = (1-gamma)*q~' + gamma/K.
class ClassicFixedShare {
 public:
  ClassicFixedShare(int num_actions, double eta, double gamma, double loss_bound)
      : eta_(eta), gamma_(gamma), loss_bound_(loss_bound) {
    if (num_actions <= 0) throw std::invalid_argument("ClassicFixedShare: need at least one action");
    if (!(eta > 0.0) || eta > 0.2)
      throw std::invalid_argument("ClassicFixedShare: eta must lie in (0, 1/5]");
    if (!(loss_bound > 0.0)) throw std::invalid_argument("ClassicFixedShare: loss bound must be positive");
    if (eta * loss_bound > 0.5)
      throw std::invalid_argument("ClassicFixedShare: eta * loss bound must not exceed 1/2");
    if (gamma < 0.0 || gamma > 0.5)
      throw std::invalid_argument("ClassicFixedShare: gamma must lie in [0, 1/2]");
    q_ = uniform_weights(num_actions);
  }

  int num_actions() const { return static_cast<int>(q_.size()); }
  const std::vector<double>& distribution() const { return q_; }

  void update(const std::vector<double>& h) {
    if (h.size() != q_.size()) throw std::invalid_argument("ClassicFixedShare: loss size mismatch");
    check_loss_range(h, loss_bound_, "ClassicFixedShare loss");
    for (std::size_t b = 0; b < q_.size(); ++b) q_[b] *= std::exp(-eta_ * h[b]);
    floor_and_normalize(q_);
    const double u = gamma_ / static_cast<double>(q_.size());
    for (double& x : q_) x = (1.0 - gamma_) * x + u;
  }

 private:
  double eta_;
  double gamma_;
  double loss_bound_;
  std::vector<double> q_;
};

}  // namespace ltm
