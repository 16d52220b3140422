#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ltm/learner.hpp"
#include "ltm/loss.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Mixing past posteriors, restarted by a doubling trick. Exponential weights
// where the played distribution folds in the average of the epoch's earlier
// posteriors,
//
//   p_t = (1-gamma)*p~_t + (gamma/(t-t0)) * sum_{tau=t0}^{t-1} p~_tau,
//   p~_{t+1}(i) ∝ p_t(i) * exp(eta*r_t(i)),
//
// so any posterior the learner has ever held this epoch can be recovered for
// gamma's price — that is the long-term memory. The rate wants the
// second-order sum V = sum_t sum_i p_t(i) r_t(i)^2 in advance, so the epoch
// restarts with a doubled guess whenever the observed V overtakes it.
struct MppConfig {
  int num_actions = 0;
  long long horizon = 0;
  // Comparator class the rate schedule targets; non-positive picks defaults.
  double switches = -1.0;  // default sqrt(horizon)
  double distinct = -1.0;  // default num_actions
  double share = -1.0;     // gamma, default 1/horizon
};

class MppLearner : public Learner {
 public:
  explicit MppLearner(const MppConfig& cfg) {
    if (cfg.num_actions <= 0) throw std::invalid_argument("MppLearner: need at least one action");
    if (cfg.horizon <= 0) throw std::invalid_argument("MppLearner: horizon must be positive");
    const double T = static_cast<double>(cfg.horizon);
    switches_ = cfg.switches > 0.0 ? cfg.switches : std::sqrt(T);
    distinct_ = cfg.distinct > 0.0 ? cfg.distinct : static_cast<double>(cfg.num_actions);
    gamma_ = cfg.share >= 0.0 ? cfg.share : std::min(0.5, 1.0 / T);
    if (gamma_ >= 1.0) throw std::invalid_argument("MppLearner: share must lie in [0, 1)");
    log_complexity_ = switches_ * std::log(T) +
                      distinct_ * std::log(static_cast<double>(cfg.num_actions));
    posterior_ = uniform_weights(cfg.num_actions);
    history_sum_.assign(posterior_.size(), 0.0);
    p_.assign(posterior_.size(), 0.0);
    eta_ = rate_for(threshold_);
  }

  int num_actions() const override { return static_cast<int>(posterior_.size()); }
  double eta() const { return eta_; }
  double threshold() const { return threshold_; }
  int restarts() const { return restarts_; }
  double v_epoch() const { return v_; }
  // Lifetime sum of sum_i p(i)*r(i)^2 across every epoch; the adaptive bound
  // is judged against this, not the per-epoch accumulator.
  double v_total() const { return v_total_; }

  const std::vector<double>& distribution() override {
    refresh();
    return p_;
  }

  void update(const std::vector<double>& loss, int /*sampled*/) override {
    if (loss.size() != posterior_.size()) throw std::invalid_argument("MppLearner: loss size mismatch");
    check_loss_range(loss, 1.0, "MppLearner loss");
    refresh();
    const std::vector<double> r = instantaneous_regret(p_, loss);
    double second_order = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) second_order += p_[i] * r[i] * r[i];
    v_ += second_order;
    v_total_ += second_order;
    if (v_ > threshold_) {
      // The rate guess was too optimistic for this loss sequence: halve it
      // (double the denominator) and start over.
      v_ = 0.0;
      threshold_ *= 2.0;
      eta_ = rate_for(threshold_);
      ++restarts_;
      posterior_ = uniform_weights(num_actions());
      std::fill(history_sum_.begin(), history_sum_.end(), 0.0);
      epoch_rounds_ = 0;
    } else {
      for (std::size_t i = 0; i < history_sum_.size(); ++i) history_sum_[i] += posterior_[i];
      ++epoch_rounds_;
      for (std::size_t i = 0; i < posterior_.size(); ++i)
        posterior_[i] = p_[i] * std::exp(eta_ * r[i]);
      floor_and_normalize(posterior_);
    }
    fresh_ = false;
  }

 private:
  double rate_for(double threshold) const {
    const double raw = std::sqrt(log_complexity_ / threshold);
    return std::min(0.2, std::max(raw, 1e-9));
  }

  void refresh() {
    if (fresh_) return;
    if (epoch_rounds_ == 0) {
      p_ = posterior_;
    } else {
      const double avg = gamma_ / static_cast<double>(epoch_rounds_);
      for (std::size_t i = 0; i < p_.size(); ++i)
        p_[i] = (1.0 - gamma_) * posterior_[i] + avg * history_sum_[i];
    }
    fresh_ = true;
  }

  double switches_ = 0.0;
  double distinct_ = 0.0;
  double gamma_ = 0.0;
  double log_complexity_ = 0.0;  // S ln T + n ln K, fixed at construction
  double eta_ = 0.0;
  double threshold_ = 1.0;  // doubling target for the epoch's V
  double v_ = 0.0;
  double v_total_ = 0.0;
  int restarts_ = 0;
  long long epoch_rounds_ = 0;  // posteriors accumulated since the last restart
  std::vector<double> posterior_;    // p~, the pre-mix state
  std::vector<double> history_sum_;  // sum of p~ over the epoch so far
  std::vector<double> p_;
  bool fresh_ = false;
};

}  // namespace ltm
