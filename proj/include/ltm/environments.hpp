#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltm/benchmark.hpp"
#include "ltm/rng.hpp"

namespace ltm {

// Loss-sequence generators. A stream hands out one loss vector per round via
// next(); the harness feeds the learner's sampled action back through
// observe(), which only the adaptive adversary cares about. benchmark() is the
// comparator sequence regret is measured against — final up front for the
// schedule-driven streams (benchmark_known() true), and only once the run is
// over for the adversary.
class LossStream {
 public:
  virtual ~LossStream() = default;
  virtual int num_actions() const = 0;
  virtual long long horizon() const = 0;
  virtual std::vector<double> next() = 0;
  virtual void observe(int /*sampled*/) {}
  virtual bool benchmark_known() const { return true; }
  virtual const BenchmarkSequence& benchmark() const = 0;
};

// Full-information piecewise streams over a comparator schedule. Two flavors:
//
//  best-action-favoring: the segment's comparator always loses -0.5 and every
//    other action +0.5. Deterministic, maximal per-round gap; useful when the
//    only question is how fast the learner re-locks after a switch.
//
//  random-walk: each arm carries a reflected random walk in [-0.15, 0.15]
//    (steps of 0.02); the comparator's loss is its level - 0.75, everyone
//    else's is their level + 0.55, both plus fresh uniform jitter in
//    [-0.1, 0.1]. Comparator losses land in [-1, -0.5], the rest in
//    [0.3, 0.8], so the ordering is never ambiguous but nothing is constant.
class PiecewiseAdversarial : public LossStream {
 public:
  enum class Style { kBestActionFavoring, kRandomWalk };

  PiecewiseAdversarial(PiecewiseSchedule schedule, Style style, std::uint64_t seed)
      : schedule_(std::move(schedule)), style_(style), rng_(seed) {
    schedule_.validate();
    bench_ = schedule_.to_benchmark();
    walk_.assign(static_cast<std::size_t>(schedule_.num_actions), 0.0);
  }

  int num_actions() const override { return schedule_.num_actions; }
  long long horizon() const override { return schedule_.horizon; }
  const BenchmarkSequence& benchmark() const override { return bench_; }
  const PiecewiseSchedule& schedule() const { return schedule_; }

  std::vector<double> next() override {
    if (t_ >= schedule_.horizon) throw std::invalid_argument("PiecewiseAdversarial: stream exhausted");
    const int comp = schedule_.comparator_at(t_);
    std::vector<double> loss(walk_.size());
    if (style_ == Style::kBestActionFavoring) {
      for (std::size_t i = 0; i < loss.size(); ++i)
        loss[i] = static_cast<int>(i) == comp ? -0.5 : 0.5;
    } else {
      for (std::size_t i = 0; i < loss.size(); ++i) {
        double v = walk_[i] + 0.02 * rng_.pm_one();
        if (v > 0.15) v = 0.3 - v;
        if (v < -0.15) v = -0.3 - v;
        walk_[i] = v;
        const double offset = static_cast<int>(i) == comp ? -0.75 : 0.55;
        loss[i] = v + offset + rng_.uniform(-0.1, 0.1);
      }
    }
    ++t_;
    return loss;
  }

 private:
  PiecewiseSchedule schedule_;
  BenchmarkSequence bench_;
  Style style_;
  Rng rng_;
  long long t_ = 0;
  std::vector<double> walk_;
};

inline PiecewiseAdversarial::Style parse_style(const std::string& name) {
  if (name == "best-action-favoring") return PiecewiseAdversarial::Style::kBestActionFavoring;
  if (name == "random-walk") return PiecewiseAdversarial::Style::kRandomWalk;
  throw std::invalid_argument("unknown piecewise style '" + name +
                              "' (expected best-action-favoring or random-walk)");
}

// Piecewise-stationary two-point losses: every entry is +-1, with
// P(+1) = (1 + mu)/2 so the mean is exactly mu. Within a segment whose gap is
// alpha, the comparator's mean is -alpha/2 and everyone else's +alpha/2, hence
// E[loss(j) - loss(comp)] = alpha for all j. Gaps are given per segment and
// cycled when fewer gaps than segments are supplied.
class StochasticStream : public LossStream {
 public:
  StochasticStream(PiecewiseSchedule schedule, std::vector<double> gaps, std::uint64_t seed)
      : schedule_(std::move(schedule)), gaps_(std::move(gaps)), rng_(seed) {
    schedule_.validate();
    if (gaps_.empty()) throw std::invalid_argument("StochasticStream: need at least one gap");
    for (double a : gaps_)
      if (!(a > 0.0) || a > 2.0)
        throw std::invalid_argument("StochasticStream: gaps must lie in (0, 2]");
    bench_ = schedule_.to_benchmark();
  }

  int num_actions() const override { return schedule_.num_actions; }
  long long horizon() const override { return schedule_.horizon; }
  const BenchmarkSequence& benchmark() const override { return bench_; }
  const PiecewiseSchedule& schedule() const { return schedule_; }

  double gap_for_segment(std::size_t segment_index) const {
    return gaps_[segment_index % gaps_.size()];
  }

  std::vector<double> next() override {
    if (t_ >= schedule_.horizon) throw std::invalid_argument("StochasticStream: stream exhausted");
    while (t_ >= schedule_.segments[cursor_].end) ++cursor_;
    const int comp = schedule_.segments[cursor_].action;
    const double alpha = gap_for_segment(cursor_);
    std::vector<double> loss(static_cast<std::size_t>(schedule_.num_actions));
    for (std::size_t i = 0; i < loss.size(); ++i) {
      const double mu = static_cast<int>(i) == comp ? -alpha / 2.0 : alpha / 2.0;
      loss[i] = rng_.bernoulli((1.0 + mu) / 2.0) ? 1.0 : -1.0;
    }
    ++t_;
    return loss;
  }

 private:
  PiecewiseSchedule schedule_;
  std::vector<double> gaps_;
  BenchmarkSequence bench_;
  Rng rng_;
  long long t_ = 0;
  std::size_t cursor_ = 0;
};

// Sparse losses: per round the comparator draws from U[-0.5, -0.25], up to
// rho-1 other arms (chosen fresh each round) draw distractor losses from
// U[-0.2, 0.2], and everything else is exactly zero. The comparator is always
// the strict per-round best among the active arms.
class SparseStream : public LossStream {
 public:
  SparseStream(PiecewiseSchedule schedule, int sparsity, std::uint64_t seed)
      : schedule_(std::move(schedule)), sparsity_(sparsity), rng_(seed) {
    schedule_.validate();
    if (sparsity_ < 1) throw std::invalid_argument("SparseStream: sparsity must be at least 1");
    bench_ = schedule_.to_benchmark();
  }

  int num_actions() const override { return schedule_.num_actions; }
  long long horizon() const override { return schedule_.horizon; }
  const BenchmarkSequence& benchmark() const override { return bench_; }
  const PiecewiseSchedule& schedule() const { return schedule_; }
  int sparsity() const { return sparsity_; }

  std::vector<double> next() override {
    if (t_ >= schedule_.horizon) throw std::invalid_argument("SparseStream: stream exhausted");
    const int comp = schedule_.comparator_at(t_);
    const int K = schedule_.num_actions;
    std::vector<double> loss(static_cast<std::size_t>(K), 0.0);
    loss[static_cast<std::size_t>(comp)] = rng_.uniform(-0.5, -0.25);
    const int extras = std::min(sparsity_ - 1, K - 1);
    if (extras > 0) {
      // distractors drawn from the K-1 non-comparator arms
      const std::vector<int> picks = rng_.distinct(K - 1, extras);
      for (int raw : picks) {
        const int arm = raw >= comp ? raw + 1 : raw;
        loss[static_cast<std::size_t>(arm)] = rng_.uniform(-0.2, 0.2);
      }
    }
    ++t_;
    return loss;
  }

 private:
  PiecewiseSchedule schedule_;
  int sparsity_;
  BenchmarkSequence bench_;
  Rng rng_;
  long long t_ = 0;
};

// Adaptive opponent that punishes learners without long-term memory. The
// horizon splits into floor(S/2) intervals (the last absorbs the remainder).
// Within an interval the default loss is -1/2 on arm 0 and zero elsewhere.
// Once the interval is at least a window W = ceil(sqrt(T*K/S)/2) old, the
// adversary looks for an arm i != 0 the learner has not played at all in the
// last W rounds while also having skipped arm 0 fewer than sqrt(T*K/S) times
// this interval; if such an arm exists (smallest index wins), the rest of the
// interval pays -1/2 on arm 0 and -1 on arm i. A learner that concentrates on
// arm 0 keeps leaving some arm unwatched — and is then made to regret exactly
// that arm. Every emitted vector has at most two nonzeros.
//
// The comparator is arm 0 up to the switch and the boosted arm after it, so
// the benchmark has at most two blocks per interval; it is only final once the
// run completes (benchmark_known() is false).
class LowerBoundAdversary : public LossStream {
 public:
  LowerBoundAdversary(int num_actions, long long horizon, int switch_budget)
      : num_actions_(num_actions), horizon_(horizon) {
    if (num_actions < 2) throw std::invalid_argument("LowerBoundAdversary: need at least two actions");
    if (horizon <= 0) throw std::invalid_argument("LowerBoundAdversary: horizon must be positive");
    if (switch_budget < 1)
      throw std::invalid_argument("LowerBoundAdversary: switch budget must be positive");
    intervals_ = std::max(1, switch_budget / 2);
    if (static_cast<long long>(intervals_) > horizon)
      throw std::invalid_argument("LowerBoundAdversary: more intervals than rounds");
    interval_len_ = horizon / intervals_;
    const double ratio = static_cast<double>(horizon) * num_actions / switch_budget;
    window_ = static_cast<long long>(std::ceil(0.5 * std::sqrt(ratio)));
    skip_threshold_ = std::sqrt(ratio);
    bench_.num_actions = num_actions;
    bench_.actions.reserve(static_cast<std::size_t>(horizon));
    window_counts_.assign(static_cast<std::size_t>(num_actions), 0);
    recent_.reserve(static_cast<std::size_t>(window_));
  }

  int num_actions() const override { return num_actions_; }
  long long horizon() const override { return horizon_; }
  bool benchmark_known() const override { return false; }
  const BenchmarkSequence& benchmark() const override { return bench_; }
  long long window() const { return window_; }
  double skip_threshold() const { return skip_threshold_; }
  int switches_fired() const { return switches_fired_; }

  std::vector<double> next() override {
    if (t_ >= horizon_) throw std::invalid_argument("LowerBoundAdversary: stream exhausted");
    if (t_ == interval_end_) {
      // new interval: forget everything about the learner's recent behavior
      const long long k = t_ / interval_len_;
      interval_end_ = (k + 1 >= intervals_) ? horizon_ : (k + 1) * interval_len_;
      switched_ = false;
      target_ = -1;
      skips_ = 0;
      recent_.clear();
      oldest_ = 0;
      std::fill(window_counts_.begin(), window_counts_.end(), 0);
    }
    if (!switched_ && static_cast<long long>(recent_.size()) >= window_ &&
        static_cast<double>(skips_) < skip_threshold_) {
      for (int i = 1; i < num_actions_; ++i) {
        if (window_counts_[static_cast<std::size_t>(i)] == 0) {
          switched_ = true;
          target_ = i;
          ++switches_fired_;
          break;
        }
      }
    }
    std::vector<double> loss(static_cast<std::size_t>(num_actions_), 0.0);
    loss[0] = -0.5;
    if (switched_) loss[static_cast<std::size_t>(target_)] = -1.0;
    bench_.actions.push_back(switched_ ? target_ : 0);
    ++t_;
    return loss;
  }

  void observe(int sampled) override {
    if (sampled < 0 || sampled >= num_actions_)
      throw std::invalid_argument("LowerBoundAdversary: sampled action out of range");
    skips_ += (sampled != 0);
    if (static_cast<long long>(recent_.size()) < window_) {
      recent_.push_back(sampled);
    } else {
      --window_counts_[static_cast<std::size_t>(recent_[oldest_])];
      recent_[oldest_] = sampled;
      oldest_ = (oldest_ + 1) % recent_.size();
    }
    ++window_counts_[static_cast<std::size_t>(sampled)];
  }

 private:
  int num_actions_;
  long long horizon_;
  int intervals_ = 1;
  long long interval_len_ = 0;
  long long window_ = 0;
  double skip_threshold_ = 0.0;
  BenchmarkSequence bench_;

  long long t_ = 0;
  long long interval_end_ = 0;  // forces interval setup on the first round
  bool switched_ = false;
  int target_ = -1;
  long long skips_ = 0;               // rounds this interval where arm 0 was not played
  std::vector<int> recent_;           // ring buffer of the last `window_` plays
  std::size_t oldest_ = 0;
  std::vector<long long> window_counts_;
  int switches_fired_ = 0;
};

}  // namespace ltm
