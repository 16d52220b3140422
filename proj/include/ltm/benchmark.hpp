#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ltm/rng.hpp"

namespace ltm {

// A benchmark sequence is the comparator action per round: the thing regret is
// measured against. S counts its blocks (1 + number of adjacent changes), n the
// distinct actions used. Actions are 0-based indices in [0, K).
struct BenchmarkSequence {
  int num_actions = 0;
  std::vector<int> actions;

  void validate() const {
    if (num_actions <= 0) throw std::invalid_argument("BenchmarkSequence: num_actions must be positive");
    if (actions.empty()) throw std::invalid_argument("BenchmarkSequence: empty sequence");
    for (int a : actions)
      if (a < 0 || a >= num_actions)
        throw std::invalid_argument("BenchmarkSequence: action index out of range");
  }

  int switch_count() const {
    int s = 1;
    for (std::size_t t = 1; t < actions.size(); ++t) s += (actions[t] != actions[t - 1]);
    return s;
  }

  int distinct_count() const {
    std::set<int> seen(actions.begin(), actions.end());
    return static_cast<int>(seen.size());
  }
};

// (S, n) for a sequence; validates first so malformed input fails loudly.
inline std::pair<int, int> switch_and_distinct_counts(const BenchmarkSequence& seq) {
  seq.validate();
  return {seq.switch_count(), seq.distinct_count()};
}

// Per-action switch count S_i: 1 plus the number of rounds where the sequence
// enters or leaves action i. sum_i S_i <= 2S + n.
inline int per_action_switch_count(const BenchmarkSequence& seq, int action) {
  seq.validate();
  if (action < 0 || action >= seq.num_actions)
    throw std::invalid_argument("per_action_switch_count: action out of range");
  int s = 1;
  for (std::size_t t = 1; t < seq.actions.size(); ++t) {
    const bool was = seq.actions[t - 1] == action;
    const bool is = seq.actions[t] == action;
    s += (was != is);
  }
  return s;
}

// Piecewise-constant comparator schedule over [0, T): S segments, adjacent
// segments use different actions, n distinct actions in total. Segment lengths
// grow geometrically by `growth` (1.0 = equal): with front-loaded switches the
// tail of a run shows the learner's steady-state growth rather than a constant
// drizzle of transitions, and the early recurrences are what long-term memory
// is about.
struct PiecewiseSchedule {
  struct Segment {
    long long begin = 0;  // inclusive
    long long end = 0;    // exclusive
    int action = 0;
  };

  int num_actions = 0;
  long long horizon = 0;
  std::vector<Segment> segments;

  void validate() const {
    if (num_actions <= 0) throw std::invalid_argument("PiecewiseSchedule: num_actions must be positive");
    if (horizon <= 0) throw std::invalid_argument("PiecewiseSchedule: horizon must be positive");
    if (segments.empty()) throw std::invalid_argument("PiecewiseSchedule: no segments");
    long long expect = 0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const Segment& s = segments[k];
      if (s.begin != expect || s.end <= s.begin)
        throw std::invalid_argument("PiecewiseSchedule: segments must tile [0, horizon)");
      if (s.action < 0 || s.action >= num_actions)
        throw std::invalid_argument("PiecewiseSchedule: action out of range");
      if (k > 0 && s.action == segments[k - 1].action)
        throw std::invalid_argument("PiecewiseSchedule: adjacent segments must differ");
      expect = s.end;
    }
    if (expect != horizon)
      throw std::invalid_argument("PiecewiseSchedule: segments do not cover the horizon");
  }

  int comparator_at(long long t) const {
    if (t < 0 || t >= horizon) throw std::invalid_argument("PiecewiseSchedule: round out of range");
    // segments are few; linear scan with a cached cursor would be overkill here
    std::size_t lo = 0, hi = segments.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (segments[mid].begin <= t)
        lo = mid;
      else
        hi = mid;
    }
    return segments[lo].action;
  }

  BenchmarkSequence to_benchmark() const {
    validate();
    BenchmarkSequence seq;
    seq.num_actions = num_actions;
    seq.actions.reserve(static_cast<std::size_t>(horizon));
    for (const Segment& s : segments)
      for (long long t = s.begin; t < s.end; ++t) seq.actions.push_back(s.action);
    return seq;
  }

  // Distinct actions in order of first appearance (gap profiles index by this order).
  std::vector<int> distinct_actions() const {
    std::vector<int> out;
    for (const Segment& s : segments)
      if (std::find(out.begin(), out.end(), s.action) == out.end()) out.push_back(s.action);
    return out;
  }

  static PiecewiseSchedule make(int num_actions, long long horizon, int num_segments,
                                int num_distinct, double growth, Rng& rng) {
    if (num_actions <= 0) throw std::invalid_argument("PiecewiseSchedule: num_actions must be positive");
    if (horizon <= 0) throw std::invalid_argument("PiecewiseSchedule: horizon must be positive");
    if (num_segments < 1 || static_cast<long long>(num_segments) > horizon)
      throw std::invalid_argument("PiecewiseSchedule: need 1 <= segments <= horizon");
    if (num_distinct < 1 || num_distinct > num_actions || num_distinct > num_segments)
      throw std::invalid_argument("PiecewiseSchedule: need 1 <= distinct <= min(segments, actions)");
    if (num_segments > 1 && num_distinct < 2)
      throw std::invalid_argument("PiecewiseSchedule: multiple segments need at least two distinct actions");
    if (growth < 1.0) throw std::invalid_argument("PiecewiseSchedule: growth must be >= 1");

    // boundaries from cumulative geometric mass, kept strictly increasing
    std::vector<long long> bounds(static_cast<std::size_t>(num_segments) + 1, 0);
    double total = 0.0, g = 1.0;
    for (int k = 0; k < num_segments; ++k) {
      total += g;
      g *= growth;
    }
    double acc = 0.0;
    g = 1.0;
    for (int k = 1; k <= num_segments; ++k) {
      acc += g;
      g *= growth;
      bounds[static_cast<std::size_t>(k)] =
          std::llround(static_cast<double>(horizon) * (acc / total));
    }
    bounds[static_cast<std::size_t>(num_segments)] = horizon;
    for (int k = 1; k <= num_segments; ++k) {
      auto& b = bounds[static_cast<std::size_t>(k)];
      b = std::max(b, bounds[static_cast<std::size_t>(k) - 1] + 1);
    }
    if (bounds[static_cast<std::size_t>(num_segments)] != horizon)
      throw std::invalid_argument("PiecewiseSchedule: horizon too short for this many segments");

    // a random pool of distinct actions, cycled so every one recurs and
    // adjacent segments always differ
    const std::vector<int> pool = rng.distinct(num_actions, num_distinct);
    PiecewiseSchedule sched;
    sched.num_actions = num_actions;
    sched.horizon = horizon;
    sched.segments.resize(static_cast<std::size_t>(num_segments));
    for (int k = 0; k < num_segments; ++k) {
      auto& s = sched.segments[static_cast<std::size_t>(k)];
      s.begin = bounds[static_cast<std::size_t>(k)];
      s.end = bounds[static_cast<std::size_t>(k) + 1];
      s.action = pool[static_cast<std::size_t>(k % num_distinct)];
    }
    sched.validate();
    return sched;
  }
};

}  // namespace ltm
