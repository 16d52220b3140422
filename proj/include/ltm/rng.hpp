#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ltm {

// Deterministic randomness for experiments. Everything is built directly on the
// raw mt19937_64 output stream: the standard <random> distributions are
// implementation-defined, which would silently break the "same seed, same CSV
// bytes" contract across toolchains. Categorical sampling is inverse-CDF with
// cumulative sums taken in fixed index order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // uniform double in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), rejection-sampled so it is exactly unbiased
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  // +1 or -1 with equal probability
  int pm_one() { return (gen_() & 1u) ? 1 : -1; }

  bool bernoulli(double p) { return uniform() < p; }

  // index ~ probs by inverse CDF; probs must be nonnegative and sum to ~1.
  // The final index absorbs any rounding slack.
  int sample(const std::vector<double>& probs) {
    if (probs.empty()) throw std::invalid_argument("Rng::sample: empty distribution");
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
  }

  // k distinct integers from [0, n) (partial Fisher-Yates), order randomized
  std::vector<int> distinct(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("Rng::distinct: need 0 <= k <= n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      const int j = i + uniform_int(n - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ltm
