#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltm/fixed_share.hpp"
#include "ltm/hedge.hpp"
#include "ltm/rng.hpp"
#include "ltm/simplex.hpp"
#include "oracles.hpp"

using namespace ltm;

TEST_CASE("hedge v1 basics") {
  SUBCASE("starts uniform") {
    HedgeV1 h(4, 0.1);
    const std::vector<double> w = h.weights();
    for (double x : w) CHECK(x == doctest::Approx(0.25));
  }

  SUBCASE("one update matches the closed form") {
    HedgeV1 h(2, 0.1);
    h.update({1.0, -1.0});
    // exponents are -(eta*c + eta^2*c^2): -0.11 and +0.09
    const double a = std::exp(-0.11), b = std::exp(0.09);
    const std::vector<double> w = h.weights();
    CHECK(w[0] == doctest::Approx(a / (a + b)).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(b / (a + b)).epsilon(1e-12));

    HedgeV1 g(2, 0.1);
    g.update({1.0, 0.0});
    const std::vector<double> v = g.weights();
    CHECK(v[1] / v[0] == doctest::Approx(std::exp(0.11)).epsilon(1e-12));
  }

  SUBCASE("identical losses leave the weights uniform") {
    HedgeV1 h(3, 0.2);
    for (int t = 0; t < 10; ++t) h.update({0.7, 0.7, 0.7});
    for (double x : h.weights()) CHECK(x == doctest::Approx(1.0 / 3));
  }

  SUBCASE("construction and update guards") {
    CHECK_THROWS_AS(HedgeV1(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(HedgeV1(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HedgeV1(3, 0.21), std::invalid_argument);
    HedgeV1 h(2, 0.1);
    CHECK_THROWS_AS(h.update({2.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(h.update({0.0}), std::invalid_argument);
  }
}

TEST_CASE("hedge v1 second-order regret bound holds per expert") {
  for (double eta : {0.05, 0.2}) {
    HedgeV1 h(5, eta);
    Rng rng(101);
    const int T = 300;
    std::vector<double> regret(5, 0.0), sq(5, 0.0);
    for (int t = 0; t < T; ++t) {
      const std::vector<double> w = h.weights();
      std::vector<double> c(5);
      for (auto& x : c) x = rng.uniform(-2.0, 2.0);
      const double wc = dot(w, c);
      for (int i = 0; i < 5; ++i) {
        regret[static_cast<std::size_t>(i)] += wc - c[static_cast<std::size_t>(i)];
        sq[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
      }
      h.update(c);
    }
    for (int i = 0; i < 5; ++i)
      CHECK(regret[static_cast<std::size_t>(i)] <=
            std::log(5.0) / eta + eta * sq[static_cast<std::size_t>(i)] + 1e-9);
  }
}

TEST_CASE("hedge v1 potential never increases") {
  const double eta = 0.2;
  HedgeV1 h(4, eta);
  Rng rng(202);
  std::vector<double> R(4, 0.0), G(4, 0.0);
  double prev = std::log(4.0);  // ln sum exp(0)
  for (int t = 0; t < 400; ++t) {
    const std::vector<double> w = h.weights();
    std::vector<double> c(4);
    for (auto& x : c) x = rng.uniform(-2.0, 2.0);
    const double wc = dot(w, c);
    std::vector<double> expo(4);
    for (int i = 0; i < 4; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      R[k] += wc - c[k];
      G[k] += c[k] * c[k];
      expo[k] = eta * R[k] - eta * eta * G[k];
    }
    const double cur = oracles::log_sum_exp(expo);
    CHECK(cur <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
    prev = cur;
    h.update(c);
  }
}

TEST_CASE("hedge v2 basics") {
  SUBCASE("fresh weights are proportional to the rates") {
    HedgeV2 h({0.1, 0.2});
    const std::vector<double> w = h.weights();
    CHECK(w[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    HedgeV2 g({0.05, 0.05, 0.1});
    const std::vector<double> v = g.weights();
    CHECK(v[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("one update matches the closed form") {
    HedgeV2 h({0.1, 0.1});
    const std::vector<double> w = {0.5, 0.5};
    h.update({1.0, -1.0}, w);
    // r = (-1, +1); cum becomes (-0.11, +0.09); equal rates cancel in the ratio
    const std::vector<double> v = h.weights();
    CHECK(v[1] / v[0] == doctest::Approx(std::exp(0.2)).epsilon(1e-12));
  }

  SUBCASE("identical losses change nothing") {
    HedgeV2 h({0.1, 0.2, 0.05});
    const std::vector<double> before = h.weights();
    h.update({0.8, 0.8, 0.8}, before);  // r = 0 everywhere
    h.update({0.0, 0.0, 0.0}, h.weights());
    const std::vector<double> after = h.weights();
    for (int i = 0; i < 3; ++i)
      CHECK(after[static_cast<std::size_t>(i)] ==
            doctest::Approx(before[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }

  SUBCASE("guards") {
    CHECK_THROWS_AS(HedgeV2({}), std::invalid_argument);
    CHECK_THROWS_AS(HedgeV2({0.1, 0.25}), std::invalid_argument);
    CHECK_THROWS_AS(HedgeV2({0.1, 0.0}), std::invalid_argument);
    HedgeV2 h({0.1, 0.1});
    CHECK_THROWS_AS(h.update({3.0, 0.0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(h.update({0.0, 0.0}, {0.7, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(h.update({0.0}, {1.0}), std::invalid_argument);
  }
}

TEST_CASE("hedge v2 potential never increases at safe rates") {
  // ln sum_i eta_i*exp(cum_i) is the invariant; |r| can reach 2*bound = 4, so
  // rates up to 1/8 keep eta*r >= -1/2.
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> etas(6);
    for (auto& e : etas) e = rng.uniform(0.01, 0.125);
    HedgeV2 h(etas);
    // potential: ln sum_i exp(cum_i) — the rate factor lives in the weights,
    // not in the potential
    std::vector<double> cum(6, 0.0);
    double prev = std::log(6.0);
    for (int t = 0; t < 300; ++t) {
      const std::vector<double> w = h.weights();
      std::vector<double> c(6);
      for (auto& x : c) x = rng.uniform(-2.0, 2.0);
      const double wc = dot(w, c);
      for (int i = 0; i < 6; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double r = wc - c[k];
        cum[k] += etas[k] * r - etas[k] * etas[k] * r * r;
      }
      const double cur = oracles::log_sum_exp(cum);
      CHECK(cur <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
      prev = cur;
      h.update(c, w);
      // next round's weights must agree with our independent bookkeeping
      std::vector<double> expo(6);
      for (int i = 0; i < 6; ++i)
        expo[static_cast<std::size_t>(i)] =
            std::log(etas[static_cast<std::size_t>(i)]) + cum[static_cast<std::size_t>(i)];
      const std::vector<double> mine = softmax_from_exponents(expo);
      const std::vector<double> theirs = h.weights();
      for (int i = 0; i < 6; ++i)
        CHECK(theirs[static_cast<std::size_t>(i)] ==
              doctest::Approx(mine[static_cast<std::size_t>(i)]).epsilon(1e-9));
    }
  }
}

TEST_CASE("fixed share variant") {
  SUBCASE("fresh state is uniform whatever gamma is") {
    FixedShareVariant fs(3, 0.1, 0.25, 1.0);
    for (double x : fs.distribution()) CHECK(x == doctest::Approx(1.0 / 3));
    for (double x : fs.pre_mix()) CHECK(x == doctest::Approx(1.0 / 3));
  }

  SUBCASE("two rounds match hand arithmetic") {
    FixedShareVariant fs(2, 0.1, 0.01, 3.0);
    fs.update({1.0, -1.0});
    // update runs on the mixed (here still uniform) state
    const double a = 0.5 * std::exp(-0.1 - 0.01);
    const double b = 0.5 * std::exp(0.1 - 0.01);
    const double q0 = a / (a + b), q1 = b / (a + b);
    CHECK(fs.pre_mix()[0] == doctest::Approx(q0).epsilon(1e-12));
    CHECK(fs.pre_mix()[1] == doctest::Approx(q1).epsilon(1e-12));
    const std::vector<double> q = fs.distribution();
    CHECK(q[0] == doctest::Approx(0.99 * q0 + 0.005).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.99 * q1 + 0.005).epsilon(1e-12));
  }

  SUBCASE("mixing keeps every arm above gamma/K") {
    FixedShareVariant fs(2, 1.0 / 6, 0.01, 3.0);
    for (int t = 0; t < 50; ++t) fs.update({3.0, -3.0});
    // the update runs on the mixed state, so the share keeps re-seeding the
    // losing arm instead of letting it collapse entirely
    CHECK(fs.pre_mix()[0] < 0.01);
    CHECK(fs.pre_mix()[0] > 1e-4);
    CHECK(fs.distribution()[0] >= 0.005 - 1e-15);
  }

  SUBCASE("gamma zero plays the bare state") {
    FixedShareVariant fs(3, 0.1, 0.0, 2.0);
    fs.update({1.0, -1.0, 0.0});
    const std::vector<double> q = fs.distribution();
    for (int i = 0; i < 3; ++i)
      CHECK(q[static_cast<std::size_t>(i)] ==
            doctest::Approx(fs.pre_mix()[static_cast<std::size_t>(i)]).epsilon(1e-15));
  }

  SUBCASE("zero loss copies the played distribution into the state") {
    FixedShareVariant fs(3, 0.15, 0.2, 2.0);
    fs.update({1.0, -0.5, 0.3});
    const std::vector<double> played = fs.distribution();
    fs.update({0.0, 0.0, 0.0});
    for (int i = 0; i < 3; ++i)
      CHECK(fs.pre_mix()[static_cast<std::size_t>(i)] ==
            doctest::Approx(played[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }

  SUBCASE("anytime mixing decays like 1/t") {
    FixedShareVariant fs(2, 0.1, 0.0, 1.0, /*anytime=*/true);
    CHECK(fs.gamma() == doctest::Approx(0.5));
    fs.update({0.0, 0.0});
    CHECK(fs.gamma() == doctest::Approx(1.0 / 3));
    fs.update({0.0, 0.0});
    CHECK(fs.gamma() == doctest::Approx(0.25));
  }

  SUBCASE("guards") {
    CHECK_THROWS_AS(FixedShareVariant(0, 0.1, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FixedShareVariant(2, 0.25, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FixedShareVariant(2, 0.2, 0.1, 3.0), std::invalid_argument);  // eta*bound > 1/2
    CHECK_THROWS_AS(FixedShareVariant(2, 0.1, 0.6, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FixedShareVariant(2, 0.1, -0.1, 1.0), std::invalid_argument);
    FixedShareVariant fs(2, 0.1, 0.1, 1.0);
    CHECK_THROWS_AS(fs.update({1.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(fs.update({0.0}), std::invalid_argument);
  }
}

TEST_CASE("fixed share tracks a switching comparator") {
  const int T = 2000, K = 2;
  const double eta = 1.0 / 6, gamma = 1.0 / T;
  FixedShareVariant fs(K, eta, gamma, 3.0);
  Rng rng(404);
  // comparator switches arm every 500 rounds; its arm runs about one unit
  // cheaper than the other
  double regret = 0.0, comp_sq = 0.0;
  int blocks = 0;
  for (int t = 0; t < T; ++t) {
    const int best = (t / 500) % K;
    if (t % 500 == 0) ++blocks;
    std::vector<double> h(K);
    for (int b = 0; b < K; ++b)
      h[static_cast<std::size_t>(b)] = (b == best ? -0.5 : 0.5) + rng.uniform(-0.3, 0.3);
    const std::vector<double> q = fs.distribution();
    regret += dot(q, h) - h[static_cast<std::size_t>(best)];
    comp_sq += h[static_cast<std::size_t>(best)] * h[static_cast<std::size_t>(best)];
    fs.update(h);
  }
  CHECK(blocks == 4);
  const double budget = 10.0 * blocks * std::log(static_cast<double>(T)) / eta + eta * comp_sq;
  CHECK(regret <= budget);
  CHECK(regret > 0.0);  // it does pay something for the switches
}

TEST_CASE("classic fixed share") {
  SUBCASE("uniform is a fixed point of zero loss") {
    ClassicFixedShare cfs(4, 0.1, 0.05, 1.0);
    cfs.update({0.0, 0.0, 0.0, 0.0});
    for (double x : cfs.distribution()) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("zero loss reduces to the mixing step") {
    ClassicFixedShare cfs(3, 0.1, 0.2, 1.0);
    cfs.update({1.0, -1.0, 0.0});
    const std::vector<double> d = cfs.distribution();
    cfs.update({0.0, 0.0, 0.0});
    const std::vector<double> want = mix_with_uniform(d, 0.2);
    for (int i = 0; i < 3; ++i)
      CHECK(cfs.distribution()[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }

  SUBCASE("one update matches hand arithmetic") {
    ClassicFixedShare cfs(2, 0.1, 0.1, 1.0);
    cfs.update({1.0, -1.0});
    // plain exponential tilt (no second-order term), then mix
    const double a = std::exp(-0.1), b = std::exp(0.1);
    const double q0 = a / (a + b), q1 = b / (a + b);
    CHECK(cfs.distribution()[0] == doctest::Approx(0.9 * q0 + 0.05).epsilon(1e-12));
    CHECK(cfs.distribution()[1] == doctest::Approx(0.9 * q1 + 0.05).epsilon(1e-12));
  }

  SUBCASE("guards") {
    CHECK_THROWS_AS(ClassicFixedShare(2, 0.3, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ClassicFixedShare(2, 0.1, 0.7, 1.0), std::invalid_argument);
    ClassicFixedShare cfs(2, 0.1, 0.1, 1.0);
    CHECK_THROWS_AS(cfs.update({2.0, 0.0}), std::invalid_argument);
  }
}
