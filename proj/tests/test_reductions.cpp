#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltm/errors.hpp"
#include "ltm/reduction.hpp"
#include "ltm/rng.hpp"
#include "ltm/simplex.hpp"

using namespace ltm;

TEST_CASE("switching rate") {
  // sqrt((20 ln 1e4 + 3 ln 16)/1e4)
  CHECK(switching_rate(20, 3, 10000, 16) == doctest::Approx(0.13875322468549803).epsilon(1e-12));
  CHECK(switching_rate(10000, 1, 10000, 2) == doctest::Approx(0.2));  // capped
  CHECK(switching_rate(1, 1, 1, 1) == doctest::Approx(1e-9));        // floored
  CHECK_THROWS_AS(switching_rate(1, 1, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(switching_rate(0, 1, 10, 2), std::invalid_argument);
  CHECK_THROWS_AS(switching_rate(1, 0, 10, 2), std::invalid_argument);
  CHECK_THROWS_AS(switching_rate(1, 1, 10, 0), std::invalid_argument);
}

TEST_CASE("confidence distribution") {
  SUBCASE("full confidence plays the master") {
    const std::vector<double> p = confidence_distribution({0.3, 0.7}, {1.0, 1.0});
    CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.7).epsilon(1e-15));
  }

  SUBCASE("halving one confidence shifts the odds") {
    const std::vector<double> p = confidence_distribution({0.5, 0.5}, {1.0, 0.5});
    CHECK(p[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }

  SUBCASE("unnormalized weights are fine") {
    const std::vector<double> p = confidence_distribution({2.0, 2.0}, {0.5, 0.5});
    CHECK(p[0] == doctest::Approx(0.5));
  }

  SUBCASE("rejects broken inputs") {
    CHECK_THROWS_AS(confidence_distribution({1.0, 1.0}, {0.0, 0.0}), numerical_error);
    CHECK_THROWS_AS(confidence_distribution({1.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(confidence_distribution({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(confidence_distribution({1.0, 1.0}, {0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(confidence_distribution({-1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  }

  SUBCASE("grid overload marginalizes the rate index") {
    // K=2, M=2, action-major cells; equal weights, arm 1 at half confidence
    const std::vector<double> p =
        confidence_distribution({0.25, 0.25, 0.25, 0.25}, {1.0, 1.0, 0.5, 0.5}, 2);
    CHECK(p[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    // M=1 reduces to the flat form
    const std::vector<double> a = confidence_distribution({0.4, 0.6}, {0.9, 0.1}, 2);
    const std::vector<double> b = confidence_distribution({0.4, 0.6}, {0.9, 0.1});
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-15));
    // full confidence gives the weight marginals
    const std::vector<double> m =
        confidence_distribution({0.1, 0.2, 0.3, 0.4}, {1.0, 1.0, 1.0, 1.0}, 2);
    CHECK(m[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(confidence_distribution({0.5, 0.3, 0.2}, {1.0, 1.0, 1.0}, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("rate grid") {
  SUBCASE("T = 1e4 gives the doubling ladder") {
    const std::vector<double> r = grid_rates(10000);
    REQUIRE(r.size() == 5);
    for (int j = 0; j < 5; ++j)
      CHECK(r[static_cast<std::size_t>(j)] == std::ldexp(1.0, j) / 100.0);
  }
  SUBCASE("small horizons") {
    const std::vector<double> r100 = grid_rates(100);
    REQUIRE(r100.size() == 2);
    CHECK(r100[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r100[1] == doctest::Approx(0.2).epsilon(1e-15));
    const std::vector<double> r26 = grid_rates(26);
    REQUIRE(r26.size() == 1);
    CHECK(r26[0] == doctest::Approx(0.19611613513818404).epsilon(1e-12));
    CHECK_THROWS_AS(grid_rates(25), std::invalid_argument);
  }
  SUBCASE("ladder is nondecreasing and capped") {
    for (long long T : {26LL, 100LL, 12345LL, 1000000LL, 100000000LL}) {
      const std::vector<double> r = grid_rates(T);
      CHECK(!r.empty());
      for (std::size_t j = 0; j < r.size(); ++j) {
        CHECK(r[j] <= 0.2);
        CHECK(r[j] > 0.0);
        if (j > 0) CHECK(r[j] >= r[j - 1]);
      }
    }
  }
}

namespace {

SimpleReductionConfig simple_cfg(int K, long long T) {
  SimpleReductionConfig cfg;
  cfg.num_actions = K;
  cfg.horizon = T;
  return cfg;
}

}  // namespace

TEST_CASE("simple reduction") {
  SUBCASE("opens uniform with half confidence") {
    SimpleReduction red(simple_cfg(4, 1000));
    for (double x : red.distribution()) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
    for (double x : red.confidence()) CHECK(x == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : red.master_weights()) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
  }

  SUBCASE("rate resolution") {
    SimpleReductionConfig cfg = simple_cfg(16, 10000);
    cfg.switch_guess = 20;
    cfg.distinct_guess = 3;
    CHECK(SimpleReduction(cfg).eta() == doctest::Approx(0.13875322468549803).epsilon(1e-12));
    cfg.eta = 0.15;
    CHECK(SimpleReduction(cfg).eta() == doctest::Approx(0.15));
    cfg.eta = 0.25;
    CHECK_THROWS_AS(SimpleReduction{cfg}, std::invalid_argument);
    // defaults: S = sqrt(T), n = K
    SimpleReductionConfig d = simple_cfg(4, 100);
    CHECK(SimpleReduction(d).eta() ==
          doctest::Approx(switching_rate(10.0, 4.0, 100, 4)).epsilon(1e-15));
    CHECK_THROWS_AS(SimpleReduction(simple_cfg(0, 10)), std::invalid_argument);
    CHECK_THROWS_AS(SimpleReduction(simple_cfg(2, 0)), std::invalid_argument);
  }

  SUBCASE("master sees zero-mean losses bounded by two") {
    SimpleReduction red(simple_cfg(5, 200));
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
      const std::vector<double> p = red.distribution();
      const std::vector<double> w = red.master_weights();
      const std::vector<double> z = red.confidence();
      std::vector<double> loss(5);
      for (auto& x : loss) x = rng.uniform(-1.0, 1.0);
      const std::vector<double> r = instantaneous_regret(p, loss);
      std::vector<double> c(5);
      for (int i = 0; i < 5; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        c[k] = -z[k] * r[k];
        CHECK(std::abs(c[k]) <= 2.0 + 1e-12);
      }
      CHECK(std::abs(dot(w, c)) <= 1e-9);
      red.update(loss, -1);
    }
  }

  SUBCASE("flat losses leave the master alone but charge the hurdle") {
    SimpleReduction red(simple_cfg(3, 1000));
    const double z0 = red.confidence()[0];
    red.update({0.0, 0.0, 0.0}, -1);
    red.update({0.0, 0.0, 0.0}, -1);
    for (double x : red.master_weights()) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-12));
    for (double x : red.confidence()) CHECK(x < z0);  // 5*eta hurdle drains idle confidence

    SimpleReductionConfig plain = simple_cfg(3, 1000);
    plain.biased = false;
    SimpleReduction unbiased(plain);
    unbiased.update({0.0, 0.0, 0.0}, -1);
    for (double x : unbiased.confidence()) CHECK(x == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("tracks a switching comparator far better than uniform play") {
    const int K = 4, T = 6000;
    SimpleReductionConfig cfg = simple_cfg(K, T);
    cfg.switch_guess = 6;
    cfg.distinct_guess = 3;
    SimpleReduction red(cfg);
    Rng rng(57);
    double regret = 0.0, uniform_regret = 0.0;
    for (int t = 0; t < T; ++t) {
      const int best = (t / 1000) % 3;  // 6 blocks over 3 distinct actions
      std::vector<double> loss(K);
      for (int i = 0; i < K; ++i)
        loss[static_cast<std::size_t>(i)] = (i == best ? -0.5 : 0.5) + rng.uniform(-0.3, 0.3);
      const std::vector<double>& p = red.distribution();
      const double mean = 0.25 * (loss[0] + loss[1] + loss[2] + loss[3]);
      regret += dot(p, loss) - loss[static_cast<std::size_t>(best)];
      uniform_regret += mean - loss[static_cast<std::size_t>(best)];
      red.update(loss, -1);
    }
    const double budget =
        std::sqrt(T * (6 * std::log(static_cast<double>(T)) + 3 * std::log(static_cast<double>(K))));
    CHECK(regret <= 6.0 * budget);
    CHECK(regret < 0.5 * uniform_regret);
  }

  SUBCASE("relabeling the actions relabels the play") {
    const int K = 4;
    SimpleReduction red(simple_cfg(K, 500));
    SimpleReduction perm_red(simple_cfg(K, 500));
    const std::vector<int> perm = {2, 0, 3, 1};
    Rng rng(71);
    for (int t = 0; t < 150; ++t) {
      std::vector<double> loss(K), perm_loss(K);
      for (int i = 0; i < K; ++i) loss[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < K; ++i)
        perm_loss[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
            loss[static_cast<std::size_t>(i)];
      const std::vector<double> p = red.distribution();
      const std::vector<double> q = perm_red.distribution();
      for (int i = 0; i < K; ++i)
        CHECK(q[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] ==
              doctest::Approx(p[static_cast<std::size_t>(i)]).epsilon(1e-11));
      red.update(loss, -1);
      perm_red.update(perm_loss, -1);
    }
  }

  SUBCASE("rejects out-of-range losses") {
    SimpleReduction red(simple_cfg(2, 100));
    CHECK_THROWS_AS(red.update({1.5, 0.0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(red.update({0.0, 0.0, 0.0}, -1), std::invalid_argument);
  }
}

TEST_CASE("grid reduction") {
  SUBCASE("grid shape follows the horizon") {
    GridReductionConfig cfg{2, 10000, -1.0};
    GridReduction red(cfg);
    CHECK(red.grid_size() == 5);
    const std::vector<double> want = grid_rates(10000);
    for (int j = 0; j < 5; ++j)
      CHECK(red.rates()[static_cast<std::size_t>(j)] == want[static_cast<std::size_t>(j)]);
    CHECK_THROWS_AS(GridReduction(GridReductionConfig{2, 25, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridReduction(GridReductionConfig{0, 100, -1.0}), std::invalid_argument);
  }

  SUBCASE("opens uniform over actions") {
    GridReductionConfig cfg{3, 10000, -1.0};
    GridReduction red(cfg);
    for (double x : red.distribution()) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-12));
    for (double x : red.confidence()) CHECK(x == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("the hurdle scales with the rate and the regret magnitude") {
    // T=100: rates (0.1, 0.2). First round is uniform, so loss (-0.5, 0.5)
    // gives r = (+0.5, -0.5). Cell (0, j=1) then sees live loss
    // 5*0.2*0.5 - 0.5 = 0 exactly and keeps confidence 1/2; the slower cell
    // (0, j=0) sees a negative loss and gains; arm 1's cells both lose.
    GridReductionConfig cfg{2, 100, -1.0};
    GridReduction red(cfg);
    red.update({-0.5, 0.5}, -1);
    const std::vector<double>& z = red.confidence();  // action-major, M=2
    CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(z[0] > 0.5);
    CHECK(z[2] < 0.5);
    CHECK(z[3] < 0.5);
    // and the played distribution now prefers arm 0
    CHECK(red.distribution()[0] > 0.5);
  }

  SUBCASE("master sees zero-mean cell losses") {
    GridReductionConfig cfg{3, 10000, -1.0};
    GridReduction red(cfg);
    const std::size_t M = static_cast<std::size_t>(red.grid_size());
    Rng rng(83);
    for (int t = 0; t < 150; ++t) {
      const std::vector<double> p = red.distribution();
      const std::vector<double> w = red.master_weights();
      const std::vector<double> z = red.confidence();
      std::vector<double> loss(3);
      for (auto& x : loss) x = rng.uniform(-1.0, 1.0);
      const std::vector<double> r = instantaneous_regret(p, loss);
      std::vector<double> c(w.size());
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < M; ++j) {
          c[i * M + j] = -z[i * M + j] * r[i];
          CHECK(std::abs(c[i * M + j]) <= 2.0 + 1e-12);
        }
      CHECK(std::abs(dot(w, c)) <= 1e-9);
      red.update(loss, -1);
    }
  }

  SUBCASE("locks onto a stable best arm") {
    GridReductionConfig cfg{4, 2000, -1.0};
    GridReduction red(cfg);
    Rng rng(91);
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> loss(4);
      for (int i = 0; i < 4; ++i)
        loss[static_cast<std::size_t>(i)] = (i == 2 ? -0.5 : 0.5) + rng.uniform(-0.2, 0.2);
      red.update(loss, -1);
    }
    CHECK(red.distribution()[2] > 0.8);
  }

  SUBCASE("rejects out-of-range losses") {
    GridReductionConfig cfg{2, 100, -1.0};
    GridReduction red(cfg);
    CHECK_THROWS_AS(red.update({-1.5, 0.0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(red.update({0.0}, -1), std::invalid_argument);
  }
}
