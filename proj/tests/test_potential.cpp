#include <doctest.h>

#include <cmath>

#include "cmo/numerics.hpp"
#include "cmo/potential.hpp"

using namespace cmo;

TEST_CASE("maximal function of the unit interval indicator") {
  const auto chi = TestFunction::indicator(1.0, 1);
  CHECK(maximal_function(chi, {0.0, 0.0, 0.0}, 1) == doctest::Approx(1.0).epsilon(1e-9));
  // at x = 2 the best average is (r-1)/(2r) at r = 3
  CHECK(maximal_function(chi, {2.0, 0.0, 0.0}, 1) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("maximal function of a constant is the constant") {
  const auto f = TestFunction::constant(0.7, 1);
  CHECK(maximal_function(f, {1.3, 0.0, 0.0}, 1) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("maximal function dominates every ball average") {
  Rng rng(2024);
  for (int it = 0; it < 60; ++it) {
    const int n = rng.uniform_int(1, 2);
    auto builder = TestFunction::Builder(n).piece(0.0, rng.log_uniform(0.3, 2.0),
                                                  rng.uniform(0.2, 2.0));
    if (it % 2 == 0)
      builder.indicator(Ball::on_axis(rng.uniform(3.0, 6.0), rng.uniform(0.3, 1.0), n),
                        rng.uniform(0.2, 2.0));
    const auto f = builder.build();
    Point x{rng.uniform(-4.0, 4.0), 0.0, 0.0};
    if (n == 2) x[1] = rng.uniform(-4.0, 4.0);
    const double mf = maximal_function(f, x, n);
    for (int k = 0; k < 8; ++k) {
      const double r = rng.log_uniform(0.05, 20.0);
      const double avg = ball_integral_abs(f, Ball(x, r, n)) / ball_volume(n, r);
      CHECK(avg <= mf + 1e-9);
    }
  }
}

TEST_CASE("maximal operator is sublinear on random pairs") {
  Rng rng(5150);
  for (int it = 0; it < 25; ++it) {
    const int n = rng.uniform_int(1, 2);
    const auto f = TestFunction::indicator(rng.log_uniform(0.3, 3.0), n);
    const auto g = TestFunction::translated_indicator(rng.uniform(1.0, 4.0),
                                                      rng.uniform(0.3, 1.5), n);
    auto sum = TestFunction::Builder(n)
                   .piece(0.0, f.segments().front().s1, 1.0)
                   .indicator(g.steps().front().ball, 1.0)
                   .build();
    Point x{rng.uniform(-3.0, 3.0), 0.0, 0.0};
    CHECK(maximal_function(sum, x, n) <=
          maximal_function(f, x, n) + maximal_function(g, x, n) + 1e-9);
  }
}

TEST_CASE("riesz potential of the unit interval indicator") {
  const auto chi = TestFunction::indicator(1.0, 1);
  const OperatorParams prm{0.5, 1};
  // n v_n / alpha = 2 / (1/2) = 4 by the radial reduction
  CHECK(riesz_potential(chi, {0.0, 0.0, 0.0}, prm) == doctest::Approx(4.0).epsilon(1e-9));
  // int_{-1}^{1} (2-y)^{-1/2} dy = 2(sqrt 3 - 1)
  CHECK(riesz_potential(chi, {2.0, 0.0, 0.0}, prm) ==
        doctest::Approx(2.0 * (std::sqrt(3.0) - 1.0)).epsilon(1e-9));
}

TEST_CASE("riesz potential is linear and monotone") {
  const OperatorParams prm{0.5, 1};
  const auto f1 = TestFunction::indicator(1.0, 1);
  const auto f2 = TestFunction::indicator(1.0, 1, 2.0);
  const Point x{0.7, 0.0, 0.0};
  CHECK(riesz_potential(f2, x, prm) ==
        doctest::Approx(2.0 * riesz_potential(f1, x, prm)).epsilon(1e-10));

  Rng rng(31);
  for (int it = 0; it < 20; ++it) {
    const int n = rng.uniform_int(1, 2);
    const OperatorParams prm_n{rng.uniform(0.1, 0.9 * n), n};
    const double t = rng.log_uniform(0.3, 2.0);
    const double big = rng.uniform(1.0, 2.0), small = rng.uniform(0.1, 0.9);
    const auto fbig = TestFunction::indicator(t, n, big);
    const auto fsmall = TestFunction::indicator(t, n, small);
    Point x{rng.uniform(-2.0, 2.0), 0.0, 0.0};
    CHECK(riesz_potential(fbig, x, prm_n) >=
          riesz_potential(fsmall, x, prm_n) - 1e-9);
  }
}

TEST_CASE("riesz potential in n = 2 against the polar closed form at the center") {
  // I_alpha chi_{B_t}(0) = 2 pi t^alpha / alpha in n = 2
  const OperatorParams prm{0.7, 2};
  const auto chi = TestFunction::indicator(1.5, 2);
  CHECK(riesz_potential(chi, {0.0, 0.0, 0.0}, prm) ==
        doctest::Approx(2.0 * M_PI * std::pow(1.5, 0.7) / 0.7).epsilon(1e-8));
}

TEST_CASE("riesz potential rejects non-compact support") {
  const auto f = TestFunction::constant(1.0, 1);
  CHECK_THROWS_AS(riesz_potential(f, {0.0, 0.0, 0.0}, OperatorParams{0.5, 1}),
                  DivergenceError);
}

TEST_CASE("hedberg constants") {
  CHECK(hedberg_constant(1, 0.5) ==
        doctest::Approx(4.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK(hedberg_constant(2, 1.0) == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  CHECK(hedberg_constant(3, 1.0) ==
        doctest::Approx(8.0 * 4.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(hedberg_constant(1, 1.5), DomainError);
}

TEST_CASE("hedberg gap pinned cases") {
  const auto chi = TestFunction::indicator(1.0, 1);
  const OperatorParams prm{0.5, 1};
  SUBCASE("centered") {
    const auto hg = hedberg_gap(chi, {0.0, 0.0, 0.0}, 1.0, prm);
    CHECK(hg.lhs == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(hg.rhs == doctest::Approx(4.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-8));
  }
  SUBCASE("off-center truncation window") {
    const auto hg = hedberg_gap(chi, {2.0, 0.0, 0.0}, 4.0, prm);
    CHECK(hg.lhs == doctest::Approx(2.0 * (std::sqrt(3.0) - 1.0)).epsilon(1e-8));
    CHECK(hg.rhs ==
          doctest::Approx(4.0 / (std::sqrt(2.0) - 1.0) * 2.0 / 3.0).epsilon(1e-8));
  }
  SUBCASE("zero function") {
    const auto hg = hedberg_gap(TestFunction::zero(1), {0.0, 0.0, 0.0}, 1.0, prm);
    CHECK(hg.lhs == 0.0);
    CHECK(hg.rhs == 0.0);
  }
}

TEST_CASE("hedberg inequality on randomized cases") {
  Rng rng(888);
  for (int it = 0; it < 60; ++it) {
    const int n = rng.uniform_int(1, 2);
    const double alpha = rng.uniform(0.05, n - 0.05);
    auto builder = TestFunction::Builder(n);
    builder.piece(0.0, rng.log_uniform(0.2, 2.0), rng.uniform(0.1, 2.0));
    if (it % 2 == 0)
      builder.indicator(Ball::on_axis(rng.uniform(3.5, 6.0), rng.uniform(0.2, 1.2), n),
                        rng.uniform(0.1, 2.0));
    if (n == 1 && it % 3 == 0)
      builder.piece(2.2, 3.0, rng.uniform(0.1, 1.0), rng.uniform(-0.4, 1.0));
    const auto f = builder.build();
    Point x{rng.uniform(-5.0, 5.0), 0.0, 0.0};
    if (n == 2) x[1] = rng.uniform(-5.0, 5.0);
    const double r = rng.log_uniform(0.1, 10.0);
    const auto hg = hedberg_gap(f, x, r, OperatorParams{alpha, n});
    CHECK(hg.lhs <= hg.rhs * (1.0 + 1e-6) + 1e-12);
  }
}
