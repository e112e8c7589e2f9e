#include <doctest.h>

#include <cmath>

#include "cmo/geometry.hpp"
#include "cmo/numerics.hpp"

using namespace cmo;

namespace {

// Monte Carlo oracle for |b1 cap b2|: uniform samples in the bounding box of
// b1, fraction inside both.  Returns {estimate, standard_error}.
std::pair<double, double> mc_intersection(const Ball& b1, const Ball& b2,
                                          std::size_t samples, Rng& rng) {
  const int n = b1.dim;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    Point p{};
    for (int i = 0; i < n; ++i)
      p[i] = b1.center[i] + rng.uniform(-b1.radius, b1.radius);
    if (distance(p, b1.center, n) < b1.radius &&
        distance(p, b2.center, n) < b2.radius)
      ++hits;
  }
  const double box = std::pow(2.0 * b1.radius, n);
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
  return {box * frac, se};
}

}  // namespace

TEST_CASE("unit ball volumes from the gamma formula") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ball volumes") {
  CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0));
  CHECK(ball_volume(2, 2.0) == doctest::Approx(4.0 * M_PI));
  CHECK(ball_volume(3, 0.5) == doctest::Approx(M_PI / 6.0));
}

TEST_CASE("intersection volumes: nested, interval overlap, lens") {
  // concentric r=2, t=1 in n=3: the smaller ball
  CHECK(intersection_volume(Ball::origin(2.0, 3), Ball::origin(1.0, 3)) ==
        doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
  // intervals (-2,2) and (1,5): overlap (1,2)
  CHECK(intersection_volume(Ball::origin(2.0, 1), Ball::on_axis(3.0, 2.0, 1)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // equal unit disks at center distance 1: 2 pi/3 - sqrt(3)/2
  const double lens = intersection_volume(Ball::origin(1.0, 2), Ball::on_axis(1.0, 1.0, 2));
  CHECK(lens == doctest::Approx(2.0 * M_PI / 3.0 - std::sqrt(3.0) / 2.0).epsilon(1e-10));
  // disjoint
  CHECK(intersection_volume(Ball::origin(1.0, 2), Ball::on_axis(5.0, 1.0, 2)) == 0.0);

  CHECK_THROWS_AS(intersection_volume(Ball::origin(1.0, 2), Ball::origin(1.0, 3)),
                  DomainError);
}

TEST_CASE("lens formula against a 1e7-sample Monte Carlo oracle") {
  Rng rng(20240518);
  const Ball b1 = Ball::origin(1.0, 2);
  const Ball b2 = Ball::on_axis(1.0, 1.0, 2);
  const auto [est, se] = mc_intersection(b1, b2, 10000000, rng);
  CHECK(std::abs(intersection_volume(b1, b2) - est) < 3.0 * se);
}

TEST_CASE("intersection volume properties on random ball pairs") {
  Rng rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int it = 0; it < 100; ++it) {
      const double r1 = rng.uniform(0.2, 3.0), r2 = rng.uniform(0.2, 3.0);
      const double d = rng.uniform(0.0, 4.0);
      const Ball b1 = Ball::origin(r1, n);
      const Ball b2 = Ball::on_axis(d, r2, n);
      const double v = intersection_volume(b1, b2);
      CHECK(v == doctest::Approx(intersection_volume(b2, b1)).epsilon(1e-12));
      CHECK(v <= std::min(ball_volume(b1), ball_volume(b2)) * (1.0 + 1e-12));
      CHECK(v >= 0.0);
      // monotone in each radius
      const Ball b2big = Ball::on_axis(d, r2 * 1.3, n);
      CHECK(intersection_volume(b1, b2big) >= v - 1e-12);
      // containment reproduces the smaller volume
      const Ball huge = Ball::origin(d + r2 + r1 + 1.0, n);
      CHECK(intersection_volume(huge, b2) == doctest::Approx(ball_volume(b2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed form vs Monte Carlo on random pairs (3 sigma)") {
  Rng rng(99);
  for (int n = 1; n <= 3; ++n) {
    for (int it = 0; it < 33; ++it) {
      const double r1 = rng.uniform(0.3, 2.0), r2 = rng.uniform(0.3, 2.0);
      const double d = rng.uniform(0.0, r1 + r2 + 0.5);
      const Ball b1 = Ball::origin(r1, n);
      const Ball b2 = Ball::on_axis(d, r2, n);
      const auto [est, se] = mc_intersection(b1, b2, 1000000, rng);
      CHECK(std::abs(intersection_volume(b1, b2) - est) < 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("radial integrals") {
  // g == 1 recovers the ball volume
  CHECK(radial_integral([](double) { return 1.0; }, 2.0, 2) ==
        doctest::Approx(4.0 * M_PI).epsilon(1e-10));
  // 1 * 2 * int_0^1 s^{-1/2} ds = 4
  CHECK(radial_integral([](double s) { return 1.0 / std::sqrt(s); }, 1.0, 1) ==
        doctest::Approx(4.0).epsilon(1e-9));
  // 2 int_0^1 s^2 ds = 2/3
  CHECK(radial_integral([](double s) { return s * s; }, 1.0, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("radial integral equals ball volume across n and r") {
  for (int n = 1; n <= 3; ++n)
    for (double r : {0.1, 1.0, 10.0})
      CHECK(radial_integral([](double) { return 1.0; }, r, n) ==
            doctest::Approx(ball_volume(n, r)).epsilon(1e-10));
}

TEST_CASE("non-integrable singularity is refused") {
  CHECK_THROWS_AS(
      radial_integral([](double s) { return std::pow(s, -1.2); }, 1.0, 1),
      DivergenceError);
}

TEST_CASE("closed forms extend to higher dimensions") {
  // the cap route through the incomplete beta carries any n
  for (int n : {4, 6, 9}) {
    CHECK(cap_volume(n, 1.0, 1.0) ==
          doctest::Approx(0.5 * unit_ball_volume(n)).epsilon(1e-12));
    CHECK(intersection_volume(n, 1.0, 1.0, 0.0) ==
          doctest::Approx(unit_ball_volume(n)).epsilon(1e-12));
    CHECK(intersection_volume(n, 1.0, 1.0, 2.0) == 0.0);
    double prev = unit_ball_volume(n);
    for (double d : {0.3, 0.8, 1.3, 1.9}) {
      const double v = intersection_volume(n, 1.0, 1.0, d);
      CHECK(v < prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(radial_integral([](double) { return 1.0; }, 1.0, 4), DomainError);
}
