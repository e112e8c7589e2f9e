#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cmo/numerics.hpp"

namespace cmo {

using Point = std::array<double, 3>;

inline double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Ball {
  Point center{};
  double radius = 0.0;
  int dim = 1;

  Ball() = default;
  Ball(Point c, double r, int n) : center(c), radius(r), dim(n) {
    if (!(radius > 0.0)) throw DomainError("Ball: radius must be positive");
    if (dim < 1) throw DomainError("Ball: dimension must be >= 1");
  }

  static Ball origin(double r, int n) { return Ball({0.0, 0.0, 0.0}, r, n); }

  // ball centered on the first axis, as in B((R,0,...,0), r)
  static Ball on_axis(double offset, double r, int n) {
    return Ball({offset, 0.0, 0.0}, r, n);
  }
};

// |B(0,1)| = pi^{n/2} / Gamma(n/2 + 1); n = 0 gives 1 (used by witness bounds).
inline double unit_ball_volume(int n) {
  if (n < 0) throw DomainError("unit_ball_volume: dimension must be >= 0");
  return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0));
}

inline double ball_volume(int n, double r) {
  return unit_ball_volume(n) * std::pow(r, n);
}

inline double ball_volume(const Ball& b) { return ball_volume(b.dim, b.radius); }

// Volume of the cap of height h cut from an n-ball of radius r, via the
// regularized incomplete beta; h in [0, 2r].
inline double cap_volume(int n, double r, double h) {
  if (h <= 0.0) return 0.0;
  if (h >= 2.0 * r) return ball_volume(n, r);
  if (h > r) return ball_volume(n, r) - cap_volume(n, r, 2.0 * r - h);
  const double x = (2.0 * r * h - h * h) / (r * r);
  return 0.5 * ball_volume(n, r) * regularized_beta(x, 0.5 * (n + 1.0), 0.5);
}

inline double intersection_volume(int n, double r1, double r2, double dist) {
  if (dist >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2), rmax = std::max(r1, r2);
  if (dist + rmin <= rmax) return ball_volume(n, rmin);
  // two spherical caps on either side of the chordal hyperplane
  const double d1 = (dist * dist - r2 * r2 + r1 * r1) / (2.0 * dist);
  const double d2 = dist - d1;
  return cap_volume(n, r1, r1 - d1) + cap_volume(n, r2, r2 - d2);
}

inline double intersection_volume(const Ball& b1, const Ball& b2) {
  if (b1.dim != b2.dim)
    throw DomainError("intersection_volume: dimension mismatch");
  return intersection_volume(b1.dim, b1.radius, b2.radius,
                             distance(b1.center, b2.center, b1.dim));
}

// Fraction of the sphere {|y - c| = rho} lying inside B(x, R), where
// d = |x - c|.  Closed form for n in {1, 2, 3}.
inline double sphere_inside_fraction(int n, double rho, double d, double R) {
  if (rho <= 0.0) return d < R ? 1.0 : 0.0;
  if (rho + d <= R) return 1.0;
  if (std::abs(d - rho) >= R) return 0.0;
  if (d <= 0.0) return rho < R ? 1.0 : 0.0;
  const double c = std::clamp((d * d + rho * rho - R * R) / (2.0 * d * rho), -1.0, 1.0);
  switch (n) {
    case 1:
      return 0.5;
    case 2:
      return std::acos(c) / M_PI;
    case 3:
      return 0.5 * (1.0 - c);
    default:
      throw DomainError("sphere_inside_fraction: quadrature path needs n in {1,2,3}");
  }
}

// \int_{B_r} g(|x|) dx = n v_n \int_0^r g(s) s^{n-1} ds, with singularity
// handling at 0 and optional interior breakpoints where g has kinks.
template <class G>
double radial_integral(G&& g, double r, int n,
                       std::vector<double> breakpoints = {},
                       double rel_tol = 1e-9) {
  if (!(r > 0.0)) return 0.0;
  if (n < 1 || n > 3)
    throw DomainError("radial_integral: quadrature path needs n in {1,2,3}");
  auto integrand = [&](double s) { return g(s) * std::pow(s, n - 1); };
  breakpoints.push_back(r);
  std::sort(breakpoints.begin(), breakpoints.end());
  double first_cut = r;
  for (double b : breakpoints)
    if (b > 0.0 && b <= r) {
      first_cut = b;
      break;
    }
  double total = integrate_singular_origin(integrand, first_cut, rel_tol);
  if (first_cut < r) {
    std::vector<double> interior;
    for (double b : breakpoints)
      if (b > first_cut && b < r) interior.push_back(b);
    total += integrate_with_breakpoints(integrand, first_cut, r, interior, rel_tol);
  }
  return n * unit_ball_volume(n) * total;
}

}  // namespace cmo
