#pragma once

#include <cmath>
#include <vector>

#include "cmo/geometry.hpp"
#include "cmo/numerics.hpp"
#include "cmo/test_function.hpp"

namespace cmo {

namespace detail {

// s where seg.value crosses zero inside (lo, hi), if any; the segment value
// coef*s^expo + cst is monotone in s there.
inline std::vector<double> segment_sign_change(const TestFunction::Segment& seg,
                                               double lo, double hi) {
  if (seg.is_constant() || !(hi > lo)) return {};
  const double a = seg.value(std::max(lo, 1e-300)), b = seg.value(hi);
  if (a == 0.0 || b == 0.0 || (a > 0.0) == (b > 0.0)) return {};
  double x0 = std::max(lo, 1e-300), x1 = hi;
  const bool increasing = b > a;
  for (int i = 0; i < 200 && (x1 - x0) > 1e-14 * (x0 + x1); ++i) {
    const double m = 0.5 * (x0 + x1);
    if ((seg.value(m) > 0.0) == increasing)
      x1 = m;
    else
      x0 = m;
  }
  return {0.5 * (x0 + x1)};
}

// n v_n \int seg-profile(s) s^{n-1} w(s; d, R) ds over the part of the annulus
// [s0, s1) about c lying inside B(x, R), d = |x - c|.
template <class Profile>
double annulus_ball_integral(Profile&& profile, double s0, double s1,
                             double d, double R, int n,
                             std::vector<double> extra_breaks = {},
                             double rel_tol = 1e-9) {
  const double lo = std::max(s0, d > R ? d - R : 0.0);
  const double hi = std::min(s1, d + R);
  if (!(hi > lo)) return 0.0;
  const double nvn = n * unit_ball_volume(n);
  auto integrand = [&](double s) {
    return profile(s) * std::pow(s, n - 1) *
           (d == 0.0 ? (s < R ? 1.0 : 0.0) : sphere_inside_fraction(n, s, d, R));
  };
  std::vector<double> breaks = std::move(extra_breaks);
  breaks.push_back(std::abs(d - R));
  breaks.push_back(d + R);
  double total = 0.0;
  double start = lo;
  if (lo == 0.0) {
    // possible integrable singularity of the profile at 0 (w == 1 there)
    double first = hi;
    for (double b : breaks)
      if (b > 0.0 && b < first) first = b;
    total += nvn * integrate_singular_origin(integrand, first, rel_tol);
    start = first;
  }
  if (start < hi) {
    std::vector<double> interior;
    for (double b : breaks)
      if (b > start && b < hi) interior.push_back(b);
    total += nvn * integrate_with_breakpoints(integrand, start, hi, interior, rel_tol);
  }
  return total;
}

}  // namespace detail

// Signed integral of f over an arbitrary ball.  Exact (intersection volumes)
// for indicator terms; 1-D quadrature with the spherical-fraction weight for
// radial pieces.
inline double ball_integral(const TestFunction& f, const Ball& b,
                            double rel_tol = 1e-9) {
  if (f.dim() != b.dim) throw DomainError("ball_integral: dimension mismatch");
  double total = 0.0;
  const double d = distance(f.center(), b.center, f.dim());
  for (const auto& seg : f.segments()) {
    if (seg.is_constant() && d > 0.0) {
      // constant annulus about c inside B: difference of exact lens volumes
      double m = std::isfinite(seg.s1)
                     ? intersection_volume(f.dim(), seg.s1, b.radius, d)
                     : ball_volume(b);
      if (seg.s0 > 0.0) m -= intersection_volume(f.dim(), seg.s0, b.radius, d);
      total += seg.const_value() * m;
    } else {
      auto prof = [&](double s) { return seg.value(s); };
      total += detail::annulus_ball_integral(prof, seg.s0, seg.s1, d, b.radius,
                                             f.dim(), {}, rel_tol);
    }
  }
  for (const auto& st : f.steps())
    total += st.coef * intersection_volume(st.ball, b);
  return total;
}

// Integral of |f| over a ball; needs the sign structure to be resolvable
// (everywhere-nonnegative, or laminar steps not overlapping the radial part).
inline double ball_integral_abs(const TestFunction& f, const Ball& b,
                                double rel_tol = 1e-9) {
  if (f.all_nonnegative()) return ball_integral(f, b, rel_tol);
  const bool steps_ok = f.form() == FunctionForm::LaminarSteps ||
                        f.form() == FunctionForm::RadialPlusSteps ||
                        f.steps().empty();
  if (!steps_ok)
    throw DomainError("ball_integral_abs: sign structure unresolved for this function");
  double total = 0.0;
  const double d = distance(f.center(), b.center, f.dim());
  for (const auto& seg : f.segments()) {
    auto prof = [&](double s) { return std::abs(seg.value(s)); };
    total += detail::annulus_ball_integral(
        prof, seg.s0, seg.s1, d, b.radius, f.dim(),
        detail::segment_sign_change(seg, seg.s0, std::min(seg.s1, d + b.radius)),
        rel_tol);
  }
  if (!f.steps().empty()) {
    const auto chat = f.absolute_step_coefficients();
    for (std::size_t j = 0; j < f.steps().size(); ++j)
      total += chat[j] * intersection_volume(f.steps()[j].ball, b);
  }
  return total;
}

}  // namespace cmo
