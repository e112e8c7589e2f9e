#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmo/geometry.hpp"
#include "cmo/integrals.hpp"
#include "cmo/numerics.hpp"
#include "cmo/test_function.hpp"

namespace cmo {

struct OperatorParams {
  double alpha = 0.5;
  int dim = 1;

  OperatorParams(double a, int n) : alpha(a), dim(n) {
    if (!(alpha > 0.0) || !(alpha < static_cast<double>(n)))
      throw DomainError("OperatorParams: need 0 < alpha < n");
  }
};

namespace detail {

// Integrate h over [a, b] where h may have an integrable singularity at
// either endpoint; power substitution is applied from the singular side.
template <class H>
double integrate_endpoint_aware(H&& h, double a, double b, bool sing_a,
                                bool sing_b, double rel_tol = 1e-9) {
  if (!(b > a)) return 0.0;
  if (sing_a && sing_b) {
    const double m = 0.5 * (a + b);
    return integrate_endpoint_aware(h, a, m, true, false, rel_tol) +
           integrate_endpoint_aware(h, m, b, false, true, rel_tol);
  }
  if (sing_a)
    return integrate_singular_origin([&](double s) { return h(a + s); }, b - a,
                                     rel_tol);
  if (sing_b)
    return integrate_singular_origin([&](double s) { return h(b - s); }, b - a,
                                     rel_tol);
  return integrate_with_breakpoints(h, a, b, {}, rel_tol);
}

// \int_{B(c,t), |x-y| <= cap} |x-y|^{alpha-n} dy via the shell reduction about
// x; the full-sphere part is closed-form, the cap-fraction part is 1-D
// quadrature.
inline double indicator_kernel_integral(const Point& x, const Ball& b,
                                        double alpha, double cap) {
  const int n = b.dim;
  const double d = distance(x, b.center, n);
  const double t = b.radius;
  const double nvn = n * unit_ball_volume(n);
  double total = 0.0;
  double quad_lo = std::abs(d - t);
  if (d < t) {
    const double s_in = std::min(t - d, cap);
    if (s_in > 0.0) total += nvn * std::pow(s_in, alpha) / alpha;
    quad_lo = t - d;
  }
  const double quad_hi = std::min(d + t, cap);
  if (quad_hi > quad_lo) {
    auto h = [&](double s) {
      return std::pow(s, alpha - 1.0) * sphere_inside_fraction(n, s, d, t);
    };
    total += nvn * integrate_endpoint_aware(h, quad_lo, quad_hi,
                                            quad_lo == 0.0, false);
  }
  return total;
}

// Kernel integral against one radial segment about center c, evaluated at x,
// truncated to |x-y| <= cap.  `absolute` integrates |segment value|.
inline double segment_kernel_integral(const TestFunction::Segment& seg,
                                      const Point& c, const Point& x, int n,
                                      double alpha, double cap, bool absolute) {
  const double d = distance(x, c, n);
  if (d == 0.0) {
    // radial about x: per-term antiderivatives are exact
    const double lo = seg.s0, hi = std::min(seg.s1, cap);
    if (!(hi > lo)) return 0.0;
    const double nvn = n * unit_ball_volume(n);
    auto primitive = [&](double cf, double ex, double s) {
      return cf == 0.0 ? 0.0 : cf * std::pow(s, ex + alpha) / (ex + alpha);
    };
    if (lo == 0.0 && seg.expo + alpha <= 0.0 && seg.coef != 0.0)
      throw DivergenceError("riesz: kernel integral diverges at the center");
    std::vector<double> cuts{lo, hi};
    if (absolute)
      for (double s : segment_sign_change(seg, lo, hi))
        cuts.insert(cuts.end() - 1, s);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      const double sign =
          absolute && seg.value(std::max(mid, 1e-300)) < 0.0 ? -1.0 : 1.0;
      double part = primitive(seg.coef, seg.expo, cuts[k + 1]) -
                    primitive(seg.coef, seg.expo, cuts[k]) +
                    primitive(seg.cst, 0.0, cuts[k + 1]) -
                    primitive(seg.cst, 0.0, cuts[k]);
      total += sign * part;
    }
    return nvn * total;
  }
  if (n == 1) {
    // Two arms of the annulus on the line.  The kernel is singular at y = x
    // and the profile may be singular at y = c; each subinterval touching one
    // of those points is integrated in exact distance coordinates from it,
    // because reconstructing |y - x| by subtraction near x loses everything
    // to cancellation.
    const double x0 = x[0], c0 = c[0];
    double total = 0.0;
    for (int arm = -1; arm <= 1; arm += 2) {
      double ya = arm > 0 ? c0 + seg.s0 : c0 - seg.s1;
      double yb = arm > 0 ? c0 + seg.s1 : c0 - seg.s0;
      ya = std::max(ya, x0 - cap);
      yb = std::min(yb, x0 + cap);
      if (!std::isfinite(ya) || !std::isfinite(yb) || !(yb > ya)) continue;
      std::vector<double> cuts{ya, yb};
      if (x0 > ya && x0 < yb) cuts.push_back(x0);
      if (c0 > ya && c0 < yb) cuts.push_back(c0);
      std::sort(cuts.begin(), cuts.end());
      // an interval joining both anchors gets a midpoint split so each half
      // has a single anchored end
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if ((cuts[k] == x0 || cuts[k] == c0) &&
            (cuts[k + 1] == x0 || cuts[k + 1] == c0))
          cuts.push_back(0.5 * (cuts[k] + cuts[k + 1]));
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double u = cuts[k], v = cuts[k + 1];
        const bool anchor_u = (u == x0 || u == c0);
        const bool anchor_v = (v == x0 || v == c0);
        const double anchor = anchor_u ? u : (anchor_v ? v : u);
        const double dir = anchor_u || !anchor_v ? 1.0 : -1.0;
        const double off_x = anchor - x0;  // exact when anchor == x0
        const double off_c = anchor - c0;
        auto g = [&](double sigma) {
          const double dist_x =
              anchor == x0 ? sigma : std::abs(off_x + dir * sigma);
          const double dist_c =
              anchor == c0 ? sigma : std::abs(off_c + dir * sigma);
          const double val = seg.value(std::max(dist_c, 1e-300));
          return (absolute ? std::abs(val) : val) *
                 std::pow(std::max(dist_x, 1e-300), alpha - 1.0);
        };
        if (anchor_u || anchor_v)
          total += integrate_singular_origin(g, v - u);
        else
          total += integrate_with_breakpoints(g, 0.0, v - u, {});
      }
    }
    return total;
  }
  if (seg.is_constant()) {
    // constant annulus = difference of balls, both handled exactly
    const double v = absolute ? std::abs(seg.const_value()) : seg.const_value();
    double outer;
    if (std::isfinite(seg.s1)) {
      outer = indicator_kernel_integral(x, Ball(c, seg.s1, n), alpha, cap);
    } else {
      outer = n * unit_ball_volume(n) * std::pow(cap, alpha) / alpha;
    }
    const double inner =
        seg.s0 > 0.0 ? indicator_kernel_integral(x, Ball(c, seg.s0, n), alpha, cap)
                     : 0.0;
    return v * (outer - inner);
  }
  throw DomainError(
      "riesz: off-center radial power pieces are unsupported for n >= 2");
}

}  // namespace detail

inline double hedberg_constant(int n, double alpha) {
  if (!(alpha > 0.0) || !(alpha < static_cast<double>(n)))
    throw DomainError("hedberg_constant: need 0 < alpha < n");
  return std::exp2(static_cast<double>(n)) * unit_ball_volume(n) /
         (std::exp2(alpha) - 1.0);
}

// Mf(x) = sup_{r>0} |B(x,r)|^{-1} \int_{B(x,r)} |f|; breakpoint-aware scan
// with golden-section refinement of the leading brackets.
inline double maximal_function(const TestFunction& f, const Point& x, int n) {
  if (f.dim() != n) throw DomainError("maximal_function: dimension mismatch");
  if (f.is_zero()) return 0.0;

  double terminal_limit = 0.0;
  for (const auto& seg : f.segments())
    if (!std::isfinite(seg.s1)) {
      if (seg.expo > 0.0 && seg.coef != 0.0) return kInf;
      terminal_limit = std::abs(seg.expo < 0.0 ? seg.cst : seg.const_value());
    }
  if (f.singular_at_center() && distance(x, f.center(), n) == 0.0) return kInf;

  auto avg = [&](double r) {
    return ball_integral_abs(f, Ball(x, r, n)) / ball_volume(n, r);
  };

  std::vector<double> candidates = f.breakpoint_distances(x);
  double finite_extent = 1.0;
  for (double b : candidates) finite_extent = std::max(finite_extent, b);
  for (double r : log_grid(finite_extent * 1e-7, finite_extent * 30.0, 257))
    candidates.push_back(r);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  std::vector<double> values(candidates.size());
  double best = terminal_limit;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values[i] = avg(candidates[i]);
    best = std::max(best, values[i]);
  }
  // refine every bracket whose value is within half a percent of the leader
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (values[i] < 0.995 * best) continue;
    const double lo = candidates[i == 0 ? 0 : i - 1];
    const double hi = candidates[std::min(i + 1, candidates.size() - 1)];
    if (!(hi > lo)) continue;
    const double r_star = golden_max(avg, lo, hi, 1e-11, 160);
    best = std::max(best, avg(r_star));
  }
  return best;
}

// I_alpha f(x) = \int f(y) |x-y|^{alpha-n} dy (signed).  Requires compact
// support; the far-field probe rejects everything else.
inline double riesz_potential(const TestFunction& f, const Point& x,
                              const OperatorParams& prm) {
  if (f.dim() != prm.dim) throw DomainError("riesz_potential: dimension mismatch");
  if (f.is_zero()) return 0.0;
  if (!std::isfinite(f.support_radius()))
    throw DivergenceError("riesz_potential: function does not have compact support");
  double total = 0.0;
  for (const auto& seg : f.segments())
    total += detail::segment_kernel_integral(seg, f.center(), x, prm.dim,
                                             prm.alpha, kInf, false);
  for (const auto& st : f.steps())
    total += st.coef *
             detail::indicator_kernel_integral(x, st.ball, prm.alpha, kInf);
  return total;
}

// \int_{|y-x| <= r} |f(y)| |x-y|^{alpha-n} dy, the left side of the Hedberg
// estimate.
inline double riesz_truncated_abs(const TestFunction& f, const Point& x,
                                  double r, const OperatorParams& prm) {
  if (f.dim() != prm.dim) throw DomainError("riesz_truncated_abs: dimension mismatch");
  if (!(r > 0.0)) throw DomainError("riesz_truncated_abs: radius must be positive");
  if (f.is_zero()) return 0.0;
  const bool steps_ok = f.all_nonnegative() ||
                        f.form() == FunctionForm::LaminarSteps ||
                        f.form() == FunctionForm::RadialPlusSteps ||
                        f.steps().empty();
  if (!steps_ok)
    throw DomainError("riesz_truncated_abs: sign structure unresolved");
  double total = 0.0;
  for (const auto& seg : f.segments())
    total += detail::segment_kernel_integral(seg, f.center(), x, prm.dim,
                                             prm.alpha, r, true);
  if (!f.steps().empty()) {
    std::vector<double> chat;
    if (f.form() == FunctionForm::LaminarSteps ||
        f.form() == FunctionForm::RadialPlusSteps) {
      chat = f.absolute_step_coefficients();
    } else {
      chat.resize(f.steps().size());
      for (std::size_t j = 0; j < chat.size(); ++j) chat[j] = f.steps()[j].coef;
    }
    for (std::size_t j = 0; j < f.steps().size(); ++j)
      total += chat[j] *
               detail::indicator_kernel_integral(x, f.steps()[j].ball, prm.alpha, r);
  }
  return total;
}

struct HedbergGap {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Truncated Riesz integral against C_H r^alpha Mf(x).
inline HedbergGap hedberg_gap(const TestFunction& f, const Point& x, double r,
                              const OperatorParams& prm) {
  HedbergGap out;
  if (f.is_zero()) return out;
  out.lhs = riesz_truncated_abs(f, x, r, prm);
  out.rhs = hedberg_constant(prm.dim, prm.alpha) * std::pow(r, prm.alpha) *
            maximal_function(f, x, prm.dim);
  return out;
}

}  // namespace cmo
