#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmo/geometry.hpp"
#include "cmo/integrals.hpp"
#include "cmo/numerics.hpp"
#include "cmo/orlicz.hpp"
#include "cmo/test_function.hpp"

namespace cmo {

struct MorreyParams {
  OrliczSpec phi;
  double lambda = 0.0;
  int dim = 1;

  MorreyParams(OrliczSpec f, double lam, int n)
      : phi(std::move(f)), lambda(lam), dim(n) {
    if (n < 1) throw DomainError("MorreyParams: dimension must be >= 1");
  }
};

namespace detail {

inline bool is_origin_ball(const Ball& b) {
  return distance(b.center, {0.0, 0.0, 0.0}, b.dim) == 0.0;
}

inline void require_modular_form(const TestFunction& f, const Ball& ball) {
  if (f.form() == FunctionForm::General)
    throw DomainError("modular: function class unsupported (non-laminar structure)");
  if (!f.segments().empty() && !is_origin_ball(ball))
    throw DomainError("modular: radial parts need an origin-centered ball");
}

}  // namespace detail

// (1/|B_r|^lambda) \int_{B_r} Phi(|f|/eps) dx — the quantity inside the
// Luxemburg infimum.  Exact for indicator structures, quadrature for radial
// profiles.  Throws DivergenceError when the integral is infinite.
inline double modular(const TestFunction& f, const MorreyParams& prm,
                      const Ball& ball, double eps) {
  if (!(eps > 0.0)) throw DomainError("modular: eps must be positive");
  if (f.dim() != prm.dim || ball.dim != prm.dim)
    throw DomainError("modular: dimension mismatch");
  if (f.is_zero()) return 0.0;
  detail::require_modular_form(f, ball);

  double integral = 0.0;
  const double vn = unit_ball_volume(prm.dim);
  for (const auto& seg : f.segments()) {
    const double lo = seg.s0, hi = std::min(seg.s1, ball.radius);
    if (!(hi > lo)) continue;
    if (seg.is_constant()) {
      const double v = std::abs(seg.const_value());
      if (v > 0.0)
        integral += prm.phi.evaluate(v / eps) *
                    vn * (std::pow(hi, prm.dim) - std::pow(lo, prm.dim));
    } else {
      auto integrand = [&](double s) {
        const double v = std::abs(seg.value(s));
        return (v == 0.0 ? 0.0 : prm.phi.evaluate(v / eps)) *
               std::pow(s, prm.dim - 1);
      };
      double part;
      if (lo == 0.0)
        part = integrate_singular_origin(integrand, hi);
      else
        part = integrate_with_breakpoints(integrand, lo, hi, {});
      integral += prm.dim * vn * part;
    }
  }
  for (std::size_t j = 0; j < f.steps().size(); ++j) {
    const double v = std::abs(f.steps()[j].region_value);
    if (v == 0.0) continue;
    const double measure = f.region_measure_in(j, ball);
    if (measure > 0.0) integral += prm.phi.evaluate(v / eps) * measure;
  }
  if (!std::isfinite(integral))
    throw DivergenceError("modular: integral is infinite");
  return integral / std::pow(ball_volume(ball), prm.lambda);
}

// inf{eps > 0 : modular(f, eps) <= 1} by bisection in log eps; returns 0 for
// functions vanishing on the ball and kInf when no eps works.
inline double luxemburg_norm(const TestFunction& f, const MorreyParams& prm,
                             const Ball& ball) {
  if (f.is_zero()) return 0.0;
  auto m = [&](double e) {
    try {
      return modular(f, prm, ball, e);
    } catch (const DivergenceError&) {
      return kInf;
    }
  };
  double lo = 1.0, hi = 1.0;
  if (m(1.0) <= 1.0) {
    while (m(lo) <= 1.0) {
      if (m(lo) == 0.0 && m(1e-30 * lo) == 0.0) return 0.0;  // f == 0 on ball
      lo *= 0.25;
      if (lo < 1e-300) return 0.0;
    }
    hi = 4.0 * lo;
  } else {
    while (m(hi) > 1.0) {
      hi *= 4.0;
      if (hi > 1e300) return kInf;
    }
    lo = 0.25 * hi;
  }
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-11; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (m(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return std::sqrt(lo * hi);
}

inline std::vector<double> default_radius_grid(const TestFunction& f,
                                               int count = 129) {
  double scale = f.support_radius();
  if (!std::isfinite(scale) || scale <= 0.0) scale = 1.0;
  return log_grid(1e-3 * scale, 1e3 * scale, count);
}

struct CentralNormResult {
  double value = 0.0;
  double argmax_radius = 0.0;
  bool infinite = false;
};

// sup_{r>0} ||f||_{Phi,lambda,B_r} approximated on the radius grid with one
// golden-section refinement pass around the discrete argmax.
inline CentralNormResult central_norm(const TestFunction& f,
                                      const MorreyParams& prm,
                                      std::vector<double> radius_grid = {}) {
  if (f.is_zero()) return {0.0, 0.0, false};
  if (radius_grid.empty()) radius_grid = default_radius_grid(f);
  auto norm_at = [&](double r) {
    return luxemburg_norm(f, prm, Ball::origin(r, prm.dim));
  };
  CentralNormResult out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < radius_grid.size(); ++i) {
    const double v = norm_at(radius_grid[i]);
    if (std::isinf(v)) return {kInf, radius_grid[i], true};
    if (v > out.value) {
      out.value = v;
      out.argmax_radius = radius_grid[i];
      best = i;
    }
  }
  const double lo = radius_grid[best == 0 ? 0 : best - 1];
  const double hi = radius_grid[std::min(best + 1, radius_grid.size() - 1)];
  if (hi > lo) {
    const double r_star = golden_max(norm_at, lo, hi, 1e-9, 120);
    const double v = norm_at(r_star);
    if (v > out.value) {
      out.value = v;
      out.argmax_radius = r_star;
    }
  }
  return out;
}

// d(f chi_{B}, u) = |{x in B : |f(x)| > u}|; exact for step structures,
// bisection-resolved level sets for radial power profiles.
inline double distribution_function(const TestFunction& f, const Ball& ball,
                                    double u) {
  if (u < 0.0) throw DomainError("distribution_function: level must be >= 0");
  if (f.is_zero()) return 0.0;
  detail::require_modular_form(f, ball);
  double measure = 0.0;
  const double vn = unit_ball_volume(f.dim());
  for (const auto& seg : f.segments()) {
    const double lo = seg.s0, hi = std::min(seg.s1, ball.radius);
    if (!(hi > lo)) continue;
    // split at the sign change, then |value| is monotone on each side
    std::vector<double> cuts{lo, hi};
    for (double c : detail::segment_sign_change(seg, lo, hi)) cuts.insert(cuts.end() - 1, c);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double a = cuts[k], b = cuts[k + 1];
      const double va = std::abs(seg.value(std::max(a, 1e-300)));
      const double vb = std::abs(seg.value(b));
      double slo = a, shi = b;
      if (va > u && vb > u) {
        // whole piece above the level
      } else if (va <= u && vb <= u) {
        continue;
      } else {
        // monotone crossing of |value| = u
        double x0 = a, x1 = b;
        const bool increasing = vb > va;
        for (int i = 0; i < 200 && (x1 - x0) > 1e-14 * (x0 + x1 + 1e-300); ++i) {
          const double mgrid = 0.5 * (x0 + x1);
          if ((std::abs(seg.value(std::max(mgrid, 1e-300))) > u) == increasing)
            x1 = mgrid;
          else
            x0 = mgrid;
        }
        const double cross = 0.5 * (x0 + x1);
        if (increasing)
          slo = cross;
        else
          shi = cross;
      }
      measure += vn * (std::pow(shi, f.dim()) - std::pow(slo, f.dim()));
    }
  }
  for (std::size_t j = 0; j < f.steps().size(); ++j)
    if (std::abs(f.steps()[j].region_value) > u)
      measure += f.region_measure_in(j, ball);
  return measure;
}

namespace detail {

// sup_{u>0} Phi(u/eps) d(f chi_B, u) / |B|^lambda.  For step functions the
// sup sits just below a level-set breakpoint; power profiles get a level grid
// with golden refinement on top.
inline double weak_modular(const TestFunction& f, const MorreyParams& prm,
                           const Ball& ball, double eps) {
  std::vector<double> levels;
  for (const auto& st : f.steps()) {
    const double v = std::abs(st.region_value);
    if (v > 0.0) levels.push_back(v);
  }
  bool smooth_parts = false;
  for (const auto& seg : f.segments()) {
    const double hi = std::min(seg.s1, ball.radius);
    if (!(hi > seg.s0)) continue;
    const double va = std::abs(seg.value(std::max(seg.s0, 1e-300)));
    const double vb = std::abs(seg.value(hi));
    if (va > 0.0) levels.push_back(va);
    if (vb > 0.0) levels.push_back(vb);
    if (!seg.is_constant()) smooth_parts = true;
  }
  if (levels.empty()) return 0.0;
  if (smooth_parts) {
    const double vmin = *std::min_element(levels.begin(), levels.end());
    const double vmax = *std::max_element(levels.begin(), levels.end());
    if (vmax > vmin)
      for (double u : log_grid(vmin, vmax, 65)) levels.push_back(u);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const double vol_pow = std::pow(ball_volume(ball), prm.lambda);
  auto score = [&](double u) {
    const double lvl = u * (1.0 - 1e-12);  // approach breakpoints from below
    const double d = distribution_function(f, ball, lvl);
    if (d == 0.0) return 0.0;
    return prm.phi.evaluate(u / eps) * d / vol_pow;
  };
  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double sc = score(levels[i]);
    if (sc > best) {
      best = sc;
      best_i = i;
    }
  }
  if (smooth_parts && levels.size() >= 2) {
    const double lo = levels[best_i == 0 ? 0 : best_i - 1];
    const double hi = levels[std::min(best_i + 1, levels.size() - 1)];
    if (hi > lo) best = std::max(best, score(golden_max(score, lo, hi, 1e-10, 120)));
  }
  return best;
}

}  // namespace detail

inline double weak_norm(const TestFunction& f, const MorreyParams& prm,
                        const Ball& ball) {
  if (f.is_zero()) return 0.0;
  detail::require_modular_form(f, ball);
  auto w = [&](double e) { return detail::weak_modular(f, prm, ball, e); };
  if (w(1e-300) == 0.0) return 0.0;
  double lo = 1.0, hi = 1.0;
  if (w(1.0) <= 1.0) {
    while (w(lo) <= 1.0) {
      lo *= 0.25;
      if (lo < 1e-300) return 0.0;
    }
    hi = 4.0 * lo;
  } else {
    while (w(hi) > 1.0) {
      hi *= 4.0;
      if (hi > 1e300) return kInf;
    }
    lo = 0.25 * hi;
  }
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-11; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (w(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return std::sqrt(lo * hi);
}

struct WeakCentralNormResult {
  double value = 0.0;
  double argmax_radius = 0.0;
  bool infinite = false;
  bool jump_function = false;  // Phi is a Young function with a jump
};

inline WeakCentralNormResult weak_central_norm(const TestFunction& f,
                                               const MorreyParams& prm,
                                               std::vector<double> radius_grid = {}) {
  WeakCentralNormResult out;
  out.jump_function = !prm.phi.is_orlicz_function();
  if (f.is_zero()) return out;
  if (radius_grid.empty()) radius_grid = default_radius_grid(f);
  for (double r : radius_grid) {
    const double v = weak_norm(f, prm, Ball::origin(r, prm.dim));
    if (std::isinf(v)) return {kInf, r, true, out.jump_function};
    if (v > out.value) {
      out.value = v;
      out.argmax_radius = r;
    }
  }
  return out;
}

// Lemma-type closed forms for indicator norms; these are the oracles the
// numeric path is tested against.
inline double chi_norm_closed(const MorreyParams& prm, double t, double r) {
  if (prm.lambda < 0.0 || prm.lambda > 1.0)
    throw DomainError("chi_norm_closed: needs 0 <= lambda <= 1");
  if (!(t > 0.0) || !(r > 0.0)) throw DomainError("chi_norm_closed: radii must be positive");
  const double vol_r = ball_volume(prm.dim, r);
  const double overlap = ball_volume(prm.dim, std::min(t, r));
  return 1.0 / prm.phi.inverse(std::pow(vol_r, prm.lambda) / overlap);
}

inline double chi_central_norm_closed(const MorreyParams& prm, double t) {
  if (prm.lambda < 0.0 || prm.lambda > 1.0)
    throw DomainError("chi_central_norm_closed: needs 0 <= lambda <= 1");
  return 1.0 / prm.phi.inverse(std::pow(ball_volume(prm.dim, t), prm.lambda - 1.0));
}

struct ChiConjugateBound {
  double bound = 0.0;     // closed-form upper bound for the conjugate norm
  double measured = 0.0;  // numerically measured conjugate norm
};

inline ChiConjugateBound chi_conjugate_bound(const MorreyParams& prm,
                                             const Ball& b, double r) {
  if (prm.lambda < 0.0 || prm.lambda > 1.0)
    throw DomainError("chi_conjugate_bound: needs 0 <= lambda <= 1");
  const Ball br = Ball::origin(r, prm.dim);
  const double overlap = intersection_volume(br, b);
  if (!(overlap > 0.0))
    throw DomainError("chi_conjugate_bound: balls do not intersect");
  const double vol_pow = std::pow(ball_volume(br), prm.lambda);
  ChiConjugateBound out;
  out.bound = overlap / vol_pow * prm.phi.inverse(vol_pow / overlap);
  TestFunction chi = TestFunction::Builder(prm.dim).indicator(b, 1.0).build();
  out.measured = luxemburg_norm(chi, {conjugate(prm.phi), prm.lambda, prm.dim}, br);
  return out;
}

struct HolderGap {
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace detail {

// \int_B |f g| for the supported combinations: both radial about the origin,
// or radial times laminar steps.
inline double product_integral_abs(const TestFunction& f, const TestFunction& g,
                                   const Ball& ball) {
  const bool f_rad = f.form() == FunctionForm::RadialOrigin || f.is_zero();
  const bool g_rad = g.form() == FunctionForm::RadialOrigin || g.is_zero();
  if (f.is_zero() || g.is_zero()) return 0.0;
  if (f_rad && g_rad) {
    auto integrand = [&](double s) {
      return std::abs(f.radial_value(s) * g.radial_value(s));
    };
    std::vector<double> edges = f.segment_edges();
    for (double e : g.segment_edges()) edges.push_back(e);
    return radial_integral(integrand, ball.radius, ball.dim, edges);
  }
  const TestFunction* rad = f_rad ? &f : (g_rad ? &g : nullptr);
  const TestFunction* stp = f_rad ? &g : (g_rad ? &f : nullptr);
  if (rad == nullptr || stp->form() != FunctionForm::LaminarSteps)
    throw DomainError("holder_gap: unsupported function pair");
  double total = 0.0;
  for (std::size_t j = 0; j < stp->steps().size(); ++j) {
    const double v = std::abs(stp->steps()[j].region_value);
    if (v == 0.0) continue;
    auto prof = [&](double s) { return std::abs(rad->radial_value(s)); };
    const auto& bj = stp->steps()[j].ball;
    const double dj = distance(bj.center, {0.0, 0.0, 0.0}, ball.dim);
    double part = detail::annulus_ball_integral(prof, 0.0, ball.radius, dj,
                                                bj.radius, ball.dim,
                                                rad->segment_edges());
    for (int ch : stp->steps()[j].children) {
      const auto& bc = stp->steps()[static_cast<std::size_t>(ch)].ball;
      const double dc = distance(bc.center, {0.0, 0.0, 0.0}, ball.dim);
      part -= detail::annulus_ball_integral(prof, 0.0, ball.radius, dc,
                                            bc.radius, ball.dim,
                                            rad->segment_edges());
    }
    total += v * part;
  }
  return total;
}

}  // namespace detail

// Lemma-type Hoelder bound: \int |fg| <= 2 |B|^lambda ||f||_Phi ||g||_Phi*.
inline HolderGap holder_gap(const TestFunction& f, const TestFunction& g,
                            const MorreyParams& prm, const Ball& ball) {
  HolderGap out;
  if (f.is_zero() || g.is_zero()) return out;
  out.lhs = detail::product_integral_abs(f, g, ball);
  const double nf = luxemburg_norm(f, prm, ball);
  const double ng = luxemburg_norm(g, {conjugate(prm.phi), prm.lambda, prm.dim}, ball);
  out.rhs = 2.0 * std::pow(ball_volume(ball), prm.lambda) * nf * ng;
  return out;
}

}  // namespace cmo
