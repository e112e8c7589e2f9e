#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameters or a violated construction constraint; message names the rule.
struct DomainError : Error {
  using Error::Error;
};

// A quantity that is provably (or by probe) non-integrable / unbounded.
struct DivergenceError : Error {
  using Error::Error;
};

// Tabulated function queried outside its table range.
struct ExtrapolationError : Error {
  using Error::Error;
};

// Numeric supremum not bracketed by the available data (tabulated conjugates).
struct UnresolvedSupremumError : Error {
  using Error::Error;
};

// Malformed grammar string handed to a parser.
struct GrammarError : Error {
  using Error::Error;
};

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw DomainError("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Smallest x with f(x) > target, for nondecreasing f on [lo, hi].
// Requires f(lo) <= target < f(hi). Converges in relative width; works across
// plateaus and jumps (right-continuous inverse semantics).
template <class F>
double solve_increasing(F&& f, double target, double lo, double hi,
                        double rel_tol = 1e-12, int max_iter = 200) {
  for (int i = 0; i < max_iter && (hi - lo) > rel_tol * (std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Golden-section maximization of a unimodal f on [a, b]; returns the argmax.
template <class F>
double golden_max(F&& f, double a, double b, double rel_tol = 1e-10,
                  int max_iter = 200) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-300); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

namespace detail {

template <class F>
double adapt_simpson_rec(F& f, double a, double m, double b, double fa,
                         double fm, double fb, double whole, double tol,
                         int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // non-finite samples mean a genuinely infinite integral; propagate instead
  // of splitting forever
  if (!std::isfinite(left + right)) return left + right;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      (b - a) <= 1e-14 * (std::abs(a) + std::abs(b)))
    return left + right + delta / 15.0;
  return adapt_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b]; tolerance is treated as absolute for the
// recursion and should be pre-scaled by the caller (see integrate_*).
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol,
                        int max_depth = 44) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adapt_simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol,
                                   max_depth);
}

// Fixed-panel composite Simpson; cheap scale estimate that never recurses.
template <class F>
double fixed_simpson(F&& f, double a, double b, int panels = 128) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i)
    acc += f(a + i * h) * (i % 2 != 0 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Integrate f over [a, b] split at the given interior breakpoints; the
// absolute budget for the adaptive pass is scaled off a fixed-panel estimate
// so huge integrands do not drive the recursion below floating resolution.
template <class F>
double integrate_with_breakpoints(F&& f, double a, double b,
                                  std::vector<double> breaks,
                                  double rel_tol = 1e-9) {
  if (!(b > a)) return 0.0;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> cuts;
  for (double c : breaks)
    if (c >= a && c <= b) cuts.push_back(c);

  double rough = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    rough += std::abs(fixed_simpson(f, cuts[i], cuts[i + 1]));
  if (!std::isfinite(rough)) rough = 1e300;
  const double scale = std::max(rough, 1e-300);
  double total = 0.0;
  const double per_piece = rel_tol * scale / static_cast<double>(std::max<std::size_t>(1, cuts.size() - 1));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], per_piece);
  return total;
}

// Least-squares slope of log|f| against log s over the probe points; used to
// classify endpoint behaviour f ~ s^beta.
template <class F>
double log_slope_probe(F&& f, const std::vector<double>& sample_points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (double s : sample_points) {
    const double v = std::abs(f(s));
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    const double x = std::log(s), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

// Integral of f over (0, b] where f ~ s^beta at 0 with beta in (-1, 0): the
// substitution s = tau^m flattens the singularity.  beta <= -1 raises
// DivergenceError.  For beta >= 0 this is plain quadrature.
template <class F>
double integrate_singular_origin(F&& f, double b, double rel_tol = 1e-9) {
  if (!(b > 0.0)) return 0.0;
  std::vector<double> probes;
  for (int k = 0; k < 7; ++k) probes.push_back(b * 1e-7 * std::pow(2.0, k));
  const double beta = log_slope_probe(f, probes);
  const bool has_mass = [&] {
    for (double s : probes)
      if (std::abs(f(s)) > 0.0) return true;
    return false;
  }();
  if (has_mass && beta <= -1.0 + 1e-9)
    throw DivergenceError("integrate_singular_origin: non-integrable endpoint, slope " +
                          std::to_string(beta));
  const bool endpoint_finite = std::isfinite(f(0.0));
  if (!has_mass || (beta >= -1e-3 && endpoint_finite))
    return integrate_with_breakpoints(f, 0.0, b, {}, rel_tol);
  // s = tau^m turns the admitted endpoint behaviour into tau^{m(1+beta)-1},
  // which vanishes at 0; the probe certified integrability, so the endpoint
  // is removable and only a vanishing neighbourhood of it is pinned to zero
  const double m = std::max(2.0, std::min(8.0, std::ceil(2.0 / (1.0 + beta))));
  const double tau_hi = std::pow(b, 1.0 / m);
  auto g = [&](double tau) {
    if (tau <= 1e-12 * tau_hi) return 0.0;
    const double s = std::pow(tau, m);
    return f(s) * m * std::pow(tau, m - 1.0);
  };
  return integrate_with_breakpoints(g, 0.0, tau_hi, {}, rel_tol);
}

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction, 1e-12.
inline double regularized_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto betacf = [](double aa, double bb, double xx) {
    constexpr int kMaxIter = 300;
    constexpr double eps = 1e-15, fpmin = 1e-300;
    const double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * xx / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
      const int m2 = 2 * m;
      double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + num / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      h *= d * c;
      num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + num / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < eps) break;
    }
    return h;
  };
  const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                          std::log(a) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * betacf(a, b, x);
  return 1.0 - regularized_beta(1.0 - x, b, a);
}

// Deterministic RNG (splitmix64): fixed seed gives the identical stream on
// every platform, which the report determinism contract depends on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // log-uniform draw on [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace cmo
