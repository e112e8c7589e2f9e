#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmo/numerics.hpp"

namespace cmo {

enum class OrliczKind { Power, MaxPower, InversePowerLog, Tabulated, Conjugate };

// A Young function given symbolically.  Power and MaxPower store Phi itself;
// InversePowerLog stores the inverse as the primitive,
//
//   Phi^{-1}(v) = v^{1/p1} (1 - c ln v)^a        for v <= 1,
//   Phi^{-1}(v) = v^{1/p2} (1 + ln v)^{-b}       for v >= 1,
//
// and recovers Phi(u) by monotone bisection.  Tabulated interpolates a
// strictly increasing sample list linearly (implicit (0,0) start).  Conjugate
// wraps another spec with sup_{u>0} [uv - Phi(u)], closed-form for powers and
// numeric (cached grid + golden-section refinement) otherwise.
class OrliczSpec {
 public:
  static OrliczSpec power(double p) {
    if (!(p >= 1.0)) throw DomainError("power: exponent must be >= 1");
    OrliczSpec s(OrliczKind::Power);
    s.p_ = p;
    return s;
  }

  static OrliczSpec max_power(double p1, double p2) {
    if (!(p1 >= 1.0) || !(p2 > p1))
      throw DomainError("maxpow: need 1 <= p1 < p2");
    OrliczSpec s(OrliczKind::MaxPower);
    s.p1_ = p1;
    s.p2_ = p2;
    return s;
  }

  static OrliczSpec inverse_power_log(double p1, double a, double p2, double b,
                                      double log_slope = 1.0) {
    if (!(p1 > 1.0) || !(p2 > 1.0))
      throw DomainError("pwlog: exponents must be > 1");
    if (a < 0.0 || b < 0.0) throw DomainError("pwlog: log powers must be >= 0");
    if (!(log_slope > 0.0)) throw DomainError("pwlog: log slope must be > 0");
    if (a * log_slope > 1.0 / p1 + 1e-12)
      throw DomainError("pwlog: inverse not increasing on (0,1], needs a*c <= 1/p1");
    if (b > 1.0 / p2 + 1e-12)
      throw DomainError("pwlog: inverse not increasing on [1,inf), needs b <= 1/p2");
    OrliczSpec s(OrliczKind::InversePowerLog);
    s.p1_ = p1;
    s.a_ = a;
    s.p2_ = p2;
    s.b_ = b;
    s.log_slope_ = log_slope;
    s.validate_inverse_shape();
    return s;
  }

  static OrliczSpec tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw DomainError("tabulated: need >= 2 samples");
    double prev_u = 0.0, prev_v = 0.0, prev_slope = 0.0;
    for (const auto& [u, v] : samples) {
      if (!(u > prev_u) || !(v > prev_v))
        throw DomainError("tabulated: samples must be strictly increasing");
      const double slope = (v - prev_v) / (u - prev_u);
      if (slope < prev_slope * (1.0 - 1e-12))
        throw DomainError("tabulated: samples violate convexity");
      prev_u = u;
      prev_v = v;
      prev_slope = slope;
    }
    OrliczSpec s(OrliczKind::Tabulated);
    s.table_ = std::move(samples);
    return s;
  }

  OrliczKind kind() const { return kind_; }
  bool allows_infinity() const { return allows_infinity_; }

  // grid-measured concavity of the stored inverse (InversePowerLog only;
  // true for the closed families)
  bool inverse_concave() const { return inverse_concave_; }

  // Orlicz functions (finite, strictly increasing, continuous) are what the
  // boundedness theorem requires; Young functions with jumps are not.
  bool is_orlicz_function() const {
    if (allows_infinity_) return false;
    if (kind_ == OrliczKind::Conjugate) return zero_plateau_edge_ <= 0.0;
    return true;
  }

  double power_exponent() const { return p_; }

  double evaluate(double u) const {
    if (u < 0.0) throw DomainError("evaluate: argument must be >= 0");
    if (u == 0.0) return 0.0;
    switch (kind_) {
      case OrliczKind::Power:
        return std::pow(u, p_);
      case OrliczKind::MaxPower:
        return std::max(std::pow(u, p1_), std::pow(u, p2_));
      case OrliczKind::InversePowerLog: {
        // solve inverse(v) = u for v; the inverse is strictly increasing
        double hi = 1.0;
        int guard = 0;
        while (inverse_formula(hi) < u) {
          hi *= 4.0;
          if (++guard > 600) throw DomainError("pwlog evaluate: bracket failed");
        }
        return solve_increasing([this](double v) { return inverse_formula(v); },
                                u, 0.0, hi, 1e-12, 200);
      }
      case OrliczKind::Tabulated:
        return tabulated_eval(u);
      case OrliczKind::Conjugate:
        return conjugate_eval(u);
    }
    throw DomainError("evaluate: unknown kind");
  }

  // Right-continuous inverse inf{u >= 0 : Phi(u) > v}; jump locations are
  // returned for every v past the jump.
  double inverse(double v) const {
    if (v < 0.0) throw DomainError("inverse: argument must be >= 0");
    switch (kind_) {
      case OrliczKind::Power:
        return std::pow(v, 1.0 / p_);
      case OrliczKind::MaxPower:
        return std::min(std::pow(v, 1.0 / p1_), std::pow(v, 1.0 / p2_));
      case OrliczKind::InversePowerLog:
        return inverse_formula(v);
      case OrliczKind::Tabulated:
        return tabulated_inverse(v);
      case OrliczKind::Conjugate:
        return conjugate_inverse(v);
    }
    throw DomainError("inverse: unknown kind");
  }

  bool has_conjugate_breakpoint() const { return breakpoint_.has_value(); }
  double conjugate_breakpoint() const { return breakpoint_.value(); }
  const std::vector<std::pair<double, double>>& conjugate_table() const {
    return numeric_table_;
  }
  const OrliczSpec& conjugate_base() const { return *base_; }

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
      case OrliczKind::Power:
        os << "power:p=" << p_;
        break;
      case OrliczKind::MaxPower:
        os << "maxpow:p1=" << p1_ << ",p2=" << p2_;
        break;
      case OrliczKind::InversePowerLog:
        os << "pwlog:p1=" << p1_ << ",a=" << a_ << ",p2=" << p2_ << ",b=" << b_;
        if (log_slope_ != 1.0) os << ",c=" << log_slope_;
        break;
      case OrliczKind::Tabulated:
        os << "tab[" << table_.size() << "]";
        break;
      case OrliczKind::Conjugate:
        os << "conj(" << base_->describe() << ")";
        break;
    }
    return os.str();
  }

  friend OrliczSpec conjugate(const OrliczSpec& phi);

 private:
  explicit OrliczSpec(OrliczKind k) : kind_(k) {}

  double inverse_formula(double v) const {
    if (v == 0.0) return 0.0;
    if (v <= 1.0)
      return std::pow(v, 1.0 / p1_) * std::pow(1.0 - log_slope_ * std::log(v), a_);
    return std::pow(v, 1.0 / p2_) * std::pow(1.0 + std::log(v), -b_);
  }

  // Construction check on a log grid: strict increase is a hard error; the
  // chord concavity defect is measured and recorded.  Power-log families in
  // the literature are stated through equivalent inverses that may fail
  // concavity near u = 1 while still defining the space, so a defect is a
  // flag, not a rejection.
  void validate_inverse_shape() {
    const auto grid = log_grid(1e-8, 1e8, 257);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = inverse_formula(grid[i]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      if (!(vals[i + 1] > vals[i]))
        throw DomainError("pwlog: stored inverse is not strictly increasing");
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
      const double w = (grid[i + 1] - grid[i]) / (grid[i + 2] - grid[i]);
      const double chord = vals[i] + w * (vals[i + 2] - vals[i]);
      if (chord - vals[i + 1] > 1e-4 * (1.0 + std::abs(vals[i + 1])))
        inverse_concave_ = false;
    }
  }

  double tabulated_eval(double u) const {
    if (u > table_.back().first * (1.0 + 1e-12))
      throw ExtrapolationError("tabulated evaluate: argument beyond table range");
    double u0 = 0.0, v0 = 0.0;
    for (const auto& [ut, vt] : table_) {
      if (u <= ut) return v0 + (vt - v0) * (u - u0) / (ut - u0);
      u0 = ut;
      v0 = vt;
    }
    return table_.back().second;
  }

  double tabulated_inverse(double v) const {
    if (v > table_.back().second * (1.0 + 1e-12))
      throw ExtrapolationError("tabulated inverse: value beyond table range");
    double u0 = 0.0, v0 = 0.0;
    for (const auto& [ut, vt] : table_) {
      if (v <= vt) return u0 + (ut - u0) * (v - v0) / (vt - v0);
      u0 = ut;
      v0 = vt;
    }
    return table_.back().first;
  }

  double conjugate_eval(double v) const {
    if (closed_form_) {
      if (indicator_) return v <= *breakpoint_ ? 0.0 : kInf;
      return closed_coef_ * std::pow(v, closed_exp_);
    }
    if (breakpoint_ && v > *breakpoint_) return kInf;
    // cached coarse scan, then golden refinement on the concave profile
    std::size_t best = 0;
    double best_h = -kInf;
    for (std::size_t i = 0; i < grid_u_.size(); ++i) {
      const double h = grid_u_[i] * v - grid_phi_[i];
      if (h > best_h) {
        best_h = h;
        best = i;
      }
    }
    if (base_->kind() == OrliczKind::Tabulated && best + 1 == grid_u_.size() &&
        grid_u_.size() >= 2) {
      const double h_prev = grid_u_[best - 1] * v - grid_phi_[best - 1];
      if (best_h > h_prev)
        throw UnresolvedSupremumError(
            "conjugate: table does not bracket the supremum");
    }
    const double lo = grid_u_[best == 0 ? 0 : best - 1];
    const double hi = grid_u_[std::min(best + 1, grid_u_.size() - 1)];
    auto h = [&](double u) { return u * v - base_->evaluate(u); };
    const double u_star = golden_max(h, lo, hi, 1e-10, 200);
    return std::max(0.0, h(u_star));
  }

  double conjugate_inverse(double v) const {
    if (closed_form_) {
      if (indicator_) return *breakpoint_;
      return std::pow(v / closed_coef_, 1.0 / closed_exp_);
    }
    double hi = breakpoint_ ? *breakpoint_ * (1.0 + 1e-11) : 1.0;
    if (!breakpoint_) {
      int guard = 0;
      while (conjugate_eval(hi) <= v) {
        hi *= 4.0;
        if (++guard > 600)
          throw DomainError("conjugate inverse: bracket failed");
      }
    }
    return solve_increasing([this](double w) { return conjugate_eval(w); }, v,
                            0.0, hi, 1e-12, 200);
  }

  OrliczKind kind_;
  double p_ = 0.0, p1_ = 0.0, p2_ = 0.0, a_ = 0.0, b_ = 0.0, log_slope_ = 1.0;
  bool inverse_concave_ = true;
  std::vector<std::pair<double, double>> table_;
  bool allows_infinity_ = false;

  // conjugate representation
  std::shared_ptr<const OrliczSpec> base_;
  bool closed_form_ = false, indicator_ = false;
  double closed_coef_ = 0.0, closed_exp_ = 0.0;
  std::optional<double> breakpoint_;
  double zero_plateau_edge_ = 0.0;
  std::vector<double> grid_u_, grid_phi_;
  std::vector<std::pair<double, double>> numeric_table_;
};

inline OrliczSpec conjugate(const OrliczSpec& phi) {
  OrliczSpec s(OrliczKind::Conjugate);
  s.base_ = std::make_shared<OrliczSpec>(phi);
  if (phi.kind() == OrliczKind::Power) {
    const double p = phi.power_exponent();
    s.closed_form_ = true;
    if (p == 1.0) {
      // conjugate of the identity: 0 on [0,1], infinity beyond
      s.indicator_ = true;
      s.breakpoint_ = 1.0;
      s.allows_infinity_ = true;
      return s;
    }
    s.closed_exp_ = p / (p - 1.0);
    s.closed_coef_ = (1.0 - 1.0 / p) * std::pow(p, -1.0 / (p - 1.0));
    return s;
  }

  double lo = 1e-8, hi = 1e8;
  if (phi.kind() == OrliczKind::Tabulated) hi = phi.table_.back().first;
  if (phi.kind() == OrliczKind::Conjugate && phi.has_conjugate_breakpoint())
    hi = phi.conjugate_breakpoint();
  const auto grid = log_grid(lo, hi, 512);
  s.grid_u_ = grid;
  s.grid_phi_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    s.grid_phi_[i] = phi.evaluate(grid[i]);

  // affine-bounded Phi means Phi* jumps to infinity past the limit slope
  if (!phi.allows_infinity() && phi.kind() != OrliczKind::Tabulated) {
    auto chord_slope = [&](double u) {
      return (phi.evaluate(u) - phi.evaluate(0.5 * u)) / (0.5 * u);
    };
    const double s_top = chord_slope(hi), s_mid = chord_slope(hi / 8.0);
    if (s_top <= s_mid * (1.0 + 1e-9)) {
      s.breakpoint_ = s_top;
      s.allows_infinity_ = true;
    }
  }

  // slope of Phi at 0 is the right edge of the conjugate's zero plateau
  s.zero_plateau_edge_ = s.grid_phi_.front() / s.grid_u_.front();
  if (s.zero_plateau_edge_ < 1e-12) s.zero_plateau_edge_ = 0.0;

  for (double v : log_grid(1e-6, 1e6, 129)) {
    if (s.breakpoint_ && v > *s.breakpoint_) break;
    try {
      s.numeric_table_.emplace_back(v, s.conjugate_eval(v));
    } catch (const UnresolvedSupremumError&) {
      break;  // tabulated bases stop resolving past their final slope
    }
  }
  return s;
}

struct Delta2Result {
  bool satisfied = false;
  double d2 = kInf;
};

// D2 = sup over the grid of Phi(2u)/Phi(u); exact 2^p for pure powers.
inline Delta2Result delta2_estimate(const OrliczSpec& phi,
                                    const std::vector<double>& u_grid) {
  if (u_grid.empty()) throw DomainError("delta2_estimate: empty grid");
  if (phi.kind() == OrliczKind::Power)
    return {true, std::exp2(phi.power_exponent())};
  double d2 = 0.0;
  for (double u : u_grid) {
    double fu, f2u;
    try {
      fu = phi.evaluate(u);
      f2u = phi.evaluate(2.0 * u);
    } catch (const ExtrapolationError&) {
      continue;
    }
    if (!std::isfinite(fu) || !std::isfinite(f2u)) return {false, kInf};
    if (fu == 0.0) {
      if (f2u > 0.0) return {false, kInf};
      continue;
    }
    d2 = std::max(d2, f2u / fu);
  }
  return {true, d2};
}

struct YoungProductRange {
  double min_ratio = kInf;
  double max_ratio = -kInf;
};

// Extremes of Phi^{-1}(u) Phi*^{-1}(u) / u over the grid; the product lies in
// [u, 2u] for every Young function.
inline YoungProductRange young_product_check(const OrliczSpec& phi,
                                             const std::vector<double>& u_grid) {
  if (u_grid.empty()) throw DomainError("young_product_check: empty grid");
  const OrliczSpec conj = conjugate(phi);
  YoungProductRange out;
  for (double u : u_grid) {
    const double r = phi.inverse(u) * conj.inverse(u) / u;
    out.min_ratio = std::min(out.min_ratio, r);
    out.max_ratio = std::max(out.max_ratio, r);
  }
  return out;
}

inline std::vector<double> default_u_grid() { return log_grid(1e-6, 1e6, 64); }

}  // namespace cmo
