#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cmo/geometry.hpp"
#include "cmo/numerics.hpp"

namespace cmo {

// How a test function decomposes for the nonlinear operations (modulars,
// distribution functions).  Linear operations (ball averages, Riesz kernels)
// work for every form.
enum class FunctionForm {
  Zero,             // identically zero
  RadialOrigin,     // radial about the origin
  LaminarSteps,     // piecewise constant on a nested-or-disjoint ball family
  RadialPlusSteps,  // radial part plus steps, supports disjoint
  General,          // anything else; pointwise and linear operations only
};

// Piecewise-radial function about a center plus translated ball indicators:
//
//   f(x) = sum_seg [coef |x-c|^expo + cst] chi_{s0 <= |x-c| < s1}(x)
//        + sum_j coef_j chi_{B_j}(x).
//
// This class covers every witness the theory needs: chi_{B_t}, the translated
// indicators f_R = chi_{B(x_R,1)}, and radial powers.
class TestFunction {
 public:
  struct Segment {
    double s0 = 0.0, s1 = 0.0;  // s1 may be kInf
    double coef = 0.0;          // power-term coefficient
    double expo = 0.0;          // nonzero only for genuine power terms
    double cst = 0.0;           // constant offset (merged origin indicators)

    double value(double s) const {
      return (expo == 0.0 ? coef : coef * std::pow(s, expo)) + cst;
    }
    bool is_constant() const { return expo == 0.0 || coef == 0.0; }
    double const_value() const { return coef + cst; }
  };

  struct Step {
    Ball ball;
    double coef = 0.0;
    int parent = -1;              // laminar forest
    double region_value = 0.0;    // accumulated value on ball minus children
    std::vector<int> children;
  };

  class Builder;

  static TestFunction zero(int n) { return Builder(n).build(); }

  static TestFunction indicator(double t, int n, double coef = 1.0) {
    return Builder(n).piece(0.0, t, coef).build();
  }

  // chi_{B((offset,0,...,0), t)}
  static TestFunction translated_indicator(double offset, double t, int n,
                                           double coef = 1.0) {
    return Builder(n).indicator(Ball::on_axis(offset, t, n), coef).build();
  }

  // coef * |x|^beta on B_t
  static TestFunction radial_power(double coef, double beta, double t, int n) {
    return Builder(n).piece(0.0, t, coef, beta).build();
  }

  static TestFunction constant(double c, int n) {
    return Builder(n).piece(0.0, kInf, c).build();
  }

  int dim() const { return dim_; }
  FunctionForm form() const { return form_; }
  bool singular_at_center() const { return singular_; }
  const Point& center() const { return center_; }
  bool center_is_origin() const { return center_origin_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Step>& steps() const { return steps_; }
  bool is_zero() const { return form_ == FunctionForm::Zero; }

  // support radius about the ORIGIN (kInf when unbounded)
  double support_radius() const { return support_radius_; }

  double value(const Point& x) const {
    double v = 0.0;
    const double s = distance(x, center_, dim_);
    for (const auto& seg : segments_)
      if (s >= seg.s0 && s < seg.s1) v += seg.value(s);
    for (const auto& st : steps_)
      if (distance(x, st.ball.center, dim_) < st.ball.radius) v += st.coef;
    return v;
  }

  // radial profile about the origin; valid when the radial part is origin-centered
  double radial_value(double s) const {
    double v = 0.0;
    for (const auto& seg : segments_)
      if (s >= seg.s0 && s < seg.s1) v += seg.value(s);
    return v;
  }

  // radii (about center_) where the radial profile changes analytic form
  std::vector<double> segment_edges() const {
    std::vector<double> e;
    for (const auto& seg : segments_) {
      e.push_back(seg.s0);
      if (std::isfinite(seg.s1)) e.push_back(seg.s1);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  }

  // distances from x at which ball averages about x change structure
  std::vector<double> breakpoint_distances(const Point& x) const {
    std::vector<double> out;
    auto add_sphere = [&](const Point& c, double rad) {
      const double d = distance(x, c, dim_);
      out.push_back(std::abs(d - rad));
      out.push_back(d + rad);
    };
    for (double e : segment_edges())
      if (e > 0.0) add_sphere(center_, e);
    for (const auto& st : steps_) add_sphere(st.ball.center, st.ball.radius);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    while (!out.empty() && out.front() <= 0.0) out.erase(out.begin());
    return out;
  }

  bool all_nonnegative() const { return all_nonneg_; }

  // Effective per-ball coefficients c_hat with |f_steps| = sum c_hat_j chi_{B_j};
  // valid for laminar step families (telescoping of |region value|).
  std::vector<double> absolute_step_coefficients() const {
    std::vector<double> c(steps_.size());
    for (std::size_t j = 0; j < steps_.size(); ++j) {
      const double parent_val =
          steps_[j].parent >= 0
              ? std::abs(steps_[static_cast<std::size_t>(steps_[j].parent)].region_value)
              : 0.0;
      c[j] = std::abs(steps_[j].region_value) - parent_val;
    }
    return c;
  }

  // Measure of {region of ball j} inside an arbitrary ball B.
  double region_measure_in(std::size_t j, const Ball& b) const {
    double m = intersection_volume(steps_[j].ball, b);
    for (int ch : steps_[j].children)
      m -= intersection_volume(steps_[static_cast<std::size_t>(ch)].ball, b);
    return std::max(0.0, m);
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& seg : segments_) {
      if (!first) os << " + ";
      first = false;
      if (seg.is_constant())
        os << seg.const_value() << "*chi:t=" << seg.s1 << "[from " << seg.s0 << "]";
      else
        os << seg.coef << "*radpow:beta=" << seg.expo << ",t=" << seg.s1;
    }
    for (const auto& st : steps_) {
      if (!first) os << " + ";
      first = false;
      os << st.coef << "*chi:c=" << st.ball.center[0] << ",t=" << st.ball.radius;
    }
    if (first) os << "0";
    return os.str();
  }

  class Builder {
   public:
    explicit Builder(int n, Point center = {0.0, 0.0, 0.0})
        : dim_(n), center_(center) {
      if (n < 1 || n > 3) throw DomainError("TestFunction: dimension must be 1..3");
    }

    Builder& piece(double s0, double s1, double coef, double expo = 0.0) {
      if (!(s0 >= 0.0) || !(s1 > s0))
        throw DomainError("TestFunction: annulus must satisfy 0 <= s0 < s1");
      pieces_.push_back({s0, s1, coef, expo, 0.0});
      return *this;
    }

    Builder& indicator(const Ball& b, double coef) {
      if (b.dim != dim_) throw DomainError("TestFunction: indicator dimension mismatch");
      indicators_.push_back({b, coef, -1, 0.0, {}});
      return *this;
    }

    TestFunction build() const;

   private:
    int dim_;
    Point center_;
    std::vector<Segment> pieces_;
    std::vector<Step> indicators_;
  };

 private:
  explicit TestFunction(int n) : dim_(n) {}

  int dim_;
  Point center_{};
  bool center_origin_ = true;
  std::vector<Segment> segments_;
  std::vector<Step> steps_;
  FunctionForm form_ = FunctionForm::Zero;
  bool singular_ = false;
  bool all_nonneg_ = true;
  double support_radius_ = 0.0;
};

inline TestFunction TestFunction::Builder::build() const {
  TestFunction f(dim_);
  f.center_ = center_;
  f.center_origin_ = distance(center_, {0.0, 0.0, 0.0}, dim_) == 0.0;

  // split user pieces at each other's edges and at origin-ball radii, then
  // merge overlapping constants into per-interval segments
  std::vector<Segment> pieces = pieces_;
  std::vector<Step> steps;
  for (const auto& st : indicators_) {
    const double doff = distance(st.ball.center, center_, dim_);
    if (doff == 0.0)
      pieces.push_back({0.0, st.ball.radius, st.coef, 0.0, 0.0});
    else
      steps.push_back(st);
  }

  std::sort(pieces.begin(), pieces.end(),
            [](const Segment& a, const Segment& b) { return a.s0 < b.s0; });

  std::vector<double> edges;
  for (const auto& p : pieces) {
    edges.push_back(p.s0);
    if (std::isfinite(p.s1)) edges.push_back(p.s1);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  bool unbounded = false;
  for (const auto& p : pieces)
    if (!std::isfinite(p.s1)) unbounded = true;

  for (std::size_t i = 0; i + 1 <= edges.size(); ++i) {
    const double a = edges[i];
    const double b = (i + 1 < edges.size()) ? edges[i + 1] : kInf;
    if (!(b > a)) continue;
    if (i + 1 == edges.size() && !unbounded) break;
    Segment seg{a, b, 0.0, 0.0, 0.0};
    int power_terms = 0;
    for (const auto& p : pieces) {
      if (p.s0 <= a && b <= p.s1 + 1e-300) {
        if (p.expo != 0.0) {
          if (++power_terms > 1)
            throw DomainError("TestFunction: overlapping power annuli");
          seg.coef = p.coef;
          seg.expo = p.expo;
        } else {
          seg.cst += p.coef;
        }
      }
    }
    if (seg.coef != 0.0 || seg.cst != 0.0) f.segments_.push_back(seg);
  }

  // merge adjacent identical constant segments
  for (std::size_t i = 0; i + 1 < f.segments_.size();) {
    auto& cur = f.segments_[i];
    auto& nxt = f.segments_[i + 1];
    if (cur.is_constant() && nxt.is_constant() && cur.s1 == nxt.s0 &&
        cur.const_value() == nxt.const_value()) {
      cur.s1 = nxt.s1;
      cur.cst = cur.const_value();
      cur.coef = 0.0;
      f.segments_.erase(f.segments_.begin() + static_cast<long>(i) + 1);
    } else {
      ++i;
    }
  }

  f.steps_ = steps;

  // laminar forest over the translated balls
  bool laminar = true;
  for (std::size_t i = 0; i < f.steps_.size() && laminar; ++i)
    for (std::size_t j = i + 1; j < f.steps_.size() && laminar; ++j) {
      const auto& bi = f.steps_[i].ball;
      const auto& bj = f.steps_[j].ball;
      const double d = distance(bi.center, bj.center, dim_);
      const bool disjoint = d >= bi.radius + bj.radius - 1e-12;
      const bool nested = d + std::min(bi.radius, bj.radius) <=
                          std::max(bi.radius, bj.radius) + 1e-12;
      if (!disjoint && !nested) laminar = false;
    }
  if (laminar) {
    // parent = smallest strictly containing ball
    for (std::size_t j = 0; j < f.steps_.size(); ++j) {
      int best = -1;
      for (std::size_t i = 0; i < f.steps_.size(); ++i) {
        if (i == j) continue;
        const double d = distance(f.steps_[i].ball.center, f.steps_[j].ball.center, dim_);
        const bool contains = f.steps_[i].ball.radius >= f.steps_[j].ball.radius &&
                              d + f.steps_[j].ball.radius <= f.steps_[i].ball.radius + 1e-12 &&
                              !(f.steps_[i].ball.radius == f.steps_[j].ball.radius && i > j);
        if (contains && (best < 0 ||
                         f.steps_[static_cast<std::size_t>(best)].ball.radius >
                             f.steps_[i].ball.radius))
          best = static_cast<int>(i);
      }
      f.steps_[j].parent = best;
    }
    for (std::size_t j = 0; j < f.steps_.size(); ++j) {
      double v = f.steps_[j].coef;
      for (int p = f.steps_[j].parent; p >= 0;
           p = f.steps_[static_cast<std::size_t>(p)].parent)
        v += f.steps_[static_cast<std::size_t>(p)].coef;
      f.steps_[j].region_value = v;
      if (f.steps_[j].parent >= 0)
        f.steps_[static_cast<std::size_t>(f.steps_[j].parent)].children.push_back(
            static_cast<int>(j));
    }
  }

  // radial support about the function's own center, then about the origin
  double radial_sup = 0.0;
  for (const auto& seg : f.segments_) radial_sup = std::max(radial_sup, seg.s1);
  const double center_off = distance(f.center_, {0.0, 0.0, 0.0}, dim_);
  f.support_radius_ = radial_sup == 0.0 ? 0.0 : radial_sup + center_off;
  for (const auto& st : f.steps_) {
    const double off = distance(st.ball.center, {0.0, 0.0, 0.0}, dim_);
    f.support_radius_ = std::max(f.support_radius_, off + st.ball.radius);
  }

  for (const auto& seg : f.segments_) {
    if (seg.expo < 0.0 && seg.s0 == 0.0) f.singular_ = true;
    if ((seg.expo == 0.0 ? seg.const_value() : std::min(seg.coef, seg.cst)) < 0.0)
      f.all_nonneg_ = false;
  }
  for (const auto& st : f.steps_)
    if (st.region_value < 0.0 || st.coef < 0.0) f.all_nonneg_ = false;

  // classification
  const bool has_radial = !f.segments_.empty();
  const bool has_power = [&] {
    for (const auto& seg : f.segments_)
      if (!seg.is_constant()) return true;
    return false;
  }();
  if (!has_radial && f.steps_.empty()) {
    f.form_ = FunctionForm::Zero;
  } else if (has_radial && f.steps_.empty()) {
    f.form_ = f.center_origin_ ? FunctionForm::RadialOrigin : FunctionForm::General;
  } else if (!has_radial) {
    f.form_ = laminar ? FunctionForm::LaminarSteps : FunctionForm::General;
  } else {
    bool steps_clear_radial = laminar && f.center_origin_;
    for (const auto& st : f.steps_) {
      const double off = distance(st.ball.center, f.center_, dim_);
      if (off < radial_sup + st.ball.radius - 1e-12) steps_clear_radial = false;
    }
    f.form_ = steps_clear_radial ? FunctionForm::RadialPlusSteps : FunctionForm::General;
  }
  // constant-only radial pieces about a non-origin center are just nested
  // indicators; reclassify them as steps so the exact paths apply
  if (f.form_ == FunctionForm::General && has_radial && !f.center_origin_ &&
      !has_power && f.steps_.empty()) {
    Builder rb(dim_);
    for (const auto& seg : f.segments_) {
      if (std::isfinite(seg.s1))
        rb.indicator(Ball(f.center_, seg.s1, dim_), seg.const_value());
      else
        throw DomainError("TestFunction: unbounded pieces need an origin center");
      if (seg.s0 > 0.0)
        rb.indicator(Ball(f.center_, seg.s0, dim_), -seg.const_value());
    }
    return rb.build();
  }
  return f;
}

}  // namespace cmo
