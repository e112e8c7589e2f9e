#pragma once

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "cmo/morrey.hpp"
#include "cmo/numerics.hpp"
#include "cmo/potential.hpp"
#include "cmo/verify.hpp"

namespace cmo {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> notes;

  void tally(bool ok, const char* fmt, ...) {
    ++cases;
    if (ok) return;
    ++failures;
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    notes.emplace_back(buf);
  }
};

namespace suites {

// random nonnegative function from the supported class: radial annuli about
// the origin plus a detached translated indicator
inline TestFunction random_function(Rng& rng, int n, bool allow_power) {
  TestFunction::Builder b(n);
  const double t1 = rng.log_uniform(0.2, 2.0);
  b.piece(0.0, t1, rng.uniform(0.1, 2.0));
  if (rng.uniform() < 0.5) b.piece(t1, t1 + rng.uniform(0.2, 1.5), rng.uniform(0.1, 1.5));
  if (allow_power && rng.uniform() < 0.4)
    b.piece(2.2, 3.0, rng.uniform(0.1, 1.0), rng.uniform(-0.4, 1.0));
  if (rng.uniform() < 0.5)
    b.indicator(Ball::on_axis(rng.uniform(3.5, 6.0), rng.uniform(0.2, 1.2), n),
                rng.uniform(0.1, 2.0));
  return b.build();
}

// Indicator-norm oracle agreement: numeric Luxemburg and central norms
// against the closed forms, on random (p, lambda, t, r, n) tuples.
inline SuiteResult run_lemma1(std::uint64_t seed, int cases = 100) {
  SuiteResult res;
  res.name = "lemma1";
  Rng rng(seed ^ 0x11aa55ULL);
  for (int it = 0; it < cases; ++it) {
    const double p = rng.uniform(1.1, 4.0);
    const double lambda = rng.uniform(0.0, 0.9);
    const double t = rng.log_uniform(0.1, 10.0);
    const double r = rng.log_uniform(0.1, 10.0);
    const int n = rng.uniform_int(1, 2);
    const MorreyParams prm{OrliczSpec::power(p), lambda, n};
    const auto chi = TestFunction::indicator(t, n);
    const double numeric = luxemburg_norm(chi, prm, Ball::origin(r, n));
    const double closed = chi_norm_closed(prm, t, r);
    const double err_ball = std::abs(numeric - closed) / closed;
    const double numeric_central = central_norm(chi, prm).value;
    const double closed_central = chi_central_norm_closed(prm, t);
    const double err_central =
        std::abs(numeric_central - closed_central) / closed_central;
    res.tally(err_ball <= 1e-6 && err_central <= 1e-5,
              "case %d: p=%.6g lambda=%.6g t=%.6g r=%.6g n=%d errs %.3g %.3g",
              it, p, lambda, t, r, n, err_ball, err_central);
  }
  return res;
}

// Young product band Phi^{-1}(u) Phi*^{-1}(u) / u in [1, 2] across the
// families, with the exact value 2 for the quadratic.
inline SuiteResult run_young(std::uint64_t seed) {
  SuiteResult res;
  res.name = "young";
  (void)seed;  // entirely deterministic
  const auto grid = default_u_grid();
  struct Family {
    const char* label;
    OrliczSpec spec;
  };
  const Family fams[] = {
      {"power:p=1", OrliczSpec::power(1.0)},
      {"power:p=1.5", OrliczSpec::power(1.5)},
      {"power:p=2", OrliczSpec::power(2.0)},
      {"power:p=3", OrliczSpec::power(3.0)},
      {"maxpow", OrliczSpec::max_power(4.0 / 3.0, 8.0 / 5.0)},
      {"pwlog-upper", OrliczSpec::inverse_power_log(2.0, 0.0, 2.0, 0.1)},
      {"pwlog-two-sided",
       OrliczSpec::inverse_power_log(4.0 / 3.0, 0.04, 8.0 / 5.0, 0.5, 3.0)},
  };
  for (const auto& fam : fams) {
    const auto range = young_product_check(fam.spec, grid);
    res.tally(range.min_ratio >= 1.0 - 1e-4 && range.max_ratio <= 2.0 + 1e-4,
              "%s: ratio range [%.8g, %.8g] outside [1,2]", fam.label,
              range.min_ratio, range.max_ratio);
  }
  const auto p2 = young_product_check(OrliczSpec::power(2.0), grid);
  res.tally(std::abs(p2.min_ratio - 2.0) <= 1e-6 &&
                std::abs(p2.max_ratio - 2.0) <= 1e-6,
            "power:p=2 should attain 2 exactly, got [%.12g, %.12g]",
            p2.min_ratio, p2.max_ratio);
  return res;
}

// Pointwise kernel bound: truncated Riesz integral against C_H r^alpha Mf(x),
// randomized, plus the pinned unit-interval case.
inline SuiteResult run_hedberg(std::uint64_t seed, int cases = 200) {
  SuiteResult res;
  res.name = "hedberg";
  Rng rng(seed ^ 0x22bb66ULL);
  for (int it = 0; it < cases; ++it) {
    const int n = rng.uniform_int(1, 2);
    const double alpha = rng.uniform(0.05, n - 0.05);
    const auto f = random_function(rng, n, n == 1);
    Point x{rng.uniform(-5.0, 5.0), 0.0, 0.0};
    if (n == 2) x[1] = rng.uniform(-5.0, 5.0);
    const double r = rng.log_uniform(0.1, 10.0);
    const auto hg = hedberg_gap(f, x, r, OperatorParams{alpha, n});
    res.tally(hg.lhs <= hg.rhs * (1.0 + 1e-6) + 1e-12,
              "case %d: n=%d alpha=%.6g r=%.6g lhs=%.9g rhs=%.9g", it, n, alpha,
              r, hg.lhs, hg.rhs);
  }
  const auto pinned =
      hedberg_gap(TestFunction::indicator(1.0, 1), {0.0, 0.0, 0.0}, 1.0,
                  OperatorParams{0.5, 1});
  res.tally(std::abs(pinned.lhs - 4.0) <= 1e-6,
            "pinned lhs should be 4, got %.12g", pinned.lhs);
  res.tally(std::abs(pinned.rhs - 4.0 / (std::sqrt(2.0) - 1.0)) <= 1e-4,
            "pinned rhs should be 9.65685..., got %.12g", pinned.rhs);
  return res;
}

// Embedding criterion round trip: the exponent-matched pair, the identity,
// and a reversed pair that must fail.
inline SuiteResult run_embedding(std::uint64_t seed) {
  SuiteResult res;
  res.name = "embedding";
  (void)seed;
  std::vector<TestFunction> chis;
  for (double t : {0.5, 1.0, 2.0}) chis.push_back(TestFunction::indicator(t, 1));
  const auto matched = embedding_check(OrliczSpec::power(2.0), OrliczSpec::power(4.0),
                                       0.5, 0.0, 1, {}, {}, chis);
  res.tally(matched.holds && std::abs(matched.A1 - 1.0) <= 1e-3 &&
                std::abs(matched.A2 - 1.0) <= 1e-3,
            "matched pair: holds=%d A1=%.6g A2=%.6g", matched.holds, matched.A1,
            matched.A2);
  res.tally(matched.measured_constant <=
                2.0 * std::max(matched.A1, matched.A2) * (1.0 + 1e-6),
            "matched pair: measured %.6g above 2 max(A1,A2)",
            matched.measured_constant);
  const auto ident = embedding_check(OrliczSpec::power(3.0), OrliczSpec::power(3.0),
                                     0.4, 0.4, 1, {}, {}, chis);
  res.tally(ident.holds && std::abs(ident.A1 - 1.0) <= 1e-3,
            "identity embedding: holds=%d A1=%.6g", ident.holds, ident.A1);
  const auto reversed = embedding_check(OrliczSpec::power(4.0), OrliczSpec::power(2.0),
                                        0.5, 0.0, 1, {}, {}, chis);
  res.tally(!reversed.holds, "reversed pair unexpectedly holds");
  return res;
}

// Nontriviality dichotomy and the witness growth certificate.
inline SuiteResult run_witness(std::uint64_t seed) {
  SuiteResult res;
  res.name = "witness";
  (void)seed;
  const auto trivial = nontriviality_check(OrliczSpec::power(2.0), -0.5, 1, {2.0});
  res.tally(!trivial.nontrivial, "lambda = -0.5 should collapse the space");
  const auto flat = nontriviality_check(OrliczSpec::power(2.0), 0.0, 1, {3.0});
  res.tally(std::abs(flat.witnesses.front().norm - std::sqrt(2.0)) <= 1e-6,
            "lambda = 0 witness norm should be sqrt(2), got %.9g",
            flat.witnesses.front().norm);
  const auto grow = nontriviality_check(OrliczSpec::power(2.0), 0.5, 1,
                                        {2.0, 4.0, 8.0, 16.0}, 0.5,
                                        OrliczSpec::power(2.0));
  bool increasing = grow.ratio_sequence.size() == 4;
  for (std::size_t i = 0; i + 1 < grow.ratio_sequence.size(); ++i)
    increasing = increasing && grow.ratio_sequence[i] < grow.ratio_sequence[i + 1];
  res.tally(increasing, "growth certificate is not strictly increasing");
  for (const auto& w : grow.witnesses)
    res.tally(w.norm <= w.upper_bound * (1.0 + 1e-9),
              "witness norm %.9g above its closed-form bound %.9g at R=%.3g",
              w.norm, w.upper_bound, w.R);
  return res;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {run_lemma1(seed), run_young(seed), run_hedberg(seed),
          run_embedding(seed), run_witness(seed)};
}

inline std::vector<std::string> suite_names() {
  return {"lemma1", "young", "hedberg", "embedding", "witness", "all"};
}

}  // namespace suites
}  // namespace cmo
