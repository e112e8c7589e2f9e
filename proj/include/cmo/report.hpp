#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cmo/verify.hpp"

namespace cmo {

using ojson = nlohmann::ordered_json;

// statement anchors attached to numeric claims so reports are self-describing
inline std::string provenance_anchor(const std::string& claim) {
  if (claim == "holder") return "Lemma 1(i)";
  if (claim == "chi_conjugate_bound") return "Lemma 1(ii)";
  if (claim == "chi_norm") return "Lemma 1(iii)";
  if (claim == "hedberg") return "Hedberg estimate, Lemma 2";
  if (claim == "condition1") return "Theorem 1, condition (1)";
  if (claim == "condition2") return "Theorem 1, condition (2)";
  if (claim == "condition3") return "condition (3), the stronger variant";
  if (claim == "constants") return "Theorem 1, proof constants";
  if (claim == "young_product") return "Young function inverse product";
  if (claim == "nontriviality") return "Proposition 1";
  if (claim == "witness_growth") return "Remark 3";
  if (claim == "embedding") return "Proposition 2";
  if (claim == "boundedness") return "Theorem 1(i)";
  return "";
}

// json cannot carry IEEE infinities; the reports spell them out
inline ojson json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline ojson to_json(const GridSpec& g) {
  ojson j;
  j["lo"] = g.lo;
  j["hi"] = g.hi;
  j["count"] = g.count;
  return j;
}

inline ojson to_json(const BoundaryMargins& b, bool with_r) {
  ojson j;
  j["u_lo"] = json_number(b.u_lo);
  j["u_hi"] = json_number(b.u_hi);
  if (with_r) {
    j["r_lo"] = json_number(b.r_lo);
    j["r_hi"] = json_number(b.r_hi);
  }
  return j;
}

// stable key order: condition_id, params, best_constant, divergence_flag,
// boundary_margins, grid_spec, then the auxiliary flags
inline ojson to_json(const ConditionReport& rep, const ojson& params) {
  ojson j;
  j["condition_id"] = rep.condition_id;
  j["params"] = params;
  j["best_constant"] = json_number(rep.best_constant);
  j["divergence_flag"] = rep.divergence_flag;
  j["boundary_margins"] = to_json(rep.boundary_margins, rep.condition_id != 1);
  ojson grids;
  grids["u"] = to_json(rep.u_grid);
  if (rep.condition_id != 1) grids["r"] = to_json(rep.r_grid);
  j["grid_spec"] = grids;
  j["best_constant_is_lower_bound"] = rep.best_constant_is_lower_bound;
  j["integral_divergent"] = rep.integral_divergent;
  j["jump_function_flag"] = rep.jump_function_flag;
  j["anchor"] = provenance_anchor("condition" + std::to_string(rep.condition_id));
  return j;
}

inline ojson to_json(const ConstantLedger& L) {
  ojson j;
  ojson in;
  in["n"] = L.n;
  in["alpha"] = L.alpha;
  in["lambda"] = L.lambda;
  in["mu"] = L.mu;
  in["C0"] = L.C0;
  in["c0"] = L.c0;
  in["C1"] = L.C1;
  in["C2"] = L.C2;
  j["inputs"] = in;
  ojson out;
  out["CH"] = json_number(L.CH);
  out["C5"] = json_number(L.C5);
  out["C6"] = json_number(L.C6);
  out["C7"] = json_number(L.C7);
  out["C8"] = json_number(L.C8);
  out["C9"] = json_number(L.C9);
  out["C3"] = json_number(L.C3);
  out["c7"] = json_number(L.c7);
  out["c9"] = json_number(L.c9);
  out["c3"] = json_number(L.c3);
  j["outputs"] = out;
  j["anchor"] = provenance_anchor("constants");
  return j;
}

// margin curves as CSV: u, r, lhs, rhs, ratio (r empty for condition 1)
inline std::string margin_curve_csv(const ConditionReport& rep) {
  std::string out = "u,r,lhs,rhs,ratio\n";
  char line[256];
  for (const auto& pt : rep.margin_curve) {
    if (rep.condition_id == 1)
      std::snprintf(line, sizeof line, "%.17g,,%.17g,%.17g,%.17g\n", pt.u,
                    pt.lhs, pt.rhs, pt.ratio);
    else
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.u,
                    pt.r, pt.lhs, pt.rhs, pt.ratio);
    out += line;
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << body;
}

}  // namespace cmo
