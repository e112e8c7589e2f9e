// Command-line front end: parses the function grammars, dispatches the
// library operations and emits deterministic JSON/CSV reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmo/cmo.hpp"

namespace {

using cmo::ojson;

struct OutputSink {
  std::string path;    // empty: stdout
  std::string format = "json";

  void emit(const ojson& report) const {
    const std::string body = report.dump(2) + "\n";
    if (path.empty())
      std::fputs(body.c_str(), stdout);
    else
      cmo::write_text_file(path, body);
  }

  void emit_text(const std::string& body) const {
    if (path.empty())
      std::fputs(body.c_str(), stdout);
    else
      cmo::write_text_file(path, body);
  }
};

int run_constants(int n, double alpha, double lambda, double mu, double C0,
                  double c0, double C1, double C2, const OutputSink& sink) {
  const auto L = cmo::constant_ledger(n, alpha, lambda, mu, C0, c0, C1, C2);
  ojson rep;
  rep["command"] = "constants";
  rep["ledger"] = cmo::to_json(L);
  sink.emit(rep);
  return 0;
}

struct CheckArgs {
  int n = 1;
  double alpha = 0.5;
  double lambda = 0.0;
  std::optional<double> mu;
  std::string phi_spec, psi_spec;
  int example = 0;
  double p = 2.0, a = 0.0, p1 = 0.0, p2 = 0.0, b = 0.0;
  cmo::GridSpec grid;
  bool strict = false;
};

int run_check(const CheckArgs& args, const OutputSink& sink) {
  cmo::OrliczSpec phi = cmo::OrliczSpec::power(2.0);
  cmo::OrliczSpec psi = cmo::OrliczSpec::power(2.0);
  double lambda = args.lambda, mu = 0.0;
  ojson params;
  params["n"] = args.n;
  params["alpha"] = args.alpha;
  if (args.example != 0) {
    cmo::PresetParams pp;
    pp.n = args.n;
    pp.alpha = args.alpha;
    pp.lambda = args.lambda;
    pp.p = args.p;
    pp.a = args.a;
    pp.p1 = args.p1;
    pp.p2 = args.p2;
    pp.b = args.b;
    const auto preset = cmo::example_preset(args.example, pp);
    phi = preset.phi;
    psi = preset.psi;
    lambda = preset.lambda;
    mu = preset.mu;
    params["example"] = args.example;
    ojson derived;
    for (const auto& [k, v] : preset.derived) derived[k] = v;
    params["derived"] = derived;
  } else {
    if (args.phi_spec.empty() || args.psi_spec.empty() || !args.mu)
      throw cmo::GrammarError("check: need --example or (--phi, --psi, --mu)");
    phi = cmo::parse_orlicz_spec(args.phi_spec);
    psi = cmo::parse_orlicz_spec(args.psi_spec);
    mu = *args.mu;
  }
  params["phi"] = phi.describe();
  params["psi"] = psi.describe();
  params["lambda"] = lambda;
  params["mu"] = mu;

  const auto r1 = cmo::check_condition_1(phi, psi, args.alpha, args.n, lambda,
                                         mu, args.grid);
  const auto r2 = cmo::check_condition_2(phi, psi, args.alpha, args.n, lambda,
                                         mu, args.grid, args.grid);
  const auto r3 = cmo::check_condition_3(phi, psi, args.alpha, args.n, lambda,
                                         mu, args.grid, args.grid);
  if (sink.format == "csv") {
    std::string body;
    for (const auto* rep : {&r1, &r2, &r3}) {
      body += "# condition " + std::to_string(rep->condition_id) + "\n";
      body += cmo::margin_curve_csv(*rep);
      body += "\n";
    }
    sink.emit_text(body);
  } else {
    ojson rep;
    rep["command"] = "check";
    rep["params"] = params;
    rep["conditions"] =
        ojson::array({cmo::to_json(r1, params), cmo::to_json(r2, params),
                      cmo::to_json(r3, params)});
    sink.emit(rep);
  }
  const bool any_divergent =
      r1.divergence_flag || r2.divergence_flag || r3.divergence_flag;
  return args.strict && any_divergent ? 3 : 0;
}

int run_norm(const std::string& f_spec, const std::string& phi_spec,
             double lambda, int n, std::optional<double> radius, bool weak,
             const OutputSink& sink) {
  const auto f = cmo::parse_test_function(f_spec, n);
  const cmo::MorreyParams prm{cmo::parse_orlicz_spec(phi_spec), lambda, n};
  ojson rep;
  rep["command"] = "norm";
  rep["f"] = f.describe();
  rep["phi"] = prm.phi.describe();
  rep["lambda"] = lambda;
  rep["n"] = n;
  rep["weak"] = weak;
  rep["anchor"] = cmo::provenance_anchor("chi_norm");
  double value;
  if (radius) {
    const auto ball = cmo::Ball::origin(*radius, n);
    value = weak ? cmo::weak_norm(f, prm, ball) : cmo::luxemburg_norm(f, prm, ball);
    rep["radius"] = *radius;
  } else if (weak) {
    const auto res = cmo::weak_central_norm(f, prm);
    value = res.value;
    rep["argmax_radius"] = res.argmax_radius;
    rep["jump_function_flag"] = res.jump_function;
  } else {
    const auto res = cmo::central_norm(f, prm);
    value = res.value;
    rep["argmax_radius"] = res.argmax_radius;
  }
  rep["value"] = cmo::json_number(value);
  std::printf("%.6g\n", value);
  if (!sink.path.empty()) sink.emit(rep);
  return 0;
}

int run_riesz(const std::string& f_spec, double x, double alpha, int n,
              std::optional<double> truncate, const OutputSink& sink) {
  const auto f = cmo::parse_test_function(f_spec, n);
  const cmo::OperatorParams prm{alpha, n};
  const cmo::Point pt{x, 0.0, 0.0};
  const double value = truncate
                           ? cmo::riesz_truncated_abs(f, pt, *truncate, prm)
                           : cmo::riesz_potential(f, pt, prm);
  ojson rep;
  rep["command"] = "riesz";
  rep["f"] = f.describe();
  rep["x"] = x;
  rep["alpha"] = alpha;
  rep["n"] = n;
  if (truncate) rep["truncate"] = *truncate;
  rep["value"] = cmo::json_number(value);
  std::printf("%.9g\n", value);
  if (!sink.path.empty()) sink.emit(rep);
  return 0;
}

int run_maximal(const std::string& f_spec, double x, int n,
                const OutputSink& sink) {
  const auto f = cmo::parse_test_function(f_spec, n);
  const double value = cmo::maximal_function(f, {x, 0.0, 0.0}, n);
  ojson rep;
  rep["command"] = "maximal";
  rep["f"] = f.describe();
  rep["x"] = x;
  rep["n"] = n;
  rep["value"] = cmo::json_number(value);
  std::printf("%.9g\n", value);
  if (!sink.path.empty()) sink.emit(rep);
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed,
               const OutputSink& sink) {
  std::vector<cmo::SuiteResult> results;
  if (suite == "all") {
    results = cmo::suites::run_all(seed);
  } else if (suite == "lemma1") {
    results.push_back(cmo::suites::run_lemma1(seed));
  } else if (suite == "young") {
    results.push_back(cmo::suites::run_young(seed));
  } else if (suite == "hedberg") {
    results.push_back(cmo::suites::run_hedberg(seed));
  } else if (suite == "embedding") {
    results.push_back(cmo::suites::run_embedding(seed));
  } else if (suite == "witness") {
    results.push_back(cmo::suites::run_witness(seed));
  } else {
    throw cmo::GrammarError("verify: unknown suite '" + suite + "'");
  }
  ojson rep;
  rep["command"] = "verify";
  rep["suite"] = suite;
  rep["seed"] = seed;
  int total_cases = 0, total_failures = 0;
  ojson list = ojson::array();
  for (const auto& r : results) {
    ojson jr;
    jr["name"] = r.name;
    jr["cases"] = r.cases;
    jr["failures"] = r.failures;
    jr["notes"] = r.notes;
    list.push_back(jr);
    total_cases += r.cases;
    total_failures += r.failures;
  }
  rep["suites"] = list;
  rep["total_cases"] = total_cases;
  rep["total_failures"] = total_failures;
  sink.emit(rep);
  for (const auto& r : results)
    std::fprintf(stderr, "suite %-10s %4d cases, %d failures\n", r.name.c_str(),
                 r.cases, r.failures);
  return total_failures == 0 ? 0 : 1;
}

int run_embed(const std::string& phi_spec, const std::string& psi_spec,
              double lambda, double mu, int n, bool strict,
              const OutputSink& sink) {
  const auto phi = cmo::parse_orlicz_spec(phi_spec);
  const auto psi = cmo::parse_orlicz_spec(psi_spec);
  std::vector<cmo::TestFunction> chis;
  for (double t : {0.5, 1.0, 2.0}) chis.push_back(cmo::TestFunction::indicator(t, n));
  const auto res = cmo::embedding_check(phi, psi, lambda, mu, n, {}, {}, chis);
  ojson rep;
  rep["command"] = "embed";
  rep["phi"] = phi.describe();
  rep["psi"] = psi.describe();
  rep["lambda"] = lambda;
  rep["mu"] = mu;
  rep["n"] = n;
  rep["holds"] = res.holds;
  rep["A1"] = cmo::json_number(res.A1);
  rep["A2"] = cmo::json_number(res.A2);
  rep["embedding_constant"] = cmo::json_number(2.0 * std::max(res.A1, res.A2));
  rep["measured_constant"] = cmo::json_number(res.measured_constant);
  rep["a1_diverged"] = res.a1_diverged;
  rep["a2_diverged"] = res.a2_diverged;
  rep["anchor"] = cmo::provenance_anchor("embedding");
  sink.emit(rep);
  return strict && !res.holds ? 3 : 0;
}

int run_witness_cmd(const std::string& phi_spec, double lambda, int n,
                    const std::vector<double>& Rs, std::optional<double> alpha,
                    const std::string& psi_spec, const OutputSink& sink) {
  const auto phi = cmo::parse_orlicz_spec(phi_spec);
  std::optional<cmo::OrliczSpec> psi;
  if (!psi_spec.empty()) psi = cmo::parse_orlicz_spec(psi_spec);
  const auto res = cmo::nontriviality_check(phi, lambda, n, Rs, alpha, psi);
  ojson rep;
  rep["command"] = "witness";
  rep["phi"] = phi.describe();
  rep["lambda"] = lambda;
  rep["n"] = n;
  rep["nontrivial"] = res.nontrivial;
  ojson ws = ojson::array();
  for (const auto& w : res.witnesses) {
    ojson jw;
    jw["R"] = w.R;
    jw["norm"] = cmo::json_number(w.norm);
    jw["upper_bound"] = cmo::json_number(w.upper_bound);
    ws.push_back(jw);
  }
  rep["witnesses"] = ws;
  ojson ratios = ojson::array();
  for (double v : res.ratio_sequence) ratios.push_back(cmo::json_number(v));
  rep["ratio_sequence"] = ratios;
  rep["anchor"] = cmo::provenance_anchor(res.ratio_sequence.empty()
                                             ? "nontriviality"
                                             : "witness_growth");
  sink.emit(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"central Morrey-Orlicz verification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  OutputSink sink;
  std::uint64_t seed = 42;
  bool strict = false;
  app.add_option("--out", sink.path, "report output path (default: stdout)");
  app.add_option("--format", sink.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "RNG seed for randomized suites")
      ->capture_default_str();
  app.add_flag("--strict", strict, "exit 3 when a divergence flag is raised");

  auto* c = app.add_subcommand("constants", "evaluate the proof constant ledger");
  int cn = 1;
  double calpha = 0.5, clambda = 0.0, cmu = 0.0, C0 = 1.0, c0w = 1.0, C1 = 1.0,
         C2 = 1.0;
  c->add_option("--n", cn)->required();
  c->add_option("--alpha", calpha)->required();
  c->add_option("--lambda", clambda)->required();
  c->add_option("--mu", cmu)->required();
  c->add_option("--c0", C0, "strong maximal-operator bound");
  c->add_option("--c0-weak", c0w, "weak maximal-operator bound");
  c->add_option("--c1", C1);
  c->add_option("--c2", C2);

  auto* k = app.add_subcommand("check", "scan the boundedness conditions (1)-(3)");
  CheckArgs ka;
  k->add_option("--n", ka.n)->required();
  k->add_option("--alpha", ka.alpha)->required();
  k->add_option("--lambda", ka.lambda)->required();
  k->add_option("--mu", [&ka](const std::vector<std::string>& v) {
    ka.mu = std::stod(v.front());
    return true;
  }, "target exponent (direct --phi/--psi mode)");
  k->add_option("--phi", ka.phi_spec);
  k->add_option("--psi", ka.psi_spec);
  k->add_option("--example", ka.example)->check(CLI::IsMember({1, 2, 3}));
  k->add_option("--p", ka.p);
  k->add_option("--a", ka.a);
  k->add_option("--p1", ka.p1);
  k->add_option("--p2", ka.p2);
  k->add_option("--b", ka.b);
  k->add_option("--grid-lo", ka.grid.lo)->capture_default_str();
  k->add_option("--grid-hi", ka.grid.hi)->capture_default_str();
  k->add_option("--grid-count", ka.grid.count)->capture_default_str();

  auto* nm = app.add_subcommand("norm", "central Morrey-Orlicz norm of a test function");
  std::string nf, nphi;
  double nlambda = 0.0;
  int nn = 1;
  bool nweak = false;
  std::optional<double> nradius;
  nm->add_option("--f", nf)->required();
  nm->add_option("--phi", nphi)->required();
  nm->add_option("--lambda", nlambda)->required();
  nm->add_option("--n", nn)->required();
  nm->add_flag("--weak", nweak, "weak norm instead of the strong one");
  nm->add_option("--radius", [&nradius](const std::vector<std::string>& v) {
    nradius = std::stod(v.front());
    return true;
  }, "single-ball norm at this radius instead of the central supremum");

  auto* rz = app.add_subcommand("riesz", "riesz potential at a point");
  std::string rf;
  double rx = 0.0, ralpha = 0.5;
  int rn = 1;
  std::optional<double> rtrunc;
  rz->add_option("--f", rf)->required();
  rz->add_option("--x", rx)->required();
  rz->add_option("--alpha", ralpha)->required();
  rz->add_option("--n", rn)->required();
  rz->add_option("--truncate", [&rtrunc](const std::vector<std::string>& v) {
    rtrunc = std::stod(v.front());
    return true;
  }, "truncate the kernel integral to |y-x| <= R (uses |f|)");

  auto* mx = app.add_subcommand("maximal", "centred maximal function at a point");
  std::string mf;
  double mxx = 0.0;
  int mn = 1;
  mx->add_option("--f", mf)->required();
  mx->add_option("--x", mxx)->required();
  mx->add_option("--n", mn)->required();

  auto* vf = app.add_subcommand("verify", "run the property suites");
  std::string suite = "all";
  vf->add_option("--suite", suite)->check(CLI::IsMember(cmo::suites::suite_names()));

  auto* em = app.add_subcommand("embed", "check the embedding criterion");
  std::string ephi, epsi;
  double elambda = 0.0, emu = 0.0;
  int en = 1;
  em->add_option("--phi", ephi)->required();
  em->add_option("--psi", epsi)->required();
  em->add_option("--lambda", elambda)->required();
  em->add_option("--mu", emu)->required();
  em->add_option("--n", en)->required();

  auto* wt = app.add_subcommand("witness", "nontriviality witnesses and growth");
  std::string wphi, wpsi;
  double wlambda = 0.0;
  int wn = 1;
  std::vector<double> wR;
  std::optional<double> walpha;
  wt->add_option("--phi", wphi)->required();
  wt->add_option("--lambda", wlambda)->required();
  wt->add_option("--n", wn)->required();
  wt->add_option("--R", wR, "witness offsets, e.g. --R 2 4 8")->required();
  wt->add_option("--alpha", [&walpha](const std::vector<std::string>& v) {
    walpha = std::stod(v.front());
    return true;
  });
  wt->add_option("--psi", wpsi);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (*c) return run_constants(cn, calpha, clambda, cmu, C0, c0w, C1, C2, sink);
    if (*k) {
      ka.strict = strict;
      return run_check(ka, sink);
    }
    if (*nm) return run_norm(nf, nphi, nlambda, nn, nradius, nweak, sink);
    if (*rz) return run_riesz(rf, rx, ralpha, rn, rtrunc, sink);
    if (*mx) return run_maximal(mf, mxx, mn, sink);
    if (*vf) return run_verify(suite, seed, sink);
    if (*em) return run_embed(ephi, epsi, elambda, emu, en, strict, sink);
    if (*wt) return run_witness_cmd(wphi, wlambda, wn, wR, walpha, wpsi, sink);
  } catch (const cmo::GrammarError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const cmo::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const cmo::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
