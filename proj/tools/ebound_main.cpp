// ebound: error-bound moduli, subdifferential slopes, stability radii,
// destabilizing perturbation synthesis, perturbation-family membership, and
// Monte-Carlo cross-checks for max-affine inequality systems.
//
// Commands: analyze, radius, attack, verify, tau, member.
// Machine-readable JSON report on stdout, diagnostics on stderr.
// Exit codes: 0 ok, 2 parse error, 3 domain/unsupported, 4 computational.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ebound/ebound.hpp"
#include "ebound/io.hpp"

namespace {

using namespace ebound;

int thread_cap_from_env() {
  const char* env = std::getenv("EBOUND_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 1;
}

Vec parse_point(const std::string& text) {
  Vec out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    while (used < tok.size() &&
           std::isspace(static_cast<unsigned char>(tok[used])))
      ++used;
    if (used != tok.size())
      throw std::invalid_argument("bad coordinate: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty point");
  return out;
}

// '@name' selects a built-in fixture, anything else is a file path.
FunctionSpec load_spec(const std::string& path) {
  if (!path.empty() && path[0] == '@') {
    const Fixture* fx = find_fixture(path.substr(1));
    if (!fx) throw std::invalid_argument("unknown builtin fixture: " + path);
    return {fx->name, fx->f};
  }
  return load_function_spec(path);
}

Json input_echo(const FunctionSpec& spec, const std::string& path) {
  Json j;
  j["path"] = path;
  j["name"] = spec.name;
  j["dim"] = spec.f.dim();
  j["pieces"] = spec.f.piece_count();
  j["spec"] = function_spec_to_json(spec.f, spec.name);
  return j;
}

Json slopes_json(const SlopeReport& r) {
  Json j;
  j["er_global"] = report_num(r.er_global);
  j["outer_global"] = report_num(r.outer_global);
  j["boundary_global"] = report_num(r.boundary_global);
  if (r.er_local) j["er_local"] = report_num(*r.er_local);
  if (r.strict_outer_local)
    j["strict_outer_local"] = report_num(*r.strict_outer_local);
  if (r.boundary_local) j["boundary_local"] = report_num(*r.boundary_local);
  return j;
}

struct Check {
  std::string name;
  double exact;
  double got;
  double error;
  double tolerance;
  bool relative;
  bool pass;
};

Check relative_check(const std::string& name, double exact, double got,
                     double tol = 0.05) {
  Check c{name, exact, got, 0.0, tol, true, false};
  if (exact == kInf || got == kInf) {
    c.pass = exact == got;
    c.error = c.pass ? 0.0 : kInf;
  } else {
    c.error = std::fabs(got - exact) / std::max(exact, 1.0);
    c.pass = c.error <= tol;
  }
  return c;
}

Check absolute_check(const std::string& name, double exact, double got,
                     double tol) {
  Check c{name, exact, got, 0.0, tol, false, false};
  if (exact == kInf || got == kInf) {
    c.pass = exact == got;
    c.error = c.pass ? 0.0 : kInf;
  } else {
    c.error = std::fabs(got - exact);
    c.pass = c.error <= tol;
  }
  return c;
}

Json checks_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  int failed = 0;
  for (const Check& c : checks) {
    arr.push_back({{"name", c.name},
                   {"expected", report_num(c.exact)},
                   {"got", report_num(c.got)},
                   {"error", report_num(c.error)},
                   {"tolerance", c.tolerance},
                   {"kind", c.relative ? "relative" : "absolute"},
                   {"pass", c.pass}});
    if (!c.pass) ++failed;
    std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
              << "  expected=" << c.exact << " got=" << c.got << "\n";
  }
  Json j;
  j["checks"] = std::move(arr);
  j["failed"] = failed;
  j["all_pass"] = failed == 0;
  return j;
}

std::string point_label(const Vec& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << round_sig(v[i], 6);
  return os.str();
}

// exact-vs-estimator comparisons for one function
void oracle_checks(const PolyhedralFunction& f, const McConfig& mc, int grid,
                   const Options& opts, const std::string& prefix,
                   std::vector<Check>& out) {
  if (feasible_point(sublevel_polyhedron(f), opts)) {
    out.push_back(relative_check(prefix + "er_global",
                                 global_outer_slope(f, opts),
                                 estimate_er_global(f, mc, opts)));
  }
  for (const PatternWitness& w :
       occurring_patterns(f, Region::kZeroLevel, opts)) {
    const std::string at = "@" + point_label(w.point);
    out.push_back(
        relative_check(prefix + "er_local" + at,
                       local_error_bound_modulus(f, w.point, opts),
                       estimate_er_local(f, w.point, mc, opts)));
    const Polytope sd = subdifferential(f, w.point, opts);
    out.push_back(absolute_check(prefix + "min_norm" + at,
                                 min_norm_point(sd, opts).dist,
                                 brute_min_norm(sd, grid), 1e-2));
  }
}

// frozen expected values for the built-in corpus
void corpus_expected_checks(const Fixture& fx, const Options& opts,
                            std::vector<Check>& out) {
  const PolyhedralFunction& f = fx.f;
  const std::string p = fx.name + ".";
  const double exact_tol = 1e-9;
  auto expect = [&](const std::string& name, double expected, double got) {
    out.push_back(absolute_check(p + name, expected, got, exact_tol));
  };

  if (fx.name == "e13") {
    expect("boundary_global", 1.0, global_boundary_slope(f, opts));
    expect("outer_global", 2.0, global_outer_slope(f, opts));
    expect("er_local@1", 2.0, local_error_bound_modulus(f, {1.0}, opts));
    expect("boundary_local@1", 1.0, boundary_slope_local(f, {1.0}, opts));
    expect("boundary_local@2.5", 2.0, boundary_slope_local(f, {2.5}, opts));
    expect("tau(1,0.3,0.5)", 1.0, tau(f, {{1.0}, 0.3, 0.5}, opts));
    expect("tau(1,0,0.9)", 1.0, tau(f, {{1.0}, 0.0, 0.9}, opts));
    expect("tau(1,0.9,0)", 1.0, tau(f, {{1.0}, 0.9, 0.0}, opts));
    expect("tau(1,0.5,0.5)", 0.0, tau(f, {{1.0}, 0.5, 0.5}, opts));
    expect("tau(1,1,0)", 0.0, tau(f, {{1.0}, 1.0, 0.0}, opts));
    expect("tau(1,0,1)", 0.0, tau(f, {{1.0}, 0.0, 1.0}, opts));
    const auto zw = occurring_patterns(f, Region::kZeroLevel, opts);
    expect("zero_patterns", 2.0, static_cast<double>(zw.size()));
    double at_kink = kInf, at_flank = kInf;
    for (const PatternWitness& w : zw) {
      if (w.pattern == ActiveSet{0, 1}) at_kink = w.point[0];
      if (w.pattern == ActiveSet{2}) at_flank = w.point[0];
    }
    out.push_back(absolute_check(p + "zero_witness_kink", 1.0, at_kink, 1e-6));
    out.push_back(
        absolute_check(p + "zero_witness_flank", 2.5, at_flank, 1e-6));
  } else if (fx.name == "zero") {
    expect("boundary_local@0", 0.0, boundary_slope_local(f, {0.0}, opts));
    expect("er_local@0", kInf, local_error_bound_modulus(f, {0.0}, opts));
    expect("boundary_global", 0.0, global_boundary_slope(f, opts));
    expect("outer_global", kInf, global_outer_slope(f, opts));
    expect("tau(0,0.3,0.2)", 0.0, tau(f, {{0.0}, 0.3, 0.2}, opts));
  } else if (fx.name == "max0x") {
    expect("er_local@0", 1.0, local_error_bound_modulus(f, {0.0}, opts));
    expect("boundary_local@0", 0.0, boundary_slope_local(f, {0.0}, opts));
    const Polytope sd = subdifferential(f, {0.0}, opts);
    expect("subdiff_lo", 0.0, distance_to_polytope(sd, {0.0}, opts));
    expect("subdiff_hi", 0.0, distance_to_polytope(sd, {1.0}, opts));
    expect("subdiff_mid_out", 0.5, distance_to_polytope(sd, {1.5}, opts));
  } else if (fx.name == "max_x_neg1") {
    expect("boundary_global", 1.0, global_boundary_slope(f, opts));
    expect("outer_global", 1.0, global_outer_slope(f, opts));
    expect("tau(0,0,0.5)", 1.0, tau(f, {{0.0}, 0.0, 0.5}, opts));
    expect("tau(0,0,1)", 0.0, tau(f, {{0.0}, 0.0, 1.0}, opts));
    expect("tau(0,0.1,0)", 0.0, tau(f, {{0.0}, 0.1, 0.0}, opts));
    expect("rigid@0.5", 1.0, rigidity_check(f, 0.5, opts).rigid ? 1.0 : 0.0);
    expect("strong_const@0.5", 1.0,
           is_global_member(f, constant_shift(1, 0.5), 0.5,
                            GlobalFamily::kStrong, opts)
                       .member == Membership::kYes
               ? 1.0
               : 0.0);
    expect("strong_slope_rejected@0.9", 0.0,
           is_global_member(f, LinearPerturbation{{0.0}, {0.5}}, 0.9,
                            GlobalFamily::kStrong, opts)
                       .member == Membership::kYes
               ? 1.0
               : 0.0);
    expect("weak_linear_slope@0.5", 1.0,
           is_global_member(f, LinearPerturbation{{0.0}, {0.5}}, 0.5,
                            GlobalFamily::kWeakLinear, opts)
                       .member == Membership::kYes
               ? 1.0
               : 0.0);
  } else if (fx.name == "ex43_trunc4") {
    // truncation-independent values only: the localized-slope table of the
    // full staircase needs all of its pieces
    expect("boundary_global", 1.0, global_boundary_slope(f, opts));
    expect("outer_global", 2.0, global_outer_slope(f, opts));
    expect("er_local@0", 2.0, local_error_bound_modulus(f, {0.0}, opts));
    expect("boundary_local@0", 1.0, boundary_slope_local(f, {0.0}, opts));
  }
}

struct Args {
  std::string command;
  std::string spec_path;
  std::string pfile;
  std::string at;
  std::string anchor;
  std::string slope;
  std::string family = "strong";
  double eps = 0.0;
  double xi = 0.0;
  bool has_xi = false;
  double delta = 0.0;
  double constant = 0.0;
  bool has_constant = false;
  bool corpus = false;
  long samples = 100000;
  std::uint64_t seed = 1;
  double mc_radius = 1.0;
  int levels = 12;
  int grid = 64;
  Options opts;
};

Json run_analyze(const Args& a) {
  FunctionSpec spec = load_spec(a.spec_path);
  std::optional<Vec> at;
  if (!a.at.empty()) {
    at = parse_point(a.at);
    require_dim(*at, spec.f.dim(), "--at");
  }
  SlopeReport r = full_report(spec.f, at, a.opts);
  Json j;
  j["input"] = input_echo(spec, a.spec_path);
  j["slopes"] = slopes_json(r);
  if (r.anchor) j["anchor"] = report_vec(*r.anchor);
  j["has_global_error_bound"] = r.outer_global > 0.0;
  std::cerr << "outer_global=" << r.outer_global
            << " boundary_global=" << r.boundary_global << "\n";
  return j;
}

Json run_radius(const Args& a) {
  FunctionSpec spec = load_spec(a.spec_path);
  Json j;
  j["input"] = input_echo(spec, a.spec_path);
  Json local = Json::array();
  if (!a.at.empty()) {
    Vec at = parse_point(a.at);
    require_dim(at, spec.f.dim(), "--at");
    local.push_back({{"anchor", report_vec(at)},
                     {"radius", report_num(local_radius(spec.f, at, a.opts))}});
  } else {
    for (const PatternWitness& w :
         occurring_patterns(spec.f, Region::kZeroLevel, a.opts))
      local.push_back(
          {{"anchor", report_vec(w.point)},
           {"pattern", report_pattern(w.pattern)},
           {"radius", report_num(local_radius(spec.f, w.point, a.opts))}});
  }
  j["local"] = std::move(local);
  RadiusBounds b = global_radius_bounds(spec.f, a.opts);
  j["global"] = {{"weak_family_radius_at_most", report_num(b.lower)},
                 {"strong_family_radius_at_least", report_num(b.upper)}};
  return j;
}

Json run_attack(const Args& a) {
  FunctionSpec spec = load_spec(a.spec_path);
  if (a.at.empty()) throw std::invalid_argument("attack requires --at");
  Vec at = parse_point(a.at);
  require_dim(at, spec.f.dim(), "--at");
  std::optional<double> xi;
  if (a.has_xi) xi = a.xi;
  Destabilizer d = synthesize_destabilizer(spec.f, at, a.eps, xi, a.opts);
  const double er_g = local_error_bound_modulus(d.g, at, a.opts);
  const bool pass = er_g <= d.certificate.claimed_er_bound + 1e-9;
  Json j;
  j["input"] = input_echo(spec, a.spec_path);
  j["eps"] = a.eps;
  j["xi"] = d.certificate.xi;
  j["perturbation"] = {{"anchor", report_vec(d.perturbation.anchor)},
                       {"slope", report_vec(d.perturbation.slope)},
                       {"slope_norm", report_num(norm(d.perturbation.slope))}};
  j["g"] = function_spec_to_json(
      d.g, spec.name.empty() ? "attacked" : spec.name + "_attacked");
  j["certificate"] = {
      {"x_star", report_vec(d.certificate.x_star)},
      {"xhat_star", report_vec(d.certificate.xhat_star)},
      {"xhat", report_vec(d.certificate.xhat)},
      {"z_star", report_vec(d.certificate.z_star)},
      {"xi", report_num(d.certificate.xi)},
      {"claimed_er_bound", report_num(d.certificate.claimed_er_bound)}};
  j["er_g_at_anchor"] = report_num(er_g);
  j["verdict"] = pass ? "PASS" : "FAIL";
  std::cerr << "destabilizer slope norm " << norm(d.perturbation.slope)
            << " < eps " << a.eps << "; er(g) = " << er_g
            << " <= " << d.certificate.claimed_er_bound << " : "
            << (pass ? "PASS" : "FAIL") << "\n";
  return j;
}

Json run_tau(const Args& a) {
  FunctionSpec spec = load_spec(a.spec_path);
  if (a.at.empty()) throw std::invalid_argument("tau requires --at");
  Vec at = parse_point(a.at);
  require_dim(at, spec.f.dim(), "--at");
  TauResult r = tau_detailed(spec.f, {at, a.eps, a.delta}, a.opts);
  Json j;
  j["input"] = input_echo(spec, a.spec_path);
  j["at"] = report_vec(at);
  j["eps"] = a.eps;
  j["delta"] = a.delta;
  j["value"] = report_num(r.value);
  j["branch"] = r.branch;
  return j;
}

Json run_member(const Args& a) {
  FunctionSpec spec = load_spec(a.spec_path);
  const int n = spec.f.dim();
  PerturbationCandidate cand = constant_shift(n, 0.0);
  Json cand_json;
  if (a.has_constant) {
    cand = constant_shift(n, a.constant);
    cand_json = {{"kind", "constant"}, {"value", a.constant}};
  } else if (!a.slope.empty()) {
    Vec w = parse_point(a.slope);
    require_dim(w, n, "--slope");
    Vec anchor(n, 0.0);
    if (!a.anchor.empty()) {
      anchor = parse_point(a.anchor);
      require_dim(anchor, n, "--anchor");
    }
    cand = LinearPerturbation{anchor, w};
    cand_json = {{"kind", "linear"},
                 {"slope", report_vec(w)},
                 {"anchor", report_vec(anchor)}};
  } else if (!a.pfile.empty()) {
    FunctionSpec p = load_spec(a.pfile);
    Vec anchor(n, 0.0);
    if (!a.anchor.empty()) {
      anchor = parse_point(a.anchor);
      require_dim(anchor, n, "--anchor");
    }
    cand = PolyhedralPerturbation{p.f, anchor};
    cand_json = {{"kind", "polyhedral"}, {"pieces", p.f.piece_count()}};
  } else {
    throw std::invalid_argument(
        "member requires a candidate: --constant, --slope, or --pfile");
  }

  Json j;
  j["input"] = input_echo(spec, a.spec_path);
  j["family"] = a.family;
  j["eps"] = a.eps;
  j["candidate"] = std::move(cand_json);

  if (a.family.rfind("local", 0) == 0) {
    if (a.at.empty())
      throw std::invalid_argument("local families require --at");
    Vec at = parse_point(a.at);
    require_dim(at, n, "--at");
    LocalFamily fam = LocalFamily::kArbitrary;
    if (a.family == "local-convex")
      fam = LocalFamily::kConvex;
    else if (a.family == "local-linear")
      fam = LocalFamily::kLinear;
    else if (a.family != "local" && a.family != "local-arbitrary")
      throw std::invalid_argument("unknown local family: " + a.family);
    LocalMembership m = is_local_member(spec.f, at, cand, a.eps, fam, a.opts);
    j["member"] = m.member ? "yes" : "no";
    j["rate"] = report_num(m.rate);
    return j;
  }

  GlobalFamily fam;
  if (a.family == "strong")
    fam = GlobalFamily::kStrong;
  else if (a.family == "weak")
    fam = GlobalFamily::kWeak;
  else if (a.family == "strong-linear")
    fam = GlobalFamily::kStrongLinear;
  else if (a.family == "weak-linear")
    fam = GlobalFamily::kWeakLinear;
  else
    throw std::invalid_argument("unknown family: " + a.family);

  GlobalMembership m = is_global_member(spec.f, cand, a.eps, fam, a.opts);
  j["member"] = m.member == Membership::kYes
                    ? "yes"
                    : (m.member == Membership::kNo ? "no" : "unknown");
  if (m.witness) {
    j["witness"] = {{"anchor", report_vec(m.witness->x)},
                    {"xi", report_num(m.witness->xi)},
                    {"p_at_anchor", report_num(m.witness->p_at_x)},
                    {"tau", report_num(m.witness->tau_value)}};
  }
  if (!m.detail.empty()) j["failed_condition"] = m.detail;
  return j;
}

Json run_verify(const Args& a) {
  McConfig mc;
  mc.seed = a.seed;
  mc.samples = a.samples;
  mc.radius = a.mc_radius;
  mc.shrink_levels = a.levels;
  mc.threads = a.opts.threads;

  std::vector<Check> checks;
  Json j;
  if (a.corpus) {
    j["corpus"] = Json::array();
    for (const Fixture& fx : builtin_corpus()) {
      j["corpus"].push_back(fx.name);
      corpus_expected_checks(fx, a.opts, checks);
      oracle_checks(fx.f, mc, a.grid, a.opts, fx.name + ".", checks);
    }
  } else {
    if (a.spec_path.empty())
      throw std::invalid_argument("verify needs a spec file or --corpus");
    FunctionSpec spec = load_spec(a.spec_path);
    j["input"] = input_echo(spec, a.spec_path);
    oracle_checks(spec.f, mc, a.grid, a.opts, "", checks);
  }
  j.update(checks_json(checks));
  j["samples"] = mc.samples;
  j["seed"] = mc.seed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "error-bound moduli, slopes, stability radii, and perturbation "
      "analysis for max-affine inequality systems"};
  app.require_subcommand(1);

  Args a;
  a.opts.threads = thread_cap_from_env();

  app.add_option("--tol-active", a.opts.tol_active,
                 "active-set detection tolerance");
  app.add_option("--tol-feas", a.opts.tol_feas,
                 "feasibility/strictness tolerance");
  app.add_option("--tol-geo", a.opts.tol_geo, "geometric kernel tolerance");

  auto add_spec = [&](CLI::App* cmd, bool required) {
    auto* opt =
        cmd->add_option("spec", a.spec_path, "FunctionSpec file (or @fixture)");
    if (required) opt->required();
  };

  auto* analyze =
      app.add_subcommand("analyze", "compute every modulus and slope");
  add_spec(analyze, true);
  analyze->add_option("--at", a.at, "reference point (f must vanish there)");

  auto* radius = app.add_subcommand(
      "radius", "stability radii: local per zero-level point, plus global");
  add_spec(radius, true);
  radius->add_option("--at", a.at, "local radius at this point only");

  auto* attack = app.add_subcommand(
      "attack", "synthesize a destabilizing linear perturbation");
  add_spec(attack, true);
  attack->add_option("--at", a.at, "anchor point")->required();
  attack->add_option("--eps", a.eps, "perturbation budget")->required();
  auto* xi_opt =
      attack->add_option("--xi", a.xi,
                         "destabilization parameter in (0, eps - |x*|); "
                         "default 0.1*(eps - |x*|)");

  auto* verify = app.add_subcommand(
      "verify", "compare exact values against the sampling oracles");
  add_spec(verify, false);
  verify->add_flag("--corpus", a.corpus,
                   "run the built-in corpus with its expected values");
  verify->add_option("--samples", a.samples, "Monte-Carlo samples");
  verify->add_option("--seed", a.seed, "Monte-Carlo seed");
  verify->add_option("--radius", a.mc_radius, "base sampling radius");
  verify->add_option("--levels", a.levels, "shrink/growth levels");
  verify->add_option("--grid", a.grid, "brute-force grid resolution");

  auto* tau_cmd =
      app.add_subcommand("tau", "localized slope at a zero-level point");
  add_spec(tau_cmd, true);
  tau_cmd->add_option("--at", a.at, "zero-level point")->required();
  tau_cmd->add_option("--eps", a.eps, "slope allowance");
  tau_cmd->add_option("--delta", a.delta, "offset allowance");

  auto* member = app.add_subcommand(
      "member", "certify membership in a perturbation family");
  add_spec(member, true);
  member->add_option("--family", a.family,
                     "strong | weak | strong-linear | weak-linear | local | "
                     "local-convex | local-linear");
  member->add_option("--eps", a.eps, "family budget")->required();
  auto* copt =
      member->add_option("--constant", a.constant, "constant-shift candidate");
  member->add_option("--slope", a.slope, "linear candidate slope (csv)");
  member->add_option("--anchor", a.anchor, "candidate anchor (csv)");
  member->add_option("--pfile", a.pfile,
                     "polyhedral perturbation FunctionSpec file");
  member->add_option("--at", a.at, "reference point for local families");

  try {
    app.parse(argc, argv);
    a.has_constant = copt->count() > 0;
    a.has_xi = xi_opt->count() > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (analyze->parsed())
    a.command = "analyze";
  else if (radius->parsed())
    a.command = "radius";
  else if (attack->parsed())
    a.command = "attack";
  else if (verify->parsed())
    a.command = "verify";
  else if (tau_cmd->parsed())
    a.command = "tau";
  else
    a.command = "member";

  Json report;
  report["command"] = a.command;
  try {
    Json payload;
    if (a.command == "analyze")
      payload = run_analyze(a);
    else if (a.command == "radius")
      payload = run_radius(a);
    else if (a.command == "attack")
      payload = run_attack(a);
    else if (a.command == "verify")
      payload = run_verify(a);
    else if (a.command == "tau")
      payload = run_tau(a);
    else
      payload = run_member(a);
    report["status"] = "ok";
    report.update(payload);
  } catch (const DomainError& e) {
    report["status"] = "domain_error";
    report["message"] = e.what();
    std::cout << report.dump(2) << "\n";
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedError& e) {
    report["status"] = "unsupported";
    report["message"] = e.what();
    std::cout << report.dump(2) << "\n";
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const ComputationalError& e) {
    report["status"] = "computational_error";
    report["message"] = e.what();
    std::cout << report.dump(2) << "\n";
    std::cerr << "computational error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {  // parse and input errors
    report["status"] = "parse_error";
    report["message"] = e.what();
    std::cout << report.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}
