#pragma once

// Exact error-bound moduli and subdifferential slopes: the local error bound
// modulus (= strict outer subdifferential slope), boundary subdifferential
// slopes (local and global), the global outer slope (= global error bound
// modulus), and the localized constant tau(f, x, eps, delta). Infima over
// empty sets are +inf.

#include "ebound/polyfun.hpp"

namespace ebound {

struct SlopeReport {
  std::optional<double> er_local;
  std::optional<double> strict_outer_local;  // equals er_local
  std::optional<double> boundary_local;
  double er_global = kInf;
  double outer_global = kInf;  // equals er_global
  double boundary_global = kInf;
  std::optional<Vec> anchor;
};

namespace detail {

inline void require_zero_at(const PolyhedralFunction& f, const Vec& x,
                            const Options& opts, const char* what) {
  require_dim(x, f.dim(), what);
  if (std::fabs(evaluate(f, x)) > opts.tol_active * 100.0)
    throw DomainError(std::string(what) + ": f at the reference point is " +
                      std::to_string(evaluate(f, x)) + ", expected 0");
}

inline double pattern_distance(const PolyhedralFunction& f, const ActiveSet& d,
                               const Options& opts) {
  Polytope hull{f.dim(), {}};
  for (int i : d) hull.generators.push_back(f.pieces()[i].gradient);
  return min_norm_point(hull, opts).dist;
}

}  // namespace detail

// Subsets D of the active set at xbar admitting a direction d with
// <a_i, d> = 1 on D and < 1 on the remaining active indices. These index
// the subdifferential limits from the violating side.
inline std::vector<ActiveSet> dee_family(const PolyhedralFunction& f,
                                         const Vec& xbar,
                                         const Options& opts = {}) {
  require_dim(xbar, f.dim(), "dee_family");
  const ActiveSet active = active_set(f, xbar, opts.tol_active);
  const int k = static_cast<int>(active.size());
  std::vector<ActiveSet> family;
  for (int size = 1; size <= k; ++size) {
    std::vector<int> pick = detail::first_subset(size);
    do {
      ActiveSet d;
      for (int t : pick) d.push_back(active[t]);
      StrictSystem sys;
      sys.dim = f.dim();
      for (int i : active) {
        const Vec& a = f.pieces()[i].gradient;
        if (std::find(d.begin(), d.end(), i) != d.end())
          sys.equalities.push_back({a, 1.0});
        else
          sys.rows.push_back({a, 1.0, true});
      }
      if (strict_lp_feasible(sys, opts).feasible) family.push_back(std::move(d));
    } while (detail::next_subset(pick, k));
  }
  return family;
}

// Local error bound modulus at a zero of f, through the polyhedral formula:
// the nearest point of the union over the dee family of active-gradient
// hulls. Also the strict outer subdifferential slope at xbar.
inline double local_error_bound_modulus(const PolyhedralFunction& f,
                                        const Vec& xbar,
                                        const Options& opts = {}) {
  detail::require_zero_at(f, xbar, opts, "local_error_bound_modulus");
  double best = kInf;
  for (const ActiveSet& d : dee_family(f, xbar, opts))
    best = std::min(best, detail::pattern_distance(f, d, opts));
  return best;
}

// Distance from the origin to the boundary (in the whole dual space) of the
// subdifferential at xbar.
inline double boundary_slope_local(const PolyhedralFunction& f,
                                   const Vec& xbar, const Options& opts = {}) {
  detail::require_zero_at(f, xbar, opts, "boundary_slope_local");
  return boundary_distance(subdifferential(f, xbar, opts), Vec(f.dim(), 0.0),
                           opts);
}

// Infimum of d(0, subdifferential(x)) over f(x) > 0; the global error bound
// modulus.
inline double global_outer_slope(const PolyhedralFunction& f,
                                 const Options& opts = {}) {
  double best = kInf;
  for (const ActiveSet& d :
       occurring_active_sets(f, Region::kPositive, opts))
    best = std::min(best, detail::pattern_distance(f, d, opts));
  return best;
}

// Infimum of d(0, bd subdifferential(x)) over the zero level set.
inline double global_boundary_slope(const PolyhedralFunction& f,
                                    const Options& opts = {}) {
  const Vec zero(f.dim(), 0.0);
  double best = kInf;
  for (const ActiveSet& d :
       occurring_active_sets(f, Region::kZeroLevel, opts)) {
    Polytope hull{f.dim(), {}};
    for (int i : d) hull.generators.push_back(f.pieces()[i].gradient);
    best = std::min(best, boundary_distance(hull, zero, opts));
  }
  return best;
}

struct TauQuery {
  Vec x;
  double eps = 0.0;
  double delta = 0.0;
};

struct TauResult {
  double value = kInf;
  int branch = 1;  // 1: infimum over the reachable region; 2: interior case
};

namespace detail {

// Exact supremum of u -> <a,u> - b + eps*|u - x| over a polyhedron. The
// function is convex, so a finite sup is attained at a vertex once the
// lineality space is quotiented out; a recession direction r with
// <a,r> + eps|r| > 0 certifies sup = +inf. Returns -inf on an empty cell.
inline double sup_affine_plus_norm(const Polyhedron& cell, const Vec& a,
                                   double b, double eps, const Vec& x,
                                   const Options& opts) {
  std::optional<Vec> feas = feasible_point(cell, opts);
  if (!feas) return -kInf;
  const int n = cell.dim;
  if (n == 0) return -b;

  const std::vector<Vec> lin = lineality_space(cell, opts);
  if (!lin.empty()) {
    const Vec along = project_onto_span(lin, a);
    if (eps > opts.tol_feas || norm(along) > opts.tol_geo * 100.0)
      return kInf;
    // constant along the lineality space: restrict to its complement
    const std::vector<Vec> basis = orthonormal_complement(lin, n);
    const int d = static_cast<int>(basis.size());
    const Vec& c0 = *feas;
    auto reduce = [&](const Vec& v) {
      Vec w(d);
      for (int j = 0; j < d; ++j) w[j] = dot(v, basis[j]);
      return w;
    };
    Polyhedron red;
    red.dim = d;
    for (const Halfspace& h : cell.halfspaces)
      red.halfspaces.push_back(
          {reduce(h.normal), h.bound - dot(h.normal, c0)});
    for (const LinearEquality& e : cell.equalities)
      red.equalities.push_back(
          {reduce(e.normal), e.value - dot(e.normal, c0)});
    return sup_affine_plus_norm(red, reduce(a), b - dot(a, c0), 0.0,
                                Vec(d, 0.0), opts);
  }

  const double ray_tol = opts.tol_feas * 100.0 * (1.0 + norm(a));
  for (const Vec& ray : recession_extreme_rays(cell, opts))
    if (dot(a, ray) + eps > ray_tol) return kInf;

  const std::vector<Vec> verts = vertex_enumeration(cell, opts);
  if (verts.empty())
    throw ComputationalError(
        "sup_affine_plus_norm: pointed nonempty cell without vertices");
  double best = -kInf;
  for (const Vec& v : verts)
    best = std::max(best, dot(a, v) - b + eps * distance(v, x));
  return best;
}

}  // namespace detail

// The localized slope tau(f, x, eps, delta) at a zero of f. When the origin
// is interior to the subdifferential at x the value is the boundary
// distance there; otherwise it is the infimum of d(0, subdifferential(u))
// over the region f(u) >= -eps|u-x| - delta. Exact for dimension up to
// Options::max_tau_dim; higher dimensions raise UnsupportedError and are
// served by the sampling estimator.
inline TauResult tau_detailed(const PolyhedralFunction& f, const TauQuery& q,
                              const Options& opts = {}) {
  detail::require_zero_at(f, q.x, opts, "tau");
  if (q.eps < 0.0 || q.delta < 0.0)
    throw std::invalid_argument("tau: eps and delta must be nonnegative");
  if (f.dim() > opts.max_tau_dim)
    throw UnsupportedError(
        "tau: exact computation is limited to dimension <= " +
        std::to_string(opts.max_tau_dim) + "; use the sampling estimator");
  const Vec zero(f.dim(), 0.0);
  const Polytope sd = subdifferential(f, q.x, opts);
  if (interior_contains(sd, zero, opts)) {
    // the interior case forces the zero level set to be the singleton {x}
    for (const PatternWitness& w :
         occurring_patterns(f, Region::kZeroLevel, opts))
      if (distance(w.point, q.x) > 1e-6 * (1.0 + norm(q.x)))
        throw ComputationalError(
            "tau: interior branch taken but the zero level set is not a "
            "singleton");
    return {boundary_distance(sd, zero, opts), 2};
  }

  detail::check_enum_caps(f, opts, "tau");
  struct Candidate {
    double dist;
    ActiveSet pattern;
  };
  std::vector<Candidate> cands;
  for (const ActiveSet& d : detail::all_patterns(f.piece_count())) {
    Polyhedron region = cell(f, d);
    if (!feasible_point(region, opts)) continue;
    cands.push_back({detail::pattern_distance(f, d, opts), d});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) {
    return l.dist != r.dist ? l.dist < r.dist : l.pattern < r.pattern;
  });
  for (const Candidate& cand : cands) {
    const AffinePiece& rep = f.pieces()[cand.pattern.front()];
    const double sup = detail::sup_affine_plus_norm(
        cell(f, cand.pattern), rep.gradient, rep.offset, q.eps, q.x, opts);
    if (sup >= -q.delta - opts.tol_feas * 100.0) return {cand.dist, 1};
  }
  return {kInf, 1};
}

inline double tau(const PolyhedralFunction& f, const TauQuery& q,
                  const Options& opts = {}) {
  return tau_detailed(f, q, opts).value;
}

// Aggregates every modulus; local fields are filled when xbar is given
// (requiring f(xbar) = 0). A global error bound exists iff outer_global > 0.
inline SlopeReport full_report(const PolyhedralFunction& f,
                               const std::optional<Vec>& xbar,
                               const Options& opts = {}) {
  SlopeReport report;
  report.outer_global = global_outer_slope(f, opts);
  report.er_global = report.outer_global;
  report.boundary_global = global_boundary_slope(f, opts);
  if (xbar) {
    report.anchor = *xbar;
    report.er_local = local_error_bound_modulus(f, *xbar, opts);
    report.strict_outer_local = report.er_local;
    report.boundary_local = boundary_slope_local(f, *xbar, opts);
  }
  return report;
}

}  // namespace ebound
