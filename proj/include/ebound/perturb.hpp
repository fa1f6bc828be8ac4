#pragma once

// Perturbation machinery: membership certification for the local families
// (arbitrary / convex / linear) and the global families (strong / weak and
// their linear subfamilies), constructive synthesis of a destabilizing
// linear perturbation once the budget exceeds the stability radius, the
// local radius, the rigidity test, and bounds on the global radius.

#include <variant>

#include "ebound/slopes.hpp"

namespace ebound {

// g(u) = f(u) + <slope, u - anchor>
struct LinearPerturbation {
  Vec anchor;
  Vec slope;
};

// g = f + p for a polyhedral perturbing function p
struct PolyhedralPerturbation {
  PolyhedralFunction p;
  Vec anchor;
};

using PerturbationCandidate =
    std::variant<LinearPerturbation, PolyhedralPerturbation>;

inline PolyhedralPerturbation constant_shift(int dim, double c) {
  return {PolyhedralFunction(dim, {{Vec(dim, 0.0), -c}}), Vec(dim, 0.0)};
}

inline PolyhedralFunction apply_perturbation(const PolyhedralFunction& f,
                                             const LinearPerturbation& lp) {
  require_dim(lp.slope, f.dim(), "apply_perturbation slope");
  require_dim(lp.anchor, f.dim(), "apply_perturbation anchor");
  const double shift = dot(lp.slope, lp.anchor);
  std::vector<AffinePiece> pieces;
  for (const AffinePiece& p : f.pieces())
    pieces.push_back({add(p.gradient, lp.slope), p.offset + shift});
  return PolyhedralFunction(f.dim(), std::move(pieces));
}

// max-of-sums expansion of f + p
inline PolyhedralFunction apply_perturbation(const PolyhedralFunction& f,
                                             const PolyhedralPerturbation& pp) {
  if (pp.p.dim() != f.dim())
    throw std::invalid_argument("apply_perturbation: dimension mismatch");
  std::vector<AffinePiece> pieces;
  for (const AffinePiece& a : f.pieces())
    for (const AffinePiece& b : pp.p.pieces())
      pieces.push_back({add(a.gradient, b.gradient), a.offset + b.offset});
  return PolyhedralFunction(f.dim(), std::move(pieces));
}

inline PolyhedralFunction apply_perturbation(const PolyhedralFunction& f,
                                             const PerturbationCandidate& c) {
  return std::visit([&](const auto& v) { return apply_perturbation(f, v); },
                    c);
}

namespace detail {

// p(u) = <w, u> - c for every u when all gradients agree (dominated copies
// of the same gradient collapse to the smallest offset).
struct AffineView {
  bool affine = false;
  Vec w;
  double c = 0.0;
};

inline AffineView affine_view(const PerturbationCandidate& cand, int dim) {
  AffineView view;
  if (const auto* lp = std::get_if<LinearPerturbation>(&cand)) {
    view.affine = true;
    view.w = lp->slope;
    view.c = dot(lp->slope, lp->anchor);
    return view;
  }
  const auto& pp = std::get<PolyhedralPerturbation>(cand);
  const auto& pieces = pp.p.pieces();
  for (const AffinePiece& p : pieces)
    if (p.gradient != pieces.front().gradient) return view;
  view.affine = true;
  view.w = pieces.front().gradient;
  view.c = pieces.front().offset;
  for (const AffinePiece& p : pieces) view.c = std::min(view.c, p.offset);
  (void)dim;
  return view;
}

inline double candidate_value(const PerturbationCandidate& cand,
                              const Vec& x) {
  if (const auto* lp = std::get_if<LinearPerturbation>(&cand))
    return dot(lp->slope, sub(x, lp->anchor));
  return evaluate(std::get<PolyhedralPerturbation>(cand).p, x);
}

}  // namespace detail

// Exact limsup of |p(u)| / |u - xbar| as u -> xbar for polyhedral p with
// p(xbar) = 0: the largest active-gradient norm at xbar.
inline double local_rate(const PolyhedralFunction& p, const Vec& xbar,
                         const Options& opts = {}) {
  detail::require_zero_at(p, xbar, opts, "local_rate");
  double rate = 0.0;
  for (int i : active_set(p, xbar, opts.tol_active))
    rate = std::max(rate, norm(p.pieces()[i].gradient));
  return rate;
}

enum class LocalFamily { kArbitrary, kConvex, kLinear };

struct LocalMembership {
  bool member = false;
  double rate = 0.0;
};

// Membership of g = f + p in the local epsilon-perturbation families at
// xbar. The linear family additionally requires p itself to be linear.
inline LocalMembership is_local_member(const PolyhedralFunction& f,
                                       const Vec& xbar,
                                       const PerturbationCandidate& cand,
                                       double eps, LocalFamily family,
                                       const Options& opts = {}) {
  detail::require_zero_at(f, xbar, opts, "is_local_member");
  if (std::fabs(detail::candidate_value(cand, xbar)) > opts.tol_active * 100.0)
    throw DomainError("is_local_member: perturbation must vanish at xbar");
  double rate;
  bool linear;
  if (const auto* lp = std::get_if<LinearPerturbation>(&cand)) {
    rate = norm(lp->slope);
    linear = true;
  } else {
    const auto& pp = std::get<PolyhedralPerturbation>(cand);
    rate = local_rate(pp.p, xbar, opts);
    linear = detail::affine_view(cand, f.dim()).affine;
  }
  const double tol = opts.tol_feas * (1.0 + eps);
  bool member = rate <= eps + tol;
  if (family == LocalFamily::kLinear) member = member && linear;
  return {member, rate};
}

struct PerturbationCertificate {
  Vec x_star;      // nearest boundary subgradient to the origin
  Vec xhat_star;   // point just outside the subdifferential
  Vec xhat;        // witness of the violated subgradient inequality
  Vec z_star;      // unit direction aligned with xhat - xbar
  double xi = 0.0;
  double claimed_er_bound = 0.0;  // 2 * xi
};

struct Destabilizer {
  PolyhedralFunction g;
  LinearPerturbation perturbation;
  PerturbationCertificate certificate;
};

// Constructive destabilization below the radius: for eps above the local
// boundary slope, builds g = f + <-x* + xi z*, . - xbar> whose local error
// bound modulus at xbar is at most 2 xi. Throws DomainError when eps is not
// above the boundary slope (no destabilizer exists there).
inline Destabilizer synthesize_destabilizer(
    const PolyhedralFunction& f, const Vec& xbar, double eps,
    std::optional<double> xi_opt = std::nullopt, const Options& opts = {}) {
  detail::require_zero_at(f, xbar, opts, "synthesize_destabilizer");
  const int n = f.dim();
  const double sigma = boundary_slope_local(f, xbar, opts);
  if (!(std::isfinite(eps) && sigma < eps))
    throw DomainError(
        "synthesize_destabilizer: eps must exceed the local boundary slope " +
        std::to_string(sigma));

  const Polytope sd = subdifferential(f, xbar, opts);
  const AffineHull hull = affine_hull(sd, opts);

  Vec x_star;
  Vec outward;
  if (hull.dim() < n) {
    x_star = min_norm_point(sd, opts).point;
    outward = orthonormal_complement(hull.basis, n).front();
  } else {
    const FacetList facets = facet_enumeration(sd, opts);
    double best = kInf;
    int best_facet = -1;
    for (std::size_t i = 0; i < facets.size(); ++i) {
      Polytope face{n, {}};
      for (int idx : facets[i].vertex_indices)
        face.generators.push_back(sd.generators[idx]);
      MinNormResult r = min_norm_point(face, opts);
      if (r.dist < best - opts.tol_geo) {
        best = r.dist;
        best_facet = static_cast<int>(i);
        x_star = r.point;
      }
    }
    // lowest-index facet through x_star provides the outward direction
    for (const Facet& fc : facets)
      if (std::fabs(dot(fc.normal, x_star) - fc.offset) <=
          opts.tol_feas * 100.0 * (1.0 + std::fabs(fc.offset))) {
        outward = fc.normal;
        break;
      }
    if (outward.empty() && best_facet >= 0)
      outward = facets[best_facet].normal;
  }
  if (norm(x_star) >= eps)
    throw ComputationalError(
        "synthesize_destabilizer: nearest boundary point is not inside the "
        "eps ball");

  const double room = eps - norm(x_star);
  const double xi = xi_opt.value_or(0.1 * room);
  if (!(xi > 0.0 && xi < room))
    throw DomainError("synthesize_destabilizer: xi must lie in (0, eps - " +
                      std::to_string(norm(x_star)) + ")");

  Vec xhat_star = x_star;
  axpy(0.5 * xi, outward, xhat_star);
  if (contains(sd, xhat_star, opts))
    throw ComputationalError(
        "synthesize_destabilizer: outward step stayed inside the "
        "subdifferential");

  StrictSystem sys;
  sys.dim = n;
  const double rhs_shift = dot(xhat_star, xbar);
  for (const AffinePiece& p : f.pieces())
    sys.rows.push_back(
        {sub(p.gradient, xhat_star), p.offset - rhs_shift, true});
  StrictFeasibility feas = strict_lp_feasible(sys, opts);
  if (!feas.feasible)
    throw ComputationalError(
        "synthesize_destabilizer: no point violates the candidate "
        "subgradient inequality");
  const Vec xhat = *feas.witness;
  const double dist = distance(xhat, xbar);
  if (dist <= opts.tol_geo)
    throw ComputationalError("synthesize_destabilizer: degenerate witness");
  const Vec z_star = scaled(sub(xhat, xbar), 1.0 / dist);

  Vec slope = scaled(x_star, -1.0);
  axpy(xi, z_star, slope);
  if (norm(slope) >= eps)
    throw ComputationalError(
        "synthesize_destabilizer: perturbation left the eps ball");

  LinearPerturbation lp{xbar, slope};
  PerturbationCertificate cert{x_star, xhat_star, xhat, z_star, xi, 2.0 * xi};
  return {apply_perturbation(f, lp), std::move(lp), std::move(cert)};
}

// The radius of local error bound stability at xbar: the common value of
// the family infima for arbitrary, convex, and linear perturbations.
inline double local_radius(const PolyhedralFunction& f, const Vec& xbar,
                           const Options& opts = {}) {
  return boundary_slope_local(f, xbar, opts);
}

// A certified global Lipschitz constant of a polyhedral function.
inline double global_lipschitz_bound(const PolyhedralFunction& p) {
  double bound = 0.0;
  for (const AffinePiece& piece : p.pieces())
    bound = std::max(bound, norm(piece.gradient));
  return bound;
}

enum class GlobalFamily { kStrong, kWeak, kStrongLinear, kWeakLinear };

enum class Membership { kYes, kNo, kUnknown };

struct GlobalPerturbationWitness {
  Vec x;                // anchor in the zero level set
  double xi = 0.0;      // certified calmness constant of p relative to x
  double p_at_x = 0.0;  // delta in the compatibility condition
  double tau_value = kInf;
};

struct GlobalMembership {
  Membership member = Membership::kNo;
  std::optional<GlobalPerturbationWitness> witness;
  std::string detail;
};

// Anchor points searched for global membership: one strict-LP witness per
// zero-level active-set pattern plus the vertices of each zero-level face.
inline std::vector<Vec> anchor_candidates(const PolyhedralFunction& f,
                                          const Options& opts = {}) {
  std::vector<Vec> anchors;
  auto push = [&](const Vec& x) {
    for (const Vec& known : anchors)
      if (distance(known, x) <= 1e-7 * (1.0 + norm(x))) return;
    anchors.push_back(x);
  };
  for (const PatternWitness& w :
       occurring_patterns(f, Region::kZeroLevel, opts)) {
    push(w.point);
    Polyhedron face = cell(f, w.pattern);
    const AffinePiece& rep = f.pieces()[w.pattern.front()];
    face.equalities.push_back({rep.gradient, rep.offset});
    for (const Vec& v : vertex_enumeration(face, opts)) push(v);
  }
  return anchors;
}

namespace detail {

// Point of the face minimizing |<w,u> - c|, via an epigraph LP.
inline std::optional<Vec> min_abs_anchor(const Polyhedron& face, const Vec& w,
                                         double c, const Options& opts) {
  const int n = face.dim;
  std::vector<Vec> a;
  Vec b;
  auto push = [&](Vec normal, double t_coeff, double bound) {
    normal.push_back(t_coeff);
    a.push_back(std::move(normal));
    b.push_back(bound);
  };
  for (const Halfspace& h : face.halfspaces) push(h.normal, 0.0, h.bound);
  for (const LinearEquality& e : face.equalities) {
    push(e.normal, 0.0, e.value);
    push(scaled(e.normal, -1.0), 0.0, -e.value);
  }
  push(w, -1.0, c);
  push(scaled(w, -1.0), -1.0, -c);
  Vec obj(n + 1, 0.0);
  obj[n] = -1.0;
  LpResult res = lp_max_free(a, b, obj, opts.tol_feas);
  if (res.status != LpStatus::kOptimal) return std::nullopt;
  return Vec(res.x.begin(), res.x.begin() + n);
}

}  // namespace detail

// Membership of g = f + p in the global perturbation families. Weak
// families only need the calmness condition; strong families additionally
// need the compatibility condition at some anchor of the zero level set.
// For a non-affine p the certified calmness constant is the global
// Lipschitz bound, so a failed check reports kUnknown rather than kNo.
inline GlobalMembership is_global_member(const PolyhedralFunction& f,
                                         const PerturbationCandidate& cand,
                                         double eps, GlobalFamily family,
                                         const Options& opts = {}) {
  if (!feasible_point(sublevel_polyhedron(f), opts))
    throw DomainError("is_global_member: the solution set of f is empty");
  const PolyhedralFunction g = apply_perturbation(f, cand);
  if (!feasible_point(sublevel_polyhedron(g), opts))
    return {Membership::kNo, std::nullopt, "the perturbed solution set is empty"};

  const detail::AffineView view = detail::affine_view(cand, f.dim());
  const bool linear_family = family == GlobalFamily::kStrongLinear ||
                             family == GlobalFamily::kWeakLinear;
  if (linear_family && !view.affine)
    return {Membership::kNo, std::nullopt, "candidate is not linear"};

  std::vector<Vec> anchors = anchor_candidates(f, opts);
  if (view.affine && norm(view.w) > 0.0) {
    for (const PatternWitness& w :
         occurring_patterns(f, Region::kZeroLevel, opts)) {
      Polyhedron face = cell(f, w.pattern);
      const AffinePiece& rep = f.pieces()[w.pattern.front()];
      face.equalities.push_back({rep.gradient, rep.offset});
      std::optional<Vec> extra =
          detail::min_abs_anchor(face, view.w, view.c, opts);
      if (extra) {
        bool dup = false;
        for (const Vec& known : anchors)
          if (distance(known, *extra) <= 1e-7 * (1.0 + norm(*extra)))
            dup = true;
        if (!dup) anchors.push_back(std::move(*extra));
      }
    }
  }
  if (anchors.empty())
    return {Membership::kNo, std::nullopt, "the zero level set is empty"};

  const double xi =
      view.affine ? norm(view.w) : global_lipschitz_bound(
                                       std::get<PolyhedralPerturbation>(cand).p);
  const double tol = opts.tol_feas * (1.0 + eps);
  const double vanish_tol = opts.tol_active * 1000.0;
  const Membership fail =
      view.affine ? Membership::kNo : Membership::kUnknown;

  switch (family) {
    case GlobalFamily::kWeakLinear: {
      for (const Vec& x : anchors) {
        const double px = detail::candidate_value(cand, x);
        if (std::fabs(px) <= vanish_tol && xi <= eps + tol)
          return {Membership::kYes,
                  GlobalPerturbationWitness{x, xi, 0.0, kInf}, {}};
      }
      return {Membership::kNo, std::nullopt,
              "no zero-level anchor where the perturbation vanishes within "
              "the slope budget"};
    }
    case GlobalFamily::kWeak: {
      if (xi <= eps + tol)
        return {Membership::kYes,
                GlobalPerturbationWitness{
                    anchors.front(), xi,
                    detail::candidate_value(cand, anchors.front()), kInf},
                {}};
      return {fail, std::nullopt, "certified calmness constant exceeds eps"};
    }
    case GlobalFamily::kStrong:
    case GlobalFamily::kStrongLinear: {
      const double bdg = global_boundary_slope(f, opts);
      for (const Vec& x : anchors) {
        const double px = detail::candidate_value(cand, x);
        double delta = std::fabs(px);
        if (family == GlobalFamily::kStrongLinear) {
          if (delta > vanish_tol) continue;  // must vanish at the anchor
          delta = 0.0;
        }
        const double tv = tau(f, {x, xi, delta}, opts);
        if (xi + bdg - tv <= eps + tol)
          return {Membership::kYes,
                  GlobalPerturbationWitness{x, xi, px, tv}, {}};
      }
      return {fail, std::nullopt,
              "compatibility condition failed at every searched anchor"};
    }
  }
  return {Membership::kNo, std::nullopt, "unreachable"};
}

struct RigidityResult {
  bool rigid = false;
  std::optional<ActiveSet> witness_cell;
};

// Rigidity: an unbounded cell with small subgradients on which f stays
// bounded below forces every strong eps-perturbation to be a constant shift
// (for eps up to the global boundary slope).
inline RigidityResult rigidity_check(const PolyhedralFunction& f, double eps,
                                     const Options& opts = {}) {
  if (eps < 0.0)
    throw std::invalid_argument("rigidity_check: eps must be nonnegative");
  if (occurring_active_sets(f, Region::kZeroLevel, opts).empty())
    throw DomainError("rigidity_check: the zero level set is empty");
  const double bdg = global_boundary_slope(f, opts);
  for (const ActiveSet& d : detail::all_patterns(f.piece_count())) {
    Polyhedron region = cell(f, d);
    if (!feasible_point(region, opts)) continue;
    if (detail::pattern_distance(f, d, opts) > bdg - eps + opts.tol_feas)
      continue;
    if (!recession_nontrivial(region, opts).unbounded) continue;
    const Vec& grad = f.pieces()[d.front()].gradient;
    bool bounded_below = true;
    for (const Vec& r : recession_generators(region, opts))
      if (dot(grad, r) < -opts.tol_feas * 100.0) {
        bounded_below = false;
        break;
      }
    if (bounded_below) return {true, d};
  }
  return {false, std::nullopt};
}

struct RadiusBounds {
  double lower = 0.0;  // the radius for weak families is at most this
  double upper = 0.0;  // the radius for strong families is at least this
};

// Sandwich estimate for the radius of global error bound stability: both
// ends equal the global boundary slope.
inline RadiusBounds global_radius_bounds(const PolyhedralFunction& f,
                                         const Options& opts = {}) {
  if (!feasible_point(sublevel_polyhedron(f), opts))
    throw DomainError("global_radius_bounds: the solution set is empty");
  const double bdg = global_boundary_slope(f, opts);
  return {bdg, bdg};
}

}  // namespace ebound
