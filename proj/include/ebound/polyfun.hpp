#pragma once

// Finite polyhedral convex functions f(x) = max_i (<a_i, x> - b_i):
// evaluation, active sets, subdifferentials, sublevel sets, linearity cells,
// and enumeration of the active-set patterns occurring on level regions.

#include "ebound/geometry.hpp"

namespace ebound {

struct AffinePiece {
  Vec gradient;
  double offset = 0.0;

  double value(const Vec& x) const { return dot(gradient, x) - offset; }
};

// Pointwise maximum of finitely many affine pieces; finite, convex, and
// defined on all of R^n. Exact duplicate pieces are removed at construction;
// dominated pieces are kept since they can still be active at touching
// points.
class PolyhedralFunction {
 public:
  PolyhedralFunction(int dim, std::vector<AffinePiece> pieces) : dim_(dim) {
    if (dim <= 0)
      throw std::invalid_argument("PolyhedralFunction: dimension must be positive");
    if (pieces.empty())
      throw std::invalid_argument("PolyhedralFunction: needs at least one piece");
    for (const AffinePiece& p : pieces) {
      require_dim(p.gradient, dim, "PolyhedralFunction piece");
      if (!all_finite(p.gradient) || !std::isfinite(p.offset))
        throw std::invalid_argument("PolyhedralFunction: non-finite piece");
      bool dup = false;
      for (const AffinePiece& q : pieces_)
        if (q.offset == p.offset && q.gradient == p.gradient) dup = true;
      if (!dup) pieces_.push_back(p);
    }
  }

  int dim() const { return dim_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }

 private:
  int dim_;
  std::vector<AffinePiece> pieces_;
};

inline double evaluate(const PolyhedralFunction& f, const Vec& x) {
  require_dim(x, f.dim(), "evaluate");
  double best = -kInf;
  for (const AffinePiece& p : f.pieces()) best = std::max(best, p.value(x));
  return best;
}

inline double f_plus(const PolyhedralFunction& f, const Vec& x) {
  return std::max(evaluate(f, x), 0.0);
}

using ActiveSet = std::vector<int>;  // sorted piece indices

// Pieces within tol of the maximum at x.
inline ActiveSet active_set(const PolyhedralFunction& f, const Vec& x,
                            double tol) {
  if (tol < 0.0) throw std::invalid_argument("active_set: tol must be >= 0");
  const double fx = evaluate(f, x);
  ActiveSet active;
  for (int i = 0; i < f.piece_count(); ++i)
    if (f.pieces()[i].value(x) >= fx - tol) active.push_back(i);
  return active;
}

// The subdifferential of f at x: convex hull of the active gradients.
inline Polytope subdifferential(const PolyhedralFunction& f, const Vec& x,
                                const Options& opts = {}) {
  Polytope p{f.dim(), {}};
  for (int i : active_set(f, x, opts.tol_active))
    p.generators.push_back(f.pieces()[i].gradient);
  return p;
}

// The solution set {x : f(x) <= 0} as an H-polyhedron.
inline Polyhedron sublevel_polyhedron(const PolyhedralFunction& f) {
  Polyhedron q;
  q.dim = f.dim();
  for (const AffinePiece& p : f.pieces())
    q.halfspaces.push_back({p.gradient, p.offset});
  return q;
}

// Closed region where every piece in D attains the maximum. "Exactly D
// active" on the cell is a separate strict-feasibility query.
inline Polyhedron cell(const PolyhedralFunction& f, const ActiveSet& d) {
  if (d.empty()) throw std::invalid_argument("cell: empty active set");
  for (int i : d)
    if (i < 0 || i >= f.piece_count())
      throw std::invalid_argument("cell: piece index out of range");
  const int ref = d.front();
  const AffinePiece& pr = f.pieces()[ref];
  Polyhedron q;
  q.dim = f.dim();
  for (std::size_t t = 1; t < d.size(); ++t) {
    const AffinePiece& pi = f.pieces()[d[t]];
    q.equalities.push_back(
        {sub(pi.gradient, pr.gradient), pi.offset - pr.offset});
  }
  for (int k = 0; k < f.piece_count(); ++k) {
    if (std::find(d.begin(), d.end(), k) != d.end()) continue;
    const AffinePiece& pk = f.pieces()[k];
    q.halfspaces.push_back(
        {sub(pk.gradient, pr.gradient), pk.offset - pr.offset});
  }
  return q;
}

enum class Region { kZeroLevel, kPositive, kNonnegative };

// An occurring exact active-set pattern together with a point realizing it.
struct PatternWitness {
  ActiveSet pattern;
  Vec point;
};

namespace detail {

inline void check_enum_caps(const PolyhedralFunction& f, const Options& opts,
                            const char* what) {
  if (f.piece_count() > opts.max_enum_pieces)
    throw UnsupportedError(std::string(what) + ": piece count " +
                           std::to_string(f.piece_count()) +
                           " exceeds enumeration cap " +
                           std::to_string(opts.max_enum_pieces));
  if (f.dim() > opts.max_enum_dim)
    throw UnsupportedError(std::string(what) + ": dimension exceeds cap");
}

// Enumerates nonempty subsets of {0..m-1} in (size, lex) order.
inline std::vector<ActiveSet> all_patterns(int m) {
  std::vector<ActiveSet> out;
  for (int k = 1; k <= m; ++k) {
    std::vector<int> idx = first_subset(k);
    do {
      out.push_back(idx);
    } while (next_subset(idx, m));
  }
  return out;
}

}  // namespace detail

// Patterns D for which some x has active set exactly D with f(x) in the
// requested region, each with a strict-LP witness point. The decision runs
// in variables (x, s) with s standing for the common active value f(x).
inline std::vector<PatternWitness> occurring_patterns(
    const PolyhedralFunction& f, Region region, const Options& opts = {}) {
  detail::check_enum_caps(f, opts, "occurring_patterns");
  const int n = f.dim();
  std::vector<PatternWitness> out;
  for (const ActiveSet& d : detail::all_patterns(f.piece_count())) {
    StrictSystem sys;
    sys.dim = n + 1;
    auto lifted = [&](const Vec& a, double s_coeff) {
      Vec v = a;
      v.push_back(s_coeff);
      return v;
    };
    for (int i : d)
      sys.equalities.push_back(
          {lifted(f.pieces()[i].gradient, -1.0), f.pieces()[i].offset});
    for (int k = 0; k < f.piece_count(); ++k) {
      if (std::find(d.begin(), d.end(), k) != d.end()) continue;
      sys.rows.push_back(
          {lifted(f.pieces()[k].gradient, -1.0), f.pieces()[k].offset, true});
    }
    Vec es(n + 1, 0.0);
    es[n] = 1.0;
    switch (region) {
      case Region::kZeroLevel:
        sys.equalities.push_back({es, 0.0});
        break;
      case Region::kPositive:
        sys.rows.push_back({scaled(es, -1.0), 0.0, true});
        break;
      case Region::kNonnegative:
        sys.rows.push_back({scaled(es, -1.0), 0.0, false});
        break;
    }
    StrictFeasibility feas = strict_lp_feasible(sys, opts);
    if (feas.feasible) {
      Vec point(feas.witness->begin(), feas.witness->begin() + n);
      out.push_back({d, std::move(point)});
    }
  }
  return out;
}

inline std::vector<ActiveSet> occurring_active_sets(
    const PolyhedralFunction& f, Region region, const Options& opts = {}) {
  std::vector<ActiveSet> out;
  for (PatternWitness& w : occurring_patterns(f, region, opts))
    out.push_back(std::move(w.pattern));
  return out;
}

struct ArgminCell {
  ActiveSet pattern;
  Polyhedron region;
  bool unbounded = false;
};

// Cells whose gradient hull contains the origin; their union is argmin f.
inline std::vector<ArgminCell> argmin_cells(const PolyhedralFunction& f,
                                            const Options& opts = {}) {
  detail::check_enum_caps(f, opts, "argmin_cells");
  std::vector<ArgminCell> out;
  const Vec zero(f.dim(), 0.0);
  for (const ActiveSet& d : detail::all_patterns(f.piece_count())) {
    Polytope hull{f.dim(), {}};
    for (int i : d) hull.generators.push_back(f.pieces()[i].gradient);
    if (min_norm_point(hull, opts).dist > opts.tol_geo * 10.0) continue;
    Polyhedron region = cell(f, d);
    if (!feasible_point(region, opts)) continue;
    const bool unbounded = recession_nontrivial(region, opts).unbounded;
    out.push_back({d, std::move(region), unbounded});
  }
  return out;
}

}  // namespace ebound
