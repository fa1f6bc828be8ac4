#pragma once

// Small-dimension convex geometry kernel: minimum-norm point in a V-polytope
// (Wolfe's iterative affine-minimizer method), point/polytope distances,
// membership and interior tests, facet and vertex enumeration by bounded
// brute force, strict LP feasibility via slack maximization, Euclidean
// projection onto an H-polyhedron, and recession-cone queries.

#include <array>
#include <cstddef>
#include <set>
#include <utility>

#include "ebound/core.hpp"

namespace ebound {

// Convex hull of finitely many generators (V-representation).
struct Polytope {
  int dim = 0;
  std::vector<Vec> generators;
};

struct Halfspace {
  Vec normal;
  double bound = 0.0;  // <normal, x> <= bound
};

struct LinearEquality {
  Vec normal;
  double value = 0.0;  // <normal, x> = value
};

// H-representation; may be empty as a set.
struct Polyhedron {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
  std::vector<LinearEquality> equalities;
};

// Facet relative to the polytope's affine hull: unit outward normal, offset,
// and the generators lying on it.
struct Facet {
  Vec normal;
  double offset = 0.0;
  std::vector<int> vertex_indices;
};

using FacetList = std::vector<Facet>;

// ---------------------------------------------------------------------------
// Dense tableau simplex (maximize c'x s.t. Ax <= b, x >= 0)
// ---------------------------------------------------------------------------

namespace detail {

enum class LpStatus { kInfeasible, kUnbounded, kOptimal };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = -kInf;
  Vec x;
};

// Two-phase tableau simplex with lexicographic (value, index) pivoting.
class SimplexTableau {
 public:
  SimplexTableau(const std::vector<Vec>& a, const Vec& b, const Vec& c,
                 double eps)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
        eps_(eps), col_(n_ + 1), row_(m_),
        tab_(m_ + 2, Vec(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) tab_[i][j] = a[i][j];
    for (int i = 0; i < m_; ++i) {
      row_[i] = n_ + i;
      tab_[i][n_] = -1.0;
      tab_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      col_[j] = j;
      tab_[m_][j] = -c[j];
    }
    col_[n_] = -1;           // artificial variable
    tab_[m_ + 1][n_] = 1.0;  // feasibility objective
  }

  LpResult solve() {
    LpResult res;
    if (m_ == 0) {
      res.x.assign(n_, 0.0);
      bool unbounded = false;
      for (int j = 0; j < n_; ++j)
        if (-tab_[m_][j] > eps_) unbounded = true;
      res.status = unbounded ? LpStatus::kUnbounded : LpStatus::kOptimal;
      res.value = unbounded ? kInf : 0.0;
      return res;
    }
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (tab_[i][n_ + 1] < tab_[r][n_ + 1]) r = i;
    if (tab_[r][n_ + 1] < -eps_) {
      pivot(r, n_);
      if (!run(m_ + 1, true) || tab_[m_ + 1][n_ + 1] < -eps_) return res;
      for (int i = 0; i < m_; ++i) {
        if (row_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (std::make_pair(tab_[i][j], col_[j]) <
              std::make_pair(tab_[i][s], col_[s]))
            s = j;
        pivot(i, s);
      }
    }
    const bool bounded = run(m_, false);
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (row_[i] >= 0 && row_[i] < n_) res.x[row_[i]] = tab_[i][n_ + 1];
    res.status = bounded ? LpStatus::kOptimal : LpStatus::kUnbounded;
    res.value = bounded ? tab_[m_][n_ + 1] : kInf;
    return res;
  }

 private:
  void pivot(int r, int s) {
    double* a = tab_[r].data();
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(tab_[i][s]) <= eps_) continue;
      double* b = tab_[i].data();
      const double f = b[s] * inv;
      for (int j = 0; j < n_ + 2; ++j) b[j] -= a[j] * f;
      b[s] = a[s] * f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) tab_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) tab_[i][s] *= -inv;
    tab_[r][s] = inv;
    std::swap(row_[r], col_[s]);
  }

  // Optimizes objective row `obj`; returns false when unbounded.
  bool run(int obj, bool allow_artificial) {
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (!allow_artificial && col_[j] == -1) continue;
        if (s == -1 || std::make_pair(tab_[obj][j], col_[j]) <
                           std::make_pair(tab_[obj][s], col_[s]))
          s = j;
      }
      if (s == -1 || tab_[obj][s] >= -eps_) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][s] <= eps_) continue;
        if (r == -1 ||
            std::make_pair(tab_[i][n_ + 1] / tab_[i][s], row_[i]) <
                std::make_pair(tab_[r][n_ + 1] / tab_[r][s], row_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  double eps_;
  std::vector<int> col_, row_;
  std::vector<Vec> tab_;
};

// maximize c'y s.t. A y <= b with free variables (internal sign split).
inline LpResult lp_max_free(const std::vector<Vec>& a, const Vec& b,
                            const Vec& c, double eps = 1e-9) {
  const int m = static_cast<int>(b.size());
  const int n = static_cast<int>(c.size());
  std::vector<Vec> a2(m, Vec(2 * n));
  Vec c2(2 * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      a2[i][j] = a[i][j];
      a2[i][n + j] = -a[i][j];
    }
  for (int j = 0; j < n; ++j) {
    c2[j] = c[j];
    c2[n + j] = -c[j];
  }
  LpResult res = SimplexTableau(a2, b, c2, eps).solve();
  if (res.status == LpStatus::kInfeasible) return res;
  Vec x(n);
  for (int j = 0; j < n; ++j) x[j] = res.x[j] - res.x[n + j];
  res.x = std::move(x);
  return res;
}

// Assembles the inequality rows of a polyhedron (equalities as row pairs).
inline void polyhedron_rows(const Polyhedron& q, std::vector<Vec>& a, Vec& b) {
  for (const Halfspace& h : q.halfspaces) {
    a.push_back(h.normal);
    b.push_back(h.bound);
  }
  for (const LinearEquality& e : q.equalities) {
    a.push_back(e.normal);
    b.push_back(e.value);
    a.push_back(scaled(e.normal, -1.0));
    b.push_back(-e.value);
  }
}

}  // namespace detail

// Any point of Q, or nullopt when Q is empty as a set.
inline std::optional<Vec> feasible_point(const Polyhedron& q,
                                         const Options& opts = {}) {
  if (q.dim == 0) {
    for (const Halfspace& h : q.halfspaces)
      if (h.bound < -opts.tol_feas) return std::nullopt;
    for (const LinearEquality& e : q.equalities)
      if (std::fabs(e.value) > opts.tol_feas) return std::nullopt;
    return Vec{};
  }
  if (q.halfspaces.empty() && q.equalities.empty()) return Vec(q.dim, 0.0);
  std::vector<Vec> a;
  Vec b;
  detail::polyhedron_rows(q, a, b);
  detail::LpResult res =
      detail::lp_max_free(a, b, Vec(q.dim, 0.0), opts.tol_feas);
  if (res.status == detail::LpStatus::kInfeasible) return std::nullopt;
  return res.x;
}

// ---------------------------------------------------------------------------
// Minimum-norm point (Wolfe's method)
// ---------------------------------------------------------------------------

struct MinNormResult {
  Vec point;
  double dist = 0.0;
};

namespace detail {

// Coordinates of the norm minimizer over the affine hull of the corral.
inline bool affine_minimizer(const std::vector<const Vec*>& pts, Vec& coeff) {
  const int k = static_cast<int>(pts.size());
  std::vector<Vec> sys(k + 1, Vec(k + 1, 0.0));
  Vec rhs(k + 1, 0.0);
  rhs[0] = 1.0;
  for (int i = 0; i < k; ++i) {
    sys[0][i + 1] = 1.0;
    sys[i + 1][0] = 1.0;
    for (int j = 0; j < k; ++j)
      sys[i + 1][j + 1] = 2.0 * dot(*pts[i], *pts[j]);
  }
  Vec sol;
  if (!solve_square(std::move(sys), std::move(rhs), sol)) return false;
  coeff.assign(sol.begin() + 1, sol.end());
  return true;
}

}  // namespace detail

// Nearest point of conv(generators) to the origin. Throws
// ComputationalError (carrying the best iterate) if the iteration cap
// 10*m*n is exhausted without meeting the optimality certificate.
inline MinNormResult min_norm_point(const Polytope& p,
                                    const Options& opts = {}) {
  if (p.generators.empty())
    throw std::invalid_argument("min_norm_point: empty polytope");
  const int n = p.dim;
  const int m = static_cast<int>(p.generators.size());
  for (const Vec& g : p.generators) require_dim(g, n, "min_norm_point");

  double scale = 1.0;
  for (const Vec& g : p.generators) scale = std::max(scale, norm_sq(g));
  const double tol_opt = opts.tol_geo * scale;

  int best = 0;
  for (int j = 1; j < m; ++j)
    if (norm_sq(p.generators[j]) < norm_sq(p.generators[best])) best = j;

  std::vector<int> corral{best};
  Vec lambda{1.0};
  Vec x = p.generators[best];

  const int cap = std::max(32, 10 * m * n);
  for (int iter = 0; iter < cap; ++iter) {
    int j = 0;
    for (int t = 1; t < m; ++t)
      if (dot(x, p.generators[t]) < dot(x, p.generators[j])) j = t;
    if (dot(x, p.generators[j]) >= norm_sq(x) - tol_opt)
      return {x, norm(x)};
    if (std::find(corral.begin(), corral.end(), j) != corral.end())
      return {x, norm(x)};  // no further progress possible

    corral.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor <= static_cast<int>(corral.size()); ++minor) {
      std::vector<const Vec*> pts;
      for (int idx : corral) pts.push_back(&p.generators[idx]);
      Vec alpha;
      if (!detail::affine_minimizer(pts, alpha)) {
        // affinely dependent corral: drop the newest point and stop the cycle
        corral.pop_back();
        lambda.pop_back();
        break;
      }
      double amin = *std::min_element(alpha.begin(), alpha.end());
      if (amin > -1e-12) {
        for (double& v : alpha) v = std::max(v, 0.0);
        lambda = alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double gap = lambda[i] - alpha[i];
        if (gap > 1e-15) theta = std::min(theta, lambda[i] / gap);
      }
      theta = std::clamp(theta, 0.0, 1.0);
      for (std::size_t i = 0; i < alpha.size(); ++i)
        lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[i];
      int drop = static_cast<int>(
          std::min_element(lambda.begin(), lambda.end()) - lambda.begin());
      for (int i = static_cast<int>(lambda.size()) - 1; i >= 0; --i) {
        if (lambda[i] <= 1e-12 || i == drop) {
          corral.erase(corral.begin() + i);
          lambda.erase(lambda.begin() + i);
        }
      }
      if (corral.empty()) {  // numerical fallback, should not happen
        corral.push_back(j);
        lambda.assign(1, 1.0);
        break;
      }
    }
    x.assign(n, 0.0);
    for (std::size_t i = 0; i < corral.size(); ++i)
      axpy(lambda[i], p.generators[corral[i]], x);
  }
  throw ComputationalError("min_norm_point: iteration cap exceeded", x,
                           norm(x));
}

inline double distance_to_polytope(const Polytope& p, const Vec& q,
                                   const Options& opts = {}) {
  require_dim(q, p.dim, "distance_to_polytope");
  Polytope shifted{p.dim, {}};
  shifted.generators.reserve(p.generators.size());
  for (const Vec& g : p.generators) shifted.generators.push_back(sub(g, q));
  return min_norm_point(shifted, opts).dist;
}

// Nearest point of conv(generators) to q.
inline MinNormResult project_onto_polytope(const Polytope& p, const Vec& q,
                                           const Options& opts = {}) {
  Polytope shifted{p.dim, {}};
  shifted.generators.reserve(p.generators.size());
  for (const Vec& g : p.generators) shifted.generators.push_back(sub(g, q));
  MinNormResult r = min_norm_point(shifted, opts);
  return {add(r.point, q), r.dist};
}

inline bool contains(const Polytope& p, const Vec& q,
                     const Options& opts = {}) {
  return distance_to_polytope(p, q, opts) <= opts.tol_geo * 10.0;
}

// ---------------------------------------------------------------------------
// Affine hull, facets, boundary distance
// ---------------------------------------------------------------------------

struct AffineHull {
  Vec origin;
  std::vector<Vec> basis;  // orthonormal directions

  int dim() const { return static_cast<int>(basis.size()); }
};

inline AffineHull affine_hull(const Polytope& p, const Options& opts = {}) {
  AffineHull hull;
  hull.origin = p.generators.front();
  std::vector<Vec> diffs;
  for (std::size_t i = 1; i < p.generators.size(); ++i)
    diffs.push_back(sub(p.generators[i], hull.origin));
  hull.basis = orthonormal_span(diffs, opts.tol_geo * 100.0);
  return hull;
}

// All facets of P relative to its affine hull, by brute force over
// generator subsets spanning candidate supporting hyperplanes.
inline FacetList facet_enumeration(const Polytope& p,
                                   const Options& opts = {}) {
  if (static_cast<int>(p.generators.size()) > opts.max_generators)
    throw ComputationalError("facet_enumeration: generator cap exceeded");
  const AffineHull hull = affine_hull(p, opts);
  const int d = hull.dim();
  if (d == 0) return {};

  const int m = static_cast<int>(p.generators.size());
  std::vector<Vec> coords(m);
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    coords[i].resize(d);
    const Vec diff = sub(p.generators[i], hull.origin);
    for (int j = 0; j < d; ++j) coords[i][j] = dot(diff, hull.basis[j]);
    scale = std::max(scale, norm(coords[i]));
  }
  const double tol = opts.tol_feas * scale * 100.0;

  FacetList facets;
  std::set<std::vector<int>> seen;
  std::vector<int> idx = detail::first_subset(d);
  do {
    std::vector<Vec> span;
    for (int t = 1; t < d; ++t)
      span.push_back(sub(coords[idx[t]], coords[idx[0]]));
    std::vector<Vec> span_basis = orthonormal_span(span, opts.tol_geo * 100.0);
    if (static_cast<int>(span_basis.size()) != d - 1) continue;
    std::vector<Vec> nrm = orthonormal_complement(span_basis, d);
    if (nrm.size() != 1) continue;
    Vec nu = nrm[0];
    const double h = dot(nu, coords[idx[0]]);

    bool all_below = true, all_above = true;
    for (int g = 0; g < m; ++g) {
      const double v = dot(nu, coords[g]);
      if (v > h + tol) all_below = false;
      if (v < h - tol) all_above = false;
    }
    if (!all_below && !all_above) continue;
    double off = h;
    if (!all_below) {
      nu = scaled(nu, -1.0);
      off = -h;
    }
    std::vector<int> incident;
    for (int g = 0; g < m; ++g)
      if (std::fabs(dot(nu, coords[g]) - off) <= tol) incident.push_back(g);
    if (!seen.insert(incident).second) continue;

    Facet facet;
    facet.normal = Vec(p.dim, 0.0);
    for (int j = 0; j < d; ++j) axpy(nu[j], hull.basis[j], facet.normal);
    facet.offset = dot(facet.normal, hull.origin) + off;
    facet.vertex_indices = std::move(incident);
    facets.push_back(std::move(facet));
  } while (detail::next_subset(idx, m));
  return facets;
}

// Interior in the whole space: the affine hull must be full-dimensional and
// q must clear every facet with margin above tol_feas.
inline bool interior_contains(const Polytope& p, const Vec& q,
                              const Options& opts = {}) {
  require_dim(q, p.dim, "interior_contains");
  const AffineHull hull = affine_hull(p, opts);
  if (hull.dim() != p.dim) return false;
  for (const Facet& f : facet_enumeration(p, opts))
    if (dot(f.normal, q) >= f.offset - opts.tol_feas) return false;
  return true;
}

// Distance from q to the boundary of P taken in the whole space: a polytope
// with empty interior is its own boundary.
inline double boundary_distance(const Polytope& p, const Vec& q,
                                const Options& opts = {}) {
  require_dim(q, p.dim, "boundary_distance");
  const AffineHull hull = affine_hull(p, opts);
  if (hull.dim() < p.dim) return distance_to_polytope(p, q, opts);
  const double outer = distance_to_polytope(p, q, opts);
  if (outer > opts.tol_geo * 10.0) return outer;
  double best = kInf;
  for (const Facet& f : facet_enumeration(p, opts)) {
    Polytope face{p.dim, {}};
    for (int idx : f.vertex_indices)
      face.generators.push_back(p.generators[idx]);
    best = std::min(best, distance_to_polytope(face, q, opts));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Strict LP feasibility
// ---------------------------------------------------------------------------

struct StrictRow {
  Vec normal;
  double bound = 0.0;
  bool strict = false;  // <normal, x> < bound instead of <=
};

struct StrictSystem {
  int dim = 0;
  std::vector<StrictRow> rows;
  std::vector<LinearEquality> equalities;
};

struct StrictFeasibility {
  bool feasible = false;
  std::optional<Vec> witness;
  double slack = 0.0;
};

// Decides the mixed strict/non-strict system by maximizing a common slack s
// on the strict rows; feasible iff the optimum exceeds tol_feas. The slack
// is capped at 1 so an unbounded slack reports as feasible with slack 1.
inline StrictFeasibility strict_lp_feasible(const StrictSystem& sys,
                                            const Options& opts = {}) {
  const int n = sys.dim;
  std::vector<Vec> a;
  Vec b;
  auto push = [&](Vec normal, double s_coeff, double bound) {
    normal.push_back(s_coeff);
    a.push_back(std::move(normal));
    b.push_back(bound);
  };
  for (const StrictRow& row : sys.rows)
    push(row.normal, row.strict ? 1.0 : 0.0, row.bound);
  for (const LinearEquality& eq : sys.equalities) {
    push(eq.normal, 0.0, eq.value);
    push(scaled(eq.normal, -1.0), 0.0, -eq.value);
  }
  push(Vec(n, 0.0), 1.0, 1.0);  // slack cap

  Vec c(n + 1, 0.0);
  c[n] = 1.0;
  detail::LpResult res = detail::lp_max_free(a, b, c, opts.tol_feas);
  StrictFeasibility out;
  if (res.status == detail::LpStatus::kInfeasible) return out;
  if (res.status == detail::LpStatus::kUnbounded)
    throw ComputationalError("strict_lp_feasible: capped slack unbounded");
  out.slack = res.value;
  if (res.value > opts.tol_feas) {
    out.feasible = true;
    out.witness = Vec(res.x.begin(), res.x.begin() + n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection onto an H-polyhedron
// ---------------------------------------------------------------------------

struct Projection {
  std::optional<Vec> point;
  double dist = kInf;
};

// Euclidean projector with the active-set enumeration prepared once, so a
// fixed polyhedron can absorb many queries cheaply (the Monte-Carlo
// estimators project every sample onto the same sublevel set).
class PolyhedronProjector {
 public:
  explicit PolyhedronProjector(Polyhedron q, const Options& opts = {})
      : q_(std::move(q)), opts_(opts), n_(q_.dim) {
    std::optional<Vec> feas = feasible_point(q_, opts_);
    empty_ = !feas.has_value();
    if (empty_) return;

    // independent equality rows first
    std::vector<Vec> eq_basis;
    for (const LinearEquality& e : q_.equalities) {
      Vec v = e.normal;
      for (const Vec& q2 : eq_basis) axpy(-dot(v, q2), q2, v);
      if (norm(v) > opts_.tol_geo * 100.0) {
        eq_basis.push_back(scaled(v, 1.0 / norm(v)));
        eq_rows_.push_back(static_cast<int>(&e - q_.equalities.data()));
      }
    }
    const int ne = static_cast<int>(eq_rows_.size());
    const int ni = static_cast<int>(q_.halfspaces.size());
    const int max_active = n_ - ne;

    for (int k = 0; k <= std::min(max_active, ni); ++k) {
      std::vector<int> idx = detail::first_subset(k);
      if (k == 0) {
        add_candidate({});
      } else {
        do {
          add_candidate(idx);
        } while (detail::next_subset(idx, ni));
      }
    }
  }

  bool empty_set() const { return empty_; }
  const Polyhedron& polyhedron() const { return q_; }

  Projection operator()(const Vec& x) const {
    require_dim(x, n_, "PolyhedronProjector");
    if (empty_) return {};
    Vec rhs, lam, y(n_);
    for (const Candidate& cand : candidates_) {
      const int k = static_cast<int>(cand.rows.size());
      if (k == 0) {
        if (primal_feasible(x)) return {x, 0.0};
        continue;
      }
      rhs.resize(k);
      for (int i = 0; i < k; ++i)
        rhs[i] = dot(*cand.rows[i], x) - cand.rhs[i];
      if (!cand.solve(rhs, lam)) continue;
      bool sign_ok = true;
      for (int i = cand.first_ineq; i < k; ++i)
        if (lam[i] < -tol_mult()) {
          sign_ok = false;
          break;
        }
      if (!sign_ok) continue;
      y = x;
      for (int i = 0; i < k; ++i) axpy(-lam[i], *cand.rows[i], y);
      if (!primal_feasible(y)) continue;
      return {y, distance(x, y)};
    }
    throw ComputationalError(
        "PolyhedronProjector: no KKT-certified active set found");
  }

 private:
  struct Candidate {
    std::vector<const Vec*> rows;
    Vec rhs;
    int first_ineq = 0;           // rows before this index are equalities
    std::vector<Vec> lu;          // factored Gram matrix
    std::vector<int> perm;

    // LU with partial pivoting, done once per subset.
    bool factor() {
      const int k = static_cast<int>(rows.size());
      lu.assign(k, Vec(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) lu[i][j] = dot(*rows[i], *rows[j]);
      perm.resize(k);
      double scale = 1.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          scale = std::max(scale, std::fabs(lu[i][j]));
      for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
          if (std::fabs(lu[r][col]) > std::fabs(lu[piv][col])) piv = r;
        if (std::fabs(lu[piv][col]) <= 1e-12 * scale) return false;
        std::swap(lu[piv], lu[col]);
        perm[col] = piv;
        const double inv = 1.0 / lu[col][col];
        for (int r = col + 1; r < k; ++r) {
          const double f = lu[r][col] * inv;
          lu[r][col] = f;
          for (int c = col + 1; c < k; ++c) lu[r][c] -= f * lu[col][c];
        }
      }
      return true;
    }

    bool solve(Vec b, Vec& out) const {
      const int k = static_cast<int>(rows.size());
      for (int col = 0; col < k; ++col) {
        std::swap(b[col], b[perm[col]]);
        for (int r = col + 1; r < k; ++r) b[r] -= lu[r][col] * b[col];
      }
      out.assign(k, 0.0);
      for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < k; ++c) s -= lu[r][c] * out[c];
        out[r] = s / lu[r][r];
      }
      return true;
    }
  };

  void add_candidate(const std::vector<int>& ineq_idx) {
    Candidate cand;
    for (int e : eq_rows_) {
      cand.rows.push_back(&q_.equalities[e].normal);
      cand.rhs.push_back(q_.equalities[e].value);
    }
    cand.first_ineq = static_cast<int>(cand.rows.size());
    for (int i : ineq_idx) {
      cand.rows.push_back(&q_.halfspaces[i].normal);
      cand.rhs.push_back(q_.halfspaces[i].bound);
    }
    if (cand.rows.empty()) {
      candidates_.push_back(std::move(cand));
      return;
    }
    if (cand.factor()) candidates_.push_back(std::move(cand));
  }

  bool primal_feasible(const Vec& y) const {
    for (const Halfspace& h : q_.halfspaces)
      if (dot(h.normal, y) > h.bound + opts_.tol_feas * (1.0 + std::fabs(h.bound)))
        return false;
    for (const LinearEquality& e : q_.equalities)
      if (std::fabs(dot(e.normal, y) - e.value) >
          opts_.tol_feas * 100.0 * (1.0 + std::fabs(e.value)))
        return false;
    return true;
  }

  double tol_mult() const { return opts_.tol_feas * 100.0; }

  Polyhedron q_;
  Options opts_;
  int n_;
  bool empty_ = false;
  std::vector<int> eq_rows_;
  std::vector<Candidate> candidates_;
};

// One-off Euclidean projection; dist = +inf when Q is empty.
inline Projection project_onto_polyhedron(const Polyhedron& q, const Vec& x,
                                          const Options& opts = {}) {
  return PolyhedronProjector(q, opts)(x);
}

// ---------------------------------------------------------------------------
// Recession cone and vertices
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Vec> polyhedron_normals(const Polyhedron& q) {
  std::vector<Vec> rows;
  for (const Halfspace& h : q.halfspaces) rows.push_back(h.normal);
  for (const LinearEquality& e : q.equalities) rows.push_back(e.normal);
  return rows;
}

}  // namespace detail

// Orthonormal basis of the lineality space {r : all normals orthogonal to r}.
inline std::vector<Vec> lineality_space(const Polyhedron& q,
                                        const Options& opts = {}) {
  std::vector<Vec> span =
      orthonormal_span(detail::polyhedron_normals(q), opts.tol_geo * 100.0);
  return orthonormal_complement(span, q.dim);
}

struct RecessionInfo {
  bool unbounded = false;
  std::optional<Vec> direction;
};

// Detects a nontrivial recession direction with one LP per signed coordinate
// over the unit box shell.
inline RecessionInfo recession_nontrivial(const Polyhedron& q,
                                          const Options& opts = {}) {
  const int n = q.dim;
  std::vector<Vec> a;
  Vec b;
  for (const Halfspace& h : q.halfspaces) {
    a.push_back(h.normal);
    b.push_back(0.0);
  }
  for (const LinearEquality& e : q.equalities) {
    a.push_back(e.normal);
    b.push_back(0.0);
    a.push_back(scaled(e.normal, -1.0));
    b.push_back(0.0);
  }
  for (int j = 0; j < n; ++j) {
    Vec box(n, 0.0);
    box[j] = 1.0;
    a.push_back(box);
    b.push_back(1.0);
    a.push_back(scaled(box, -1.0));
    b.push_back(1.0);
  }
  for (int j = 0; j < n; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vec c(n, 0.0);
      c[j] = sign;
      detail::LpResult res = detail::lp_max_free(a, b, c, opts.tol_feas);
      if (res.status == detail::LpStatus::kOptimal &&
          res.value > opts.tol_feas * 100.0) {
        Vec dir = scaled(res.x, 1.0 / norm(res.x));
        return {true, dir};
      }
    }
  }
  return {false, std::nullopt};
}

// Vertices by brute force over row subsets of size dim.
inline std::vector<Vec> vertex_enumeration(const Polyhedron& q,
                                           const Options& opts = {}) {
  const int n = q.dim;
  std::vector<Vec> normals = detail::polyhedron_normals(q);
  Vec rhs;
  for (const Halfspace& h : q.halfspaces) rhs.push_back(h.bound);
  for (const LinearEquality& e : q.equalities) rhs.push_back(e.value);
  const int rows = static_cast<int>(normals.size());
  if (rows > opts.max_rows)
    throw ComputationalError("vertex_enumeration: row cap exceeded");
  if (n == 0) return {Vec{}};
  std::vector<Vec> vertices;
  if (rows < n) return vertices;

  double scale = 1.0;
  for (const Vec& v : normals) scale = std::max(scale, norm(v));
  std::vector<int> idx = detail::first_subset(n);
  do {
    std::vector<Vec> sys(n);
    Vec b(n);
    for (int i = 0; i < n; ++i) {
      sys[i] = normals[idx[i]];
      b[i] = rhs[idx[i]];
    }
    Vec x;
    if (!solve_square(std::move(sys), std::move(b), x, 1e-10)) continue;
    bool ok = true;
    for (const Halfspace& h : q.halfspaces)
      if (dot(h.normal, x) >
          h.bound + opts.tol_feas * 100.0 * (1.0 + std::fabs(h.bound))) {
        ok = false;
        break;
      }
    if (ok)
      for (const LinearEquality& e : q.equalities)
        if (std::fabs(dot(e.normal, x) - e.value) >
            opts.tol_feas * 100.0 * (1.0 + std::fabs(e.value))) {
          ok = false;
          break;
        }
    if (!ok) continue;
    bool dup = false;
    for (const Vec& v : vertices)
      if (distance(v, x) <= 1e-7 * (1.0 + norm(x))) {
        dup = true;
        break;
      }
    if (!dup) vertices.push_back(std::move(x));
  } while (detail::next_subset(idx, rows));
  return vertices;
}

// Extreme rays of the recession cone, assuming trivial lineality (callers
// quotient the lineality space out first). Unit directions, deduplicated.
inline std::vector<Vec> recession_extreme_rays(const Polyhedron& q,
                                               const Options& opts = {}) {
  const int n = q.dim;
  std::vector<Vec> ineq;
  for (const Halfspace& h : q.halfspaces) ineq.push_back(h.normal);
  std::vector<Vec> eqs;
  for (const LinearEquality& e : q.equalities) eqs.push_back(e.normal);

  auto cone_ok = [&](const Vec& r) {
    for (const Vec& a : ineq)
      if (dot(a, r) > opts.tol_feas * 100.0) return false;
    for (const Vec& e : eqs)
      if (std::fabs(dot(e, r)) > opts.tol_feas * 100.0) return false;
    return true;
  };

  std::vector<Vec> rays;
  auto push_ray = [&](Vec r) {
    const double nr = norm(r);
    if (nr <= 1e-12) return;
    r = scaled(r, 1.0 / nr);
    for (const Vec& known : rays)
      if (dot(known, r) > 1.0 - 1e-9) return;
    rays.push_back(std::move(r));
  };

  const int ni = static_cast<int>(ineq.size());
  for (int k = 0; k <= std::min(n - 1, ni); ++k) {
    std::vector<int> idx = detail::first_subset(k);
    bool more = true;
    while (more) {
      std::vector<Vec> stack = eqs;
      for (int i : idx) stack.push_back(ineq[i]);
      std::vector<Vec> span = orthonormal_span(stack, opts.tol_geo * 100.0);
      std::vector<Vec> null = orthonormal_complement(span, n);
      if (null.size() == 1) {
        if (cone_ok(null[0])) push_ray(null[0]);
        Vec neg = scaled(null[0], -1.0);
        if (cone_ok(neg)) push_ray(std::move(neg));
      }
      more = k > 0 && detail::next_subset(idx, ni);
      if (k == 0) more = false;
    }
  }
  return rays;
}

// Extreme rays plus signed lineality basis vectors: every recession
// direction is a nonnegative combination of these.
inline std::vector<Vec> recession_generators(const Polyhedron& q,
                                             const Options& opts = {}) {
  std::vector<Vec> lin = lineality_space(q, opts);
  std::vector<Vec> gens;
  for (const Vec& l : lin) {
    gens.push_back(l);
    gens.push_back(scaled(l, -1.0));
  }
  if (lin.empty()) {
    for (Vec& r : recession_extreme_rays(q, opts)) gens.push_back(std::move(r));
    return gens;
  }
  // reduce to the orthogonal complement of the lineality space
  std::vector<Vec> basis = orthonormal_complement(lin, q.dim);
  const int d = static_cast<int>(basis.size());
  if (d == 0) return gens;
  Polyhedron reduced;
  reduced.dim = d;
  auto to_reduced = [&](const Vec& v) {
    Vec w(d);
    for (int j = 0; j < d; ++j) w[j] = dot(v, basis[j]);
    return w;
  };
  for (const Halfspace& h : q.halfspaces)
    reduced.halfspaces.push_back({to_reduced(h.normal), 0.0});
  for (const LinearEquality& e : q.equalities)
    reduced.equalities.push_back({to_reduced(e.normal), 0.0});
  for (const Vec& r : recession_extreme_rays(reduced, opts)) {
    Vec lifted(q.dim, 0.0);
    for (int j = 0; j < d; ++j) axpy(r[j], basis[j], lifted);
    gens.push_back(std::move(lifted));
  }
  return gens;
}

}  // namespace ebound
