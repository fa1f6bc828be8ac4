#pragma once

// Independent brute-force and Monte-Carlo estimators: the ratio definitions
// of the local and global error bound moduli, a sampling estimator for the
// localized slope, and grid/subset searches for minimum-norm and projection.
// All estimators are deterministic in (seed, samples) via a counter-based
// generator, converge to the exact values from above, and never use the
// exact code paths they cross-check.

#include <thread>

#include "ebound/polyfun.hpp"

namespace ebound {

struct McConfig {
  std::uint64_t seed = 1;
  long samples = 100000;
  double radius = 1.0;    // local sampling ball / first box
  int shrink_levels = 5;  // geometric radius decay resp. growth
  double tol = 1e-9;
  int threads = 1;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform in [0,1), a pure function of (seed, counter).
inline double u01(std::uint64_t seed, std::uint64_t ctr) {
  return static_cast<double>(mix64(seed ^ mix64(ctr)) >> 11) * 0x1.0p-53;
}

inline void sample_box(Vec& out, const Vec& center, double radius,
                       std::uint64_t seed, std::uint64_t stream, long index) {
  const std::uint64_t base =
      (stream * 0x100000000ull + static_cast<std::uint64_t>(index)) * 16u;
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = center[j] + radius * (2.0 * u01(seed, base + j) - 1.0);
}

// Uniform in the Euclidean ball by rejection from the box; the attempt
// counter keeps the draw a pure function of the indices.
inline void sample_ball(Vec& out, const Vec& center, double radius,
                        std::uint64_t seed, std::uint64_t stream, long index) {
  const int n = static_cast<int>(out.size());
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t base =
        ((stream * 0x100000000ull + static_cast<std::uint64_t>(index)) * 64u +
         attempt) *
        16u;
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * u01(seed, base + j) - 1.0;
      out[j] = t;
      r2 += t * t;
    }
    if (r2 <= 1.0) {
      for (int j = 0; j < n; ++j) out[j] = center[j] + radius * out[j];
      return;
    }
  }
  out = center;  // unreachable in practice for n <= 6
}

// Minimum of fn(index, scratch) over [0, count), split over worker threads.
// The reduction is order-free, so the result is thread-count independent.
template <class Fn>
double parallel_min(long count, int dim, int threads, const Fn& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 4096) {
    Vec scratch(dim);
    double best = kInf;
    for (long i = 0; i < count; ++i) best = std::min(best, fn(i, scratch));
    return best;
  }
  const long chunk = (count + threads - 1) / threads;
  std::vector<double> partial(threads, kInf);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      Vec scratch(dim);
      double best = kInf;
      const long lo = t * chunk, hi = std::min<long>(count, lo + chunk);
      for (long i = lo; i < hi; ++i) best = std::min(best, fn(i, scratch));
      partial[t] = best;
    });
  }
  for (std::thread& th : pool) th.join();
  double best = kInf;
  for (double v : partial) best = std::min(best, v);
  return best;
}

}  // namespace detail

namespace detail {

// Euclidean projection of u onto the affine set {y : <a_j,y> = c_j} via
// Gram-Schmidt with the right-hand side carried along. Returns nullopt for
// an inconsistent system.
inline std::optional<Vec> project_affine(
    const std::vector<std::pair<Vec, double>>& rows, const Vec& u,
    double tol = 1e-9) {
  std::vector<Vec> basis;
  std::vector<double> values;
  for (const auto& [a, c] : rows) {
    Vec v = a;
    double r = c;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const double proj = dot(v, basis[i]);
        axpy(-proj, basis[i], v);
        if (pass == 0) r -= proj * values[i];
      }
    const double nv = norm(v);
    if (nv <= tol * (1.0 + norm(a))) {
      if (std::fabs(r) > tol * (1.0 + std::fabs(c))) return std::nullopt;
      continue;
    }
    basis.push_back(scaled(v, 1.0 / nv));
    values.push_back(r / nv);
  }
  Vec y = u;
  for (std::size_t i = 0; i < basis.size(); ++i)
    axpy(values[i] - dot(basis[i], y), basis[i], y);
  return y;
}

// Nearest point where the almost-active pieces at u agree exactly, or
// nullopt when they never agree. The pattern infima of the slope quantities
// often live on such lower-dimensional kinks, which plain box samples miss.
inline std::optional<Vec> snap_to_kink(const PolyhedralFunction& f,
                                       const Vec& u) {
  const double fu = evaluate(f, u);
  const double kappa = 0.1 * (1.0 + std::fabs(fu));
  const ActiveSet fat = active_set(f, u, kappa);
  if (fat.size() < 2) return std::nullopt;
  std::vector<std::pair<Vec, double>> rows;
  const AffinePiece& ref = f.pieces()[fat.front()];
  for (std::size_t t = 1; t < fat.size(); ++t) {
    const AffinePiece& p = f.pieces()[fat[t]];
    rows.emplace_back(sub(p.gradient, ref.gradient), p.offset - ref.offset);
  }
  return project_affine(rows, u);
}

}  // namespace detail

// Sampling surrogate for the liminf ratio f(x)/d(x,S_f) over x -> xbar with
// f(x) > 0: per-level minima on shrinking balls, reporting the last level.
// Kink snapping keeps approach directions of codimension one visible.
// Returns +inf when the final level has no positive sample.
inline double estimate_er_local(const PolyhedralFunction& f, const Vec& xbar,
                                const McConfig& cfg, const Options& opts = {}) {
  require_dim(xbar, f.dim(), "estimate_er_local");
  if (std::fabs(evaluate(f, xbar)) > opts.tol_active * 100.0)
    throw DomainError("estimate_er_local: f(xbar) must be 0");
  const PolyhedronProjector project(sublevel_polyhedron(f), opts);
  const long per_level =
      std::max<long>(1, cfg.samples / std::max(1, cfg.shrink_levels));
  auto ratio_at = [&](const Vec& x) {
    const double fx = evaluate(f, x);
    if (fx <= 0.0) return kInf;
    const double d = project(x).dist;
    return d > 0.0 ? fx / d : kInf;
  };
  double last = kInf;
  for (int level = 0; level < cfg.shrink_levels; ++level) {
    const double rad = cfg.radius * std::pow(0.5, level);
    last = detail::parallel_min(
        per_level, f.dim(), cfg.threads, [&](long i, Vec& x) {
          detail::sample_ball(x, xbar, rad, cfg.seed,
                              static_cast<std::uint64_t>(level) + 1, i);
          double value = ratio_at(x);
          std::optional<Vec> snapped = detail::snap_to_kink(f, x);
          if (snapped && distance(*snapped, xbar) <= rad)
            value = std::min(value, ratio_at(*snapped));
          return value;
        });
  }
  return last;
}

// Sampling surrogate for the global infimum of f(x)/d(x,S_f) over f(x) > 0,
// on an expanding box sequence. The infimum can be approached along kink
// edges receding to infinity, so samples are also snapped onto nearby
// kinks; every contribution is the exact ratio at a genuine violating
// point, keeping the estimate above the modulus.
inline double estimate_er_global(const PolyhedralFunction& f,
                                 const McConfig& cfg,
                                 const Options& opts = {}) {
  if (!feasible_point(sublevel_polyhedron(f), opts))
    throw DomainError("estimate_er_global: solution set is empty");
  const PolyhedronProjector project(sublevel_polyhedron(f), opts);
  const long per_level =
      std::max<long>(1, cfg.samples / std::max(1, cfg.shrink_levels));
  const Vec origin(f.dim(), 0.0);
  auto ratio_at = [&](const Vec& x) {
    const double fx = evaluate(f, x);
    if (fx <= 0.0) return kInf;
    const double d = project(x).dist;
    return d > 0.0 ? fx / d : kInf;
  };
  double best = kInf;
  for (int level = 0; level < cfg.shrink_levels; ++level) {
    const double rad = cfg.radius * std::pow(2.0, level);
    best = std::min(
        best,
        detail::parallel_min(
            per_level, f.dim(), cfg.threads, [&](long i, Vec& x) {
              detail::sample_box(x, origin, rad, cfg.seed,
                                 0x100u + static_cast<std::uint64_t>(level), i);
              double value = ratio_at(x);
              std::optional<Vec> snapped = detail::snap_to_kink(f, x);
              if (snapped) value = std::min(value, ratio_at(*snapped));
              return value;
            }));
  }
  return best;
}

// Sampling estimator for the localized slope (first branch): minimum of
// d(0, subdifferential(u)) over sampled u with f(u) >= -eps|u-x| - delta.
// Samples are also snapped onto nearby kinks, and the snapped point
// contributes when it stays inside the region; this reaches patterns
// supported on lower-dimensional kinks. Every contribution is an exact
// subdifferential distance at a region point, so the estimate converges to
// the localized slope from above.
inline double estimate_tau(const PolyhedralFunction& f, const Vec& x,
                           double eps, double delta, const McConfig& cfg,
                           const Options& opts = {}) {
  require_dim(x, f.dim(), "estimate_tau");
  if (std::fabs(evaluate(f, x)) > opts.tol_active * 100.0)
    throw DomainError("estimate_tau: f(x) must be 0");
  if (interior_contains(subdifferential(f, x, opts), Vec(f.dim(), 0.0), opts))
    throw DomainError("estimate_tau: second-branch point (0 interior to the "
                      "subdifferential); the exact computation applies");
  const long per_level =
      std::max<long>(1, cfg.samples / std::max(1, cfg.shrink_levels));
  auto in_region = [&](const Vec& u) {
    return evaluate(f, u) >= -eps * distance(u, x) - delta - cfg.tol;
  };
  auto sd_dist = [&](const Vec& u) {
    const Polytope sd = subdifferential(f, u, opts);
    if (sd.generators.size() == 1) return norm(sd.generators[0]);
    return min_norm_point(sd, opts).dist;
  };
  double best = kInf;
  for (int level = 0; level < cfg.shrink_levels; ++level) {
    const double rad = cfg.radius * std::pow(2.0, level);
    best = std::min(
        best,
        detail::parallel_min(
            per_level, f.dim(), cfg.threads, [&](long i, Vec& u) {
              detail::sample_box(u, x, rad, cfg.seed,
                                 0x200u + static_cast<std::uint64_t>(level), i);
              if (!in_region(u)) return kInf;
              double value = sd_dist(u);
              std::optional<Vec> snapped = detail::snap_to_kink(f, u);
              if (snapped && in_region(*snapped))
                value = std::min(value, sd_dist(*snapped));
              return value;
            }));
  }
  return best;
}

namespace detail {

// Visits all compositions of `total` into k nonnegative parts.
template <class Fn>
void for_each_composition(int total, int k, std::vector<int>& parts,
                          int pos, const Fn& fn) {
  if (pos == k - 1) {
    parts[pos] = total;
    fn(parts);
    return;
  }
  for (int v = 0; v <= total; ++v) {
    parts[pos] = v;
    for_each_composition(total - v, k, parts, pos + 1, fn);
  }
}

}  // namespace detail

// Grid/subset search for d(0, conv(generators)): convex combinations over a
// simplex grid per generator subset of size <= dim+1, followed by shrinking
// local grid rounds around the incumbent. Every candidate is a feasible
// convex combination, so the value converges to the distance from above.
inline double brute_min_norm(const Polytope& p, int grid) {
  if (p.generators.empty())
    throw std::invalid_argument("brute_min_norm: empty polytope");
  const int n = p.dim;
  const int m = static_cast<int>(p.generators.size());
  double best = kInf;

  for (int k = 1; k <= std::min(n + 1, m); ++k) {
    std::vector<int> idx = detail::first_subset(k);
    do {
      std::vector<const Vec*> pts;
      for (int i : idx) pts.push_back(&p.generators[i]);
      Vec point(n);
      auto value_at = [&](const Vec& lambda) {
        std::fill(point.begin(), point.end(), 0.0);
        for (int t = 0; t < k; ++t) axpy(lambda[t], *pts[t], point);
        return norm(point);
      };

      Vec incumbent(k, 1.0 / k);
      double local = value_at(incumbent);
      const int coarse = std::max(1, k <= 2 ? grid : std::min(grid, 14));
      std::vector<int> parts(k);
      Vec lambda(k);
      detail::for_each_composition(coarse, k, parts, 0, [&](const std::vector<int>& c) {
        for (int t = 0; t < k; ++t) lambda[t] = static_cast<double>(c[t]) / coarse;
        const double v = value_at(lambda);
        if (v < local) {
          local = v;
          incumbent = lambda;
        }
      });

      // local pattern search: zero-sum displacements from a composition
      // grid, clamped back to the simplex
      const int fine = std::max(2, std::min(grid, k <= 2 ? 16 : 12));
      double window = 1.0;
      for (int sweep = 0; sweep < 400 && window > 1e-11; ++sweep) {
        const Vec center = incumbent;
        bool improved = false;
        detail::for_each_composition(fine, k, parts, 0, [&](const std::vector<int>& c) {
          double sum = 0.0;
          for (int t = 0; t < k; ++t) {
            lambda[t] = std::max(
                0.0, center[t] + window * (static_cast<double>(c[t]) / fine -
                                           1.0 / k));
            sum += lambda[t];
          }
          if (sum <= 0.0) return;
          for (int t = 0; t < k; ++t) lambda[t] /= sum;
          const double v = value_at(lambda);
          if (v < local - 1e-15) {
            local = v;
            incumbent = lambda;
            improved = true;
          }
        });
        if (!improved) window *= 0.5;
      }
      best = std::min(best, local);
    } while (detail::next_subset(idx, m));
  }
  return best;
}

// Feasible-grid refinement around the best point found so far; the seed
// point comes from a phase-1 LP, and every accepted candidate satisfies the
// constraints, so the reported distance is an upper bound on the true one.
// Returns +inf when the polyhedron is empty.
inline double brute_projection(const Polyhedron& q, const Vec& x, int grid,
                               const Options& opts = {}) {
  require_dim(x, q.dim, "brute_projection");
  std::optional<Vec> seed = feasible_point(q, opts);
  if (!seed) return kInf;
  const int n = q.dim;
  auto feasible = [&](const Vec& y) {
    for (const Halfspace& h : q.halfspaces)
      if (dot(h.normal, y) > h.bound + 1e-12 * (1.0 + std::fabs(h.bound)))
        return false;
    for (const LinearEquality& e : q.equalities)
      if (std::fabs(dot(e.normal, y) - e.value) >
          1e-9 * (1.0 + std::fabs(e.value)))
        return false;
    return true;
  };

  Vec best = *seed;
  double best_d = distance(best, x);
  if (feasible(x)) return 0.0;
  const int g = std::max(2, std::min(grid, 9));
  double window = std::max(best_d, 1.0);
  Vec y(n);
  std::vector<int> digits(n, 0);
  for (int round = 0; round < 48; ++round) {
    const Vec center = best;
    std::fill(digits.begin(), digits.end(), 0);
    for (;;) {
      for (int j = 0; j < n; ++j)
        y[j] = center[j] + window * (2.0 * digits[j] / g - 1.0);
      if (feasible(y)) {
        const double d = distance(y, x);
        if (d < best_d) {
          best_d = d;
          best = y;
        }
      }
      int j = 0;
      while (j < n && ++digits[j] > g) digits[j++] = 0;
      if (j == n) break;
    }
    window *= 0.6;
  }
  return best_d;
}

}  // namespace ebound
