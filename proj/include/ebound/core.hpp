#pragma once

// Shared vector helpers, numeric options, error types, and the small dense
// linear-algebra kernels used by the geometry and slope modules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebound {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Global tolerances and enumeration caps. Every operation is a pure function
// of its inputs plus one of these; the defaults target desk-scale instances.
struct Options {
  double tol_active = 1e-9;  // active-set detection
  double tol_feas = 1e-9;    // feasibility / strictness margins
  double tol_geo = 1e-9;     // geometric kernels (min-norm point, membership)

  int max_enum_pieces = 20;  // subset enumeration is exponential in pieces
  int max_enum_dim = 6;
  int max_generators = 16;   // facet enumeration cap
  int max_rows = 24;         // vertex enumeration cap
  int max_tau_dim = 3;       // exact localized-slope computations
  int threads = 1;           // cap for internally parallel estimators
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (iteration cap, degenerate configuration). Carries the
// best iterate when the failing routine has one.
struct ComputationalError : std::runtime_error {
  explicit ComputationalError(const std::string& what)
      : std::runtime_error(what) {}
  ComputationalError(const std::string& what, Vec best, double value)
      : std::runtime_error(what), best_iterate(std::move(best)),
        best_value(value) {}

  std::optional<Vec> best_iterate;
  double best_value = std::numeric_limits<double>::quiet_NaN();
};

// ---------------------------------------------------------------------------
// Small-vector algebra
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

// y += t * x
inline void axpy(double t, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

inline double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(const Vec& a) {
  return std::all_of(a.begin(), a.end(),
                     [](double v) { return std::isfinite(v); });
}

inline void require_dim(const Vec& x, int n, const char* what) {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(n) + ", got " +
                                std::to_string(x.size()));
}

// ---------------------------------------------------------------------------
// Dense kernels (systems stay tiny: k <= max_rows)
// ---------------------------------------------------------------------------

// Solves A x = b with partial pivoting. Returns false when A is singular
// relative to `tol` times the largest entry magnitude.
inline bool solve_square(std::vector<Vec> a, Vec b, Vec& out,
                         double tol = 1e-12) {
  const int k = static_cast<int>(b.size());
  double scale = 0.0;
  for (const Vec& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double cutoff = tol * std::max(1.0, scale);

  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) <= cutoff) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const double inv = 1.0 / a[col][col];
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r][col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(k, 0.0);
  for (int r = k - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < k; ++c) s -= a[r][c] * out[c];
    out[r] = s / a[r][r];
  }
  return true;
}

// Orthonormal basis of span(rows), modified Gram-Schmidt with one
// re-orthogonalization pass. Vectors below `tol` (relative) are dropped.
inline std::vector<Vec> orthonormal_span(const std::vector<Vec>& rows,
                                         double tol = 1e-10) {
  std::vector<Vec> basis;
  double scale = 0.0;
  for (const Vec& r : rows) scale = std::max(scale, norm(r));
  if (scale == 0.0) return basis;
  const double cutoff = tol * scale;
  for (const Vec& r : rows) {
    Vec v = r;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : basis) axpy(-dot(v, q), q, v);
    const double nv = norm(v);
    if (nv > cutoff) basis.push_back(scaled(v, 1.0 / nv));
  }
  return basis;
}

// Orthonormal basis of the orthogonal complement of span(onb) in R^n.
inline std::vector<Vec> orthonormal_complement(const std::vector<Vec>& onb,
                                               int n, double tol = 1e-10) {
  std::vector<Vec> comp;
  for (int i = 0; i < n; ++i) {
    Vec v(n, 0.0);
    v[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& q : onb) axpy(-dot(v, q), q, v);
      for (const Vec& q : comp) axpy(-dot(v, q), q, v);
    }
    const double nv = norm(v);
    if (nv > tol) comp.push_back(scaled(v, 1.0 / nv));
  }
  return comp;
}

// Component of v inside span(onb).
inline Vec project_onto_span(const std::vector<Vec>& onb, const Vec& v) {
  Vec p(v.size(), 0.0);
  for (const Vec& q : onb) axpy(dot(v, q), q, p);
  return p;
}

namespace detail {

// Next k-subset of {0,..,m-1} in lexicographic order; false when exhausted.
inline bool next_subset(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == m - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

inline std::vector<int> first_subset(int k) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

}  // namespace ebound
