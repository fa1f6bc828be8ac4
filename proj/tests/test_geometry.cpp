#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ebound/geometry.hpp"
#include "ebound/oracle.hpp"

using namespace ebound;
using Catch::Approx;

namespace {

Polytope hull(int dim, std::vector<Vec> gens) {
  return Polytope{dim, std::move(gens)};
}

Polytope random_polytope(std::mt19937_64& rng, int max_dim, int max_gens) {
  std::uniform_int_distribution<int> dim_d(1, max_dim);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  const int n = dim_d(rng);
  std::uniform_int_distribution<int> gen_d(1, max_gens);
  const int m = gen_d(rng);
  Polytope p{n, {}};
  for (int i = 0; i < m; ++i) {
    Vec g(n);
    for (double& v : g) v = coef(rng);
    p.generators.push_back(std::move(g));
  }
  return p;
}

}  // namespace

TEST_CASE("min_norm_point on hand instances") {
  auto r1 = min_norm_point(hull(1, {{-2.0}, {-1.0}}));
  CHECK(r1.dist == Approx(1.0).margin(1e-9));
  CHECK(r1.point[0] == Approx(-1.0).margin(1e-9));

  auto r2 = min_norm_point(hull(2, {{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(r2.dist == Approx(std::sqrt(0.5)).margin(1e-9));
  CHECK(r2.point[0] == Approx(0.5).margin(1e-8));
  CHECK(r2.point[1] == Approx(0.5).margin(1e-8));

  // origin inside the hull
  auto r3 = min_norm_point(hull(2, {{1.0, 1.0}, {-1.0, 1.0}, {0.0, -1.0}}));
  CHECK(r3.dist == Approx(0.0).margin(1e-7));
}

TEST_CASE("distance and membership") {
  Polytope interval = hull(1, {{1.0}, {2.5}});
  CHECK(distance_to_polytope(interval, {0.5}) == Approx(0.5).margin(1e-9));
  CHECK(distance_to_polytope(interval, {2.0}) == Approx(0.0).margin(1e-9));
  CHECK(distance_to_polytope(hull(2, {{2.0, 0.0}}), {0.0, 0.0}) ==
        Approx(2.0).margin(1e-9));

  Polytope wide = hull(1, {{-1.0}, {2.0}});
  CHECK(contains(wide, {0.0}));
  CHECK(interior_contains(wide, {0.0}));

  Polytope unit = hull(1, {{0.0}, {1.0}});
  CHECK(contains(unit, {0.0}));
  CHECK_FALSE(interior_contains(unit, {0.0}));

  Polytope flat = hull(2, {{0.0, 0.0}, {1.0, 0.0}});
  CHECK(contains(flat, {0.5, 0.0}));
  CHECK_FALSE(interior_contains(flat, {0.5, 0.0}));
}

TEST_CASE("facet enumeration") {
  Polytope square =
      hull(2, {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}});
  FacetList fs = facet_enumeration(square);
  REQUIRE(fs.size() == 4);
  for (const Facet& f : fs) {
    CHECK(f.offset == Approx(1.0).margin(1e-8));
    CHECK(norm(f.normal) == Approx(1.0).margin(1e-10));
    CHECK(std::fabs(f.normal[0]) + std::fabs(f.normal[1]) ==
          Approx(1.0).margin(1e-8));
    CHECK(f.vertex_indices.size() == 2);
  }

  FacetList seg = facet_enumeration(hull(1, {{-2.0}, {-1.0}}));
  REQUIRE(seg.size() == 2);

  FacetList tri = facet_enumeration(hull(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}));
  CHECK(tri.size() == 3);
}

TEST_CASE("boundary distance") {
  CHECK(boundary_distance(hull(1, {{0.0}, {1.0}}), {0.0}) ==
        Approx(0.0).margin(1e-9));
  CHECK(boundary_distance(hull(1, {{-2.0}, {-1.0}}), {0.0}) ==
        Approx(1.0).margin(1e-9));
  Polytope box =
      hull(2, {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}});
  CHECK(boundary_distance(box, {0.0, 0.0}) == Approx(1.0).margin(1e-8));
  // lower-dimensional set is its own boundary
  CHECK(boundary_distance(hull(2, {{2.0, 0.0}}), {0.0, 0.0}) ==
        Approx(2.0).margin(1e-9));
}

TEST_CASE("strict LP feasibility") {
  StrictSystem sys;
  sys.dim = 1;
  sys.equalities.push_back({{-2.0}, 1.0});
  sys.rows.push_back({{-1.0}, 1.0, true});
  StrictFeasibility r = strict_lp_feasible(sys);
  REQUIRE(r.feasible);
  CHECK((*r.witness)[0] == Approx(-0.5).margin(1e-7));

  StrictSystem sys2;
  sys2.dim = 1;
  sys2.equalities.push_back({{-1.0}, 1.0});
  sys2.rows.push_back({{-2.0}, 1.0, true});
  CHECK_FALSE(strict_lp_feasible(sys2).feasible);

  StrictSystem sys3;
  sys3.dim = 1;
  sys3.rows.push_back({{1.0}, 0.0, true});
  sys3.rows.push_back({{-1.0}, 0.0, true});
  CHECK_FALSE(strict_lp_feasible(sys3).feasible);
}

TEST_CASE("projection onto polyhedron") {
  Polyhedron interval;
  interval.dim = 1;
  interval.halfspaces.push_back({{1.0}, 2.5});
  interval.halfspaces.push_back({{-1.0}, -1.0});

  Projection pr = project_onto_polyhedron(interval, {0.5});
  REQUIRE(pr.point.has_value());
  CHECK((*pr.point)[0] == Approx(1.0).margin(1e-9));
  CHECK(pr.dist == Approx(0.5).margin(1e-9));

  Projection inside = project_onto_polyhedron(interval, {2.0});
  CHECK(inside.dist == Approx(0.0).margin(1e-12));

  Polyhedron empty;
  empty.dim = 1;
  empty.halfspaces.push_back({{1.0}, 0.0});
  empty.halfspaces.push_back({{-1.0}, -1.0});
  Projection none = project_onto_polyhedron(empty, {0.0});
  CHECK(none.dist == kInf);
  CHECK_FALSE(none.point.has_value());
}

TEST_CASE("recession and vertices") {
  Polyhedron ray;
  ray.dim = 1;
  ray.halfspaces.push_back({{1.0}, -1.0});  // x <= -1
  RecessionInfo ri = recession_nontrivial(ray);
  REQUIRE(ri.unbounded);
  CHECK((*ri.direction)[0] == Approx(-1.0).margin(1e-9));

  Polyhedron interval;
  interval.dim = 1;
  interval.halfspaces.push_back({{1.0}, 2.5});
  interval.halfspaces.push_back({{-1.0}, -1.0});
  CHECK_FALSE(recession_nontrivial(interval).unbounded);
  std::vector<Vec> vs = vertex_enumeration(interval);
  REQUIRE(vs.size() == 2);
  std::vector<double> xs{vs[0][0], vs[1][0]};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == Approx(1.0).margin(1e-9));
  CHECK(xs[1] == Approx(2.5).margin(1e-9));

  Polyhedron whole;
  whole.dim = 2;
  CHECK(recession_nontrivial(whole).unbounded);
}

TEST_CASE("extreme rays of pointed recession cones") {
  // cell x >= -1 in 1-D: single ray +1
  Polyhedron q;
  q.dim = 1;
  q.halfspaces.push_back({{-1.0}, 1.0});
  auto rays = recession_extreme_rays(q);
  REQUIRE(rays.size() == 1);
  CHECK(rays[0][0] == Approx(1.0));

  // positive quadrant recession in 2-D
  Polyhedron quad;
  quad.dim = 2;
  quad.halfspaces.push_back({{-1.0, 0.0}, 0.0});
  quad.halfspaces.push_back({{0.0, -1.0}, 0.0});
  auto rays2 = recession_extreme_rays(quad);
  CHECK(rays2.size() == 2);
}

TEST_CASE("min_norm_point optimality certificate (property)") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 60; ++trial) {
    Polytope p = random_polytope(rng, 3, 8);
    MinNormResult r = min_norm_point(p);
    for (const Vec& g : p.generators)
      CHECK(dot(r.point, sub(g, r.point)) >= -1e-6);
  }
}

TEST_CASE("min_norm_point agrees with the brute-force oracle (property)") {
  std::mt19937_64 rng(77001);
  for (int trial = 0; trial < 40; ++trial) {
    Polytope p = random_polytope(rng, 3, 8);
    const double exact = min_norm_point(p).dist;
    const double brute = brute_min_norm(p, 16);
    CHECK(brute >= exact - 1e-9);
    CHECK(std::fabs(brute - exact) <= 1e-6);
  }
}

TEST_CASE("boundary distance properties (property)") {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    Polytope p = random_polytope(rng, 3, 8);
    Vec q(p.dim);
    for (double& v : q) v = coef(rng);
    const double bd = boundary_distance(p, q);
    const double d = distance_to_polytope(p, q);
    // never farther than any generator on the boundary (interior generators
    // of a fat hull can be closer than the boundary itself)
    if (affine_hull(p).dim() < p.dim) {
      for (const Vec& g : p.generators) CHECK(bd <= distance(q, g) + 1e-7);
    } else {
      for (const Facet& fc : facet_enumeration(p))
        for (int idx : fc.vertex_indices)
          CHECK(bd <= distance(q, p.generators[idx]) + 1e-7);
    }
    // membership matches vanishing distance
    CHECK(contains(p, q) == (d <= 1e-8));
    // outside the polytope both distances agree
    if (d > 1e-7) CHECK(bd == Approx(d).margin(1e-8));
  }
}

TEST_CASE("projection agrees with the feasible-grid oracle (property)") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    Polyhedron q;
    q.dim = n;
    const int rows = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < rows; ++i) {
      Vec a(n);
      for (double& v : a) v = coef(rng);
      q.halfspaces.push_back({a, coef(rng) + 4.0});
    }
    Vec x(n);
    for (double& v : x) v = coef(rng);
    Projection pr = project_onto_polyhedron(q, x);
    const double brute = brute_projection(q, x, 9);
    if (pr.dist == kInf) {
      CHECK(brute == kInf);
      continue;
    }
    REQUIRE(pr.point.has_value());
    CHECK(brute >= pr.dist - 1e-9);
    CHECK(std::fabs(brute - pr.dist) <= 2e-4 * (1.0 + pr.dist));
  }
}
