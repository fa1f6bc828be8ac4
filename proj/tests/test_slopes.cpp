#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ebound/slopes.hpp"

using namespace ebound;
using Catch::Approx;

namespace {

PolyhedralFunction e13() {
  return PolyhedralFunction(1, {{{-2.0}, -2.0}, {{-1.0}, -1.0}, {{2.0}, 5.0}});
}

PolyhedralFunction zero_fn() { return PolyhedralFunction(1, {{{0.0}, 0.0}}); }

PolyhedralFunction max0x() {
  return PolyhedralFunction(1, {{{0.0}, 0.0}, {{1.0}, 0.0}});
}

PolyhedralFunction max_x_neg1() {
  return PolyhedralFunction(1, {{{1.0}, 0.0}, {{0.0}, 1.0}});
}

PolyhedralFunction abs_fn() {
  return PolyhedralFunction(1, {{{1.0}, 0.0}, {{-1.0}, 0.0}});
}

// random instance with a pinned zero of f at xbar
std::pair<PolyhedralFunction, Vec> random_zeroed(std::mt19937_64& rng,
                                                 int max_dim = 2,
                                                 int max_pieces = 6) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  const int n = 1 + static_cast<int>(rng() % max_dim);
  const int m = 2 + static_cast<int>(rng() % (max_pieces - 1));
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < m; ++i) {
    Vec a(n);
    for (double& v : a) v = coef(rng);
    pieces.push_back({a, coef(rng)});
  }
  Vec xbar(n);
  for (double& v : xbar) v = pt(rng);
  PolyhedralFunction raw(n, pieces);
  const double shift = evaluate(raw, xbar);
  for (AffinePiece& p : pieces) p.offset += shift;
  return {PolyhedralFunction(n, std::move(pieces)), xbar};
}

}  // namespace

TEST_CASE("dee family") {
  auto fam = dee_family(e13(), {1.0});
  REQUIRE(fam.size() == 1);
  CHECK(fam[0] == ActiveSet{0});

  auto fam2 = dee_family(max0x(), {0.0});
  REQUIRE(fam2.size() == 1);
  CHECK(fam2[0] == ActiveSet{1});

  CHECK(dee_family(zero_fn(), {3.0}).empty());
}

TEST_CASE("local error bound modulus") {
  CHECK(local_error_bound_modulus(max0x(), {0.0}) == Approx(1.0).margin(1e-9));
  CHECK(local_error_bound_modulus(e13(), {1.0}) == Approx(2.0).margin(1e-9));
  CHECK(local_error_bound_modulus(zero_fn(), {0.7}) == kInf);
  CHECK_THROWS_AS(local_error_bound_modulus(e13(), {1.5}), DomainError);
}

TEST_CASE("local boundary slope") {
  CHECK(boundary_slope_local(max0x(), {0.0}) == Approx(0.0).margin(1e-9));
  CHECK(boundary_slope_local(e13(), {1.0}) == Approx(1.0).margin(1e-9));
  CHECK(boundary_slope_local(e13(), {2.5}) == Approx(2.0).margin(1e-9));
}

TEST_CASE("global slopes") {
  CHECK(global_outer_slope(e13()) == Approx(2.0).margin(1e-9));
  CHECK(global_outer_slope(max_x_neg1()) == Approx(1.0).margin(1e-9));
  CHECK(global_outer_slope(zero_fn()) == kInf);

  CHECK(global_boundary_slope(e13()) == Approx(1.0).margin(1e-9));
  CHECK(global_boundary_slope(max_x_neg1()) == Approx(1.0).margin(1e-9));
  CHECK(global_boundary_slope(zero_fn()) == Approx(0.0).margin(1e-12));
}

TEST_CASE("tau on the three-piece example") {
  PolyhedralFunction f = e13();
  CHECK(tau(f, {{1.0}, 0.3, 0.5}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{1.0}, 0.0, 0.9}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{1.0}, 0.9, 0.0}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{1.0}, 0.5, 0.5}) == Approx(0.0).margin(1e-12));
  CHECK(tau(f, {{1.0}, 0.5, 0.6}) == Approx(0.0).margin(1e-12));
  CHECK(tau(f, {{1.0}, 1.0, 0.0}) == Approx(0.0).margin(1e-12));
  CHECK(tau(f, {{1.0}, 0.0, 1.0}) == Approx(0.0).margin(1e-12));
  CHECK(tau_detailed(f, {{1.0}, 0.3, 0.5}).branch == 1);
}

TEST_CASE("tau on max(x,-1)") {
  PolyhedralFunction f = max_x_neg1();
  CHECK(tau(f, {{0.0}, 0.0, 0.0}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{0.0}, 0.0, 0.5}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{0.0}, 0.0, 0.99}) == Approx(1.0).margin(1e-9));
  CHECK(tau(f, {{0.0}, 0.0, 1.0}) == Approx(0.0).margin(1e-12));
  CHECK(tau(f, {{0.0}, 0.1, 0.0}) == Approx(0.0).margin(1e-12));
  CHECK(tau(f, {{0.0}, 0.5, 0.0}) == Approx(0.0).margin(1e-12));
}

TEST_CASE("tau second branch") {
  PolyhedralFunction f = abs_fn();
  TauResult r = tau_detailed(f, {{0.0}, 0.7, 3.0});
  CHECK(r.branch == 2);
  CHECK(r.value == Approx(1.0).margin(1e-9));

  // the zero function is a first-branch case with value 0
  TauResult z = tau_detailed(zero_fn(), {{5.0}, 0.2, 0.1});
  CHECK(z.branch == 1);
  CHECK(z.value == Approx(0.0).margin(1e-12));
}

TEST_CASE("tau rejects unsupported dimensions") {
  PolyhedralFunction f(4, {{{0.0, 0.0, 0.0, 0.0}, 0.0},
                           {{1.0, 0.0, 0.0, 0.0}, 0.0}});
  CHECK_THROWS_AS(tau(f, {{0.0, 0.0, 0.0, 0.0}, 0.1, 0.1}), UnsupportedError);
}

TEST_CASE("full report") {
  SlopeReport r = full_report(e13(), Vec{1.0});
  CHECK(*r.er_local == Approx(2.0).margin(1e-9));
  CHECK(*r.strict_outer_local == Approx(2.0).margin(1e-9));
  CHECK(*r.boundary_local == Approx(1.0).margin(1e-9));
  CHECK(r.er_global == Approx(2.0).margin(1e-9));
  CHECK(r.outer_global == Approx(2.0).margin(1e-9));
  CHECK(r.boundary_global == Approx(1.0).margin(1e-9));

  SlopeReport z = full_report(zero_fn(), Vec{0.0});
  CHECK(*z.er_local == kInf);
  CHECK(*z.boundary_local == Approx(0.0).margin(1e-12));
  CHECK(z.outer_global == kInf);
  CHECK(z.boundary_global == Approx(0.0).margin(1e-12));

  SlopeReport m = full_report(max0x(), Vec{0.0});
  CHECK(*m.er_local == Approx(1.0).margin(1e-9));
  CHECK(*m.boundary_local == Approx(0.0).margin(1e-12));
}

TEST_CASE("slope inequality chains on random instances") {
  std::mt19937_64 rng(8675309);
  for (int trial = 0; trial < 40; ++trial) {
    auto [f, xbar] = random_zeroed(rng);
    const double er_l = local_error_bound_modulus(f, xbar);
    const double bd_l = boundary_slope_local(f, xbar);
    CHECK(bd_l <= er_l + 1e-7);

    const double outer = global_outer_slope(f);
    const double bd_g = global_boundary_slope(f);
    CHECK(bd_g <= outer + 1e-7);

    // the global boundary slope is the min of local ones over the zero level
    double min_local = kInf;
    for (const PatternWitness& w :
         occurring_patterns(f, Region::kZeroLevel))
      min_local = std::min(min_local, boundary_slope_local(f, w.point));
    if (min_local == kInf)
      CHECK(bd_g == kInf);
    else
      CHECK(bd_g == Approx(min_local).margin(1e-7));
  }
}

TEST_CASE("tau bounds and monotonicity on random instances") {
  std::mt19937_64 rng(5551212);
  int first_branch_seen = 0;
  for (int trial = 0; trial < 25; ++trial) {
    auto [f, xbar] = random_zeroed(rng);
    const double bd_g = global_boundary_slope(f);
    TauResult at_zero = tau_detailed(f, {xbar, 0.0, 0.0});
    if (at_zero.branch == 1) {
      ++first_branch_seen;
      // equality at eps = delta = 0
      if (bd_g == kInf)
        CHECK(at_zero.value == kInf);
      else
        CHECK(at_zero.value == Approx(bd_g).margin(1e-7));
    }
    const double grid[4] = {0.0, 0.3, 0.8, 1.6};
    double prev_row[4] = {kInf, kInf, kInf, kInf};
    for (double eps : grid) {
      double prev = kInf;
      for (int j = 0; j < 4; ++j) {
        const double value = tau(f, {xbar, eps, grid[j]});
        CHECK(value <= bd_g + 1e-7);         // never above the global slope
        CHECK(value <= prev + 1e-9);         // nonincreasing in delta
        CHECK(value <= prev_row[j] + 1e-9);  // nonincreasing in eps
        prev = value;
        prev_row[j] = value;
      }
    }
  }
  CHECK(first_branch_seen > 0);
}
