#pragma once

// Built-in regression corpus: the small piecewise-linear functions whose
// moduli, slopes, and localized constants are known in closed form. The
// verify command replays the expected values against both the exact and the
// sampling paths.

#include "ebound/polyfun.hpp"

namespace ebound {

struct Fixture {
  std::string name;
  PolyhedralFunction f;
  std::string note;
};

inline const std::vector<Fixture>& builtin_corpus() {
  static const std::vector<Fixture> corpus = [] {
    std::vector<Fixture> fs;
    fs.push_back({"e13",
                  PolyhedralFunction(
                      1, {{{-2.0}, -2.0}, {{-1.0}, -1.0}, {{2.0}, 5.0}}),
                  "three pieces, kinks at 1 and 2, zero level {1, 2.5}"});
    fs.push_back({"zero", PolyhedralFunction(1, {{{0.0}, 0.0}}),
                  "identically zero"});
    fs.push_back({"max0x",
                  PolyhedralFunction(1, {{{0.0}, 0.0}, {{1.0}, 0.0}}),
                  "max{0, x}: flat to the left of the origin"});
    fs.push_back({"max_x_neg1",
                  PolyhedralFunction(1, {{{1.0}, 0.0}, {{0.0}, 1.0}}),
                  "max{x, -1}: unbounded flat argmin"});
    fs.push_back(
        {"ex43_trunc4",
         PolyhedralFunction(1, {{{-2.0}, 0.0},
                                {{-1.0}, 0.0},
                                {{-0.5}, 0.5},
                                {{-0.25}, 1.0}}),
         "4-piece truncation of a staircase with geometrically decaying "
         "slopes; the full staircase has infinitely many pieces, so only "
         "truncation-independent quantities are asserted"});
    return fs;
  }();
  return corpus;
}

inline const Fixture* find_fixture(const std::string& name) {
  for (const Fixture& f : builtin_corpus())
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace ebound
