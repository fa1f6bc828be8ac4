#pragma once

// Umbrella header: error-bound moduli, subdifferential slopes, perturbation
// radii and synthesis, and the Monte-Carlo cross-check estimators for
// polyhedral convex inequality systems.

#include "ebound/core.hpp"
#include "ebound/geometry.hpp"
#include "ebound/polyfun.hpp"
#include "ebound/slopes.hpp"
#include "ebound/perturb.hpp"
#include "ebound/oracle.hpp"
#include "ebound/fixtures.hpp"
