#pragma once

#include "wpmm/harness/cme.hpp"

namespace wpmm::harness {

// min 0.5 ||x - a||^2 s.t. x = y, x and y in [lo, hi]^n. Strongly convex with
// alpha = beta = 1 and A = I; the optimum is the clip of a.
ProblemInstance box_toy(Vec a, double lo = 0.0, double hi = 1.0);

// The instance used by the certificate suites: a = (1.5, 0.3), unit box,
// started at x0 = y0 = (0, 1).
ProblemInstance default_toy();

}  // namespace wpmm::harness
