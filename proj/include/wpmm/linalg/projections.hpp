#pragma once

#include <span>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::linalg {

// Euclidean projection onto {v >= 0, sum v = tau}. Exact sort-and-threshold.
Vec project_simplex(std::span<const double> z, double tau);

// Euclidean projection onto {||v||_1 <= s}. Returns z unchanged when inside.
Vec project_l1_ball(std::span<const double> z, double s);

// Componentwise clamp onto [lo_i, hi_i].
Vec project_box(std::span<const double> z, std::span<const double> lo, std::span<const double> hi);

}  // namespace wpmm::linalg
