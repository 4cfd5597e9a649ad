#pragma once

#include <cstdint>

#include "wpmm/linear_map.hpp"

namespace wpmm::linalg {

// Power iteration on A^T A, multiplied by 1.01. The running maximum of the
// iterates is returned, so the value is nondecreasing in iters for a fixed seed.
double operator_norm_bound(const LinearMap& a, std::size_t iters = 100, std::uint64_t seed = 1);

}  // namespace wpmm::linalg
