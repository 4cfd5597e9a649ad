#pragma once

#include <json.hpp>

#include "wpmm/harness/cme.hpp"

namespace wpmm::cli {

// Declarative problem file:
//   {"f":  {"kind": "zero" | "linear" | "half_squared_distance" | "least_squares" | "quadratic", ...},
//    "A":  "identity" | {"kind": "identity" | "dense" | "diagonal" | "stacked_identity", ...},
//    "rx": <regularizer>, "ry": <regularizer>,
//    "x0": [...], "y0": [...], "w0": [...], "pqg_alpha": number}
// Regularizer kinds: zero, box, l1_ball, simplex, polytope_box, polytope_hypercube,
// polytope_simplex, nuclear_norm, nuclear_ball, spectrahedron, diag_ones,
// product ({"blocks": [...]}). Matrices are nested arrays, row-major.
// Missing x0 is 0, missing y0 is A x0, missing w0 is 0. Throws ConfigError.
harness::ProblemInstance load_generic_problem(const nlohmann::json& j);

std::vector<std::string> supported_regularizers();

}  // namespace wpmm::cli
