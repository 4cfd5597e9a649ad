#pragma once

#include "wpmm/harness/cme.hpp"

namespace wpmm::harness {

// f = -tr(C S) (linear, beta floor 1e-6), R_X = spectrahedron(d) with a
// rank-k_hat oracle, R_Y = {diag(S) = 1}, A = I, x0 = y0 = I, w0 = 0. The PQG
// modulus is left unset.
ProblemInstance build_maxcut_problem(const linalg::DenseMatrix& c, std::size_t k_hat,
                                     const linalg::LanczosOptions& opts = {});

struct MaxCutMetrics {
  double objective = 0.0;         // -tr(C S)
  double diag_feasibility = 0.0;  // ||diag(S) - 1||
};

MaxCutMetrics metrics_maxcut(std::span<const double> s_matrix, const linalg::DenseMatrix& c);

}  // namespace wpmm::harness
