#pragma once

#include <cstdint>

#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/linalg/dense_matrix.hpp"
#include "wpmm/model/problem.hpp"

namespace wpmm::harness {

struct CmeConfig {
  std::size_t d = 400;
  std::size_t r = 5;
  double noise_sigma = 0.6;
  // Entries of u with |u_i| <= entry_threshold are zeroed before forming u u^T.
  double entry_threshold = 0.9;
  std::uint64_t seed = 0;
};

void validate(const CmeConfig& cfg);

struct CmeInstance {
  linalg::DenseMatrix sigma;      // block diagonal, PSD, rank <= r
  linalg::DenseMatrix sigma_hat;  // (1/d) sum z_i z_i^T
  double tau = 0.0;               // ||Sigma||_nuc (= trace)
  double s = 0.0;                 // ||Sigma||_1 (entrywise)
};

// Sigma has r contiguous diagonal blocks u u^T, u ~ U[-1, 1] thresholded. A
// block that thresholds to zero is redrawn, up to 100 times.
CmeInstance gen_cme_instance(const CmeConfig& cfg);

// A problem together with its starting point.
struct ProblemInstance {
  model::ProblemSpec spec;
  model::PrimalPoint q0;
  model::DualPoint w0;
};

// f = 0.5 ||S - Sigma_hat||_F^2, R_X = spectrahedron(tau) with a rank-k_hat
// oracle, R_Y = l1 ball(s), A = I. x0 and y0 are the projections of Sigma_hat
// onto the two sets, w0 = 0.
ProblemInstance build_cme_problem(const linalg::DenseMatrix& sigma_hat, double tau, double s, std::size_t k_hat,
                                  const linalg::LanczosOptions& opts = {});

struct CmeMetrics {
  // ||S - Sigma_hat||_F^2 / (2 ||Sigma_hat||_F^2)
  double normalized_objective = 0.0;
  // ||S - P_l1(s)(S)||_F
  double feasibility_distance = 0.0;
  // ||S - Sigma||_F^2 / (2 ||Sigma||_F^2)
  double recovery_error = 0.0;
};

CmeMetrics metrics_cme(std::span<const double> s_matrix, const linalg::DenseMatrix& sigma,
                       const linalg::DenseMatrix& sigma_hat, double s);

}  // namespace wpmm::harness
