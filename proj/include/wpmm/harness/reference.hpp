#pragma once

#include "wpmm/harness/cme.hpp"
#include "wpmm/solver/wpmm.hpp"

namespace wpmm::harness {

struct ReferenceOptions {
  double tol = 1e-8;
  std::size_t max_iters = 1000000;
  // Iteration settings of the reference loop. The theoretical policy is the
  // tightest; the faster line-search policy is the default for problems where
  // the theoretical dual step is tiny.
  solver::SolverConfig config = default_config();
  // Stop once convergence has held for this many consecutive iterations.
  std::size_t patience = 10;

  static solver::SolverConfig default_config();
};

struct ReferenceSolution {
  model::PrimalPoint q;
  model::DualPoint w;
  double h = 0.0;  // objective at q
  double l = 0.0;  // L_rho(q, w), the saddle value estimate
  double feasibility = 0.0;
  std::size_t iterations = 0;
};

// Runs the WPMM loop with every oracle replaced by its exact (lambda = 1,
// full-rank) variant until ||K q|| <= tol and |h_t - h_{t-1}| <= tol. Throws
// ConvergenceError after max_iters.
ReferenceSolution reference_solution(const ProblemInstance& instance, const ReferenceOptions& opts = {});

}  // namespace wpmm::harness
