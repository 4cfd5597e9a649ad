#pragma once

#include <span>

#include "wpmm/model/problem.hpp"

namespace wpmm::solver {

// eta = alpha_S / (2 lambda (beta_S + 2 mu (||A|| + 1)^2)). Throws if the
// result exceeds 1.
double theoretical_eta(double alpha_s, double beta_s, double lambda, double mu, double norm_a);

// Largest mu for which theoretical_eta carries the convergence guarantee:
// (sqrt(lambda alpha_S^2 + lambda^2 beta_S^2) - lambda beta_S) / (4 lambda (||A|| + 1)^2)
double max_dual_step(double alpha_s, double beta_s, double lambda, double norm_a);

// B(rho, mu) = (c + ||w0||)^2 / (2 mu) + max{0, 2 d1 (beta + (rho + 2 mu)(||A|| + 1)^2) / alpha_S}
double ergodic_bound(double c, double w0_norm, double d1, double beta, double rho, double mu, double norm_a,
                     double alpha_s);

// phi(eta) = mu ||K q(eta)||^2 + L_rho(q(eta), w) with q(eta) = (1 - eta) q + eta v.
// Indicator regularizers are treated as constant on the segment.
double line_search_objective(const model::ProblemSpec& spec, const model::PrimalPoint& q,
                             const model::PrimalPoint& v, std::span<const double> w, double mu, double rho,
                             double eta);

// argmin of line_search_objective over [0, 1]. Closed form when f is quadratic
// and every regularizer is an indicator, golden-section search to width 1e-6
// otherwise. Returns 0 when v = q. Throws InvalidArgument if q or v is outside
// an indicator domain.
double line_search_eta(const model::ProblemSpec& spec, const model::PrimalPoint& q, const model::PrimalPoint& v,
                       std::span<const double> w, double mu, double rho);

}  // namespace wpmm::solver
