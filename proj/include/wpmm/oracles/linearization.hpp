#pragma once

#include <span>

#include "wpmm/model/problem.hpp"
#include "wpmm/oracles/component.hpp"

namespace wpmm::oracles {

// p_x = grad_x S(q, w) + 2 mu A^T K q = grad f(x) + A^T (w + (rho + 2 mu) K q)
Vec p_vector_x(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w, double mu,
               double rho);
// p_y = grad_y S(q, w) - 2 mu K q = -(w + (rho + 2 mu) K q)
Vec p_vector_y(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w, double mu,
               double rho);

// Phi_lambda(v) = R(v) + <v, p> + (lambda c / 2) ||v - center||^2 for one block.
double phi(const WpoComponent& r, std::span<const double> v, std::span<const double> center,
           std::span<const double> p, double c, double lambda);

// Phi_lambda with the regularizer value supplied by the caller.
double phi_with_value(double r_value, std::span<const double> v, std::span<const double> center,
                      std::span<const double> p, double c, double lambda);

// Exact minimizer of Phi_1 for a block with an exact prox routine.
Vec prox_exact(const WpoComponent& r, std::span<const double> center, std::span<const double> p, double c);

struct ComposedProposal {
  model::PrimalPoint v;
  double lambda;
};

// ((vx, vy), max(lx, ly))
ComposedProposal wpo_compose(Vec vx, double lx, Vec vy, double ly);

}  // namespace wpmm::oracles
