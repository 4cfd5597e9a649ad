#pragma once

#include <optional>

#include "wpmm/model/problem.hpp"

namespace wpmm::model {

// K q = A x - y
Vec k_apply(const ProblemSpec& spec, const PrimalPoint& q);
// K^T w = (A^T w, -w)
PrimalPoint k_adjoint(const ProblemSpec& spec, std::span<const double> w);

// L_rho(q, w) = f(x) + R_X(x) + R_Y(y) + <w, Kq> + (rho/2)||Kq||^2
double al_value(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho);
// al_value without the regularizers.
double smooth_value(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho);
PrimalPoint smooth_grad(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho);

// h(q) = f(x) + R_X(x) + R_Y(y)
double objective_h(const ProblemSpec& spec, const PrimalPoint& q);
// Sum of the regularizer values.
double regularizer_value(const ProblemSpec& spec, const PrimalPoint& q);
// Euclidean distance of q to dom R_X x dom R_Y.
double domain_distance(const ProblemSpec& spec, const PrimalPoint& q);
bool in_domain(const ProblemSpec& spec, const PrimalPoint& q);

// beta + rho (||A|| + 1)^2
double beta_S(double beta, double rho, double norm_a);
// min{alpha/2, alpha rho / (alpha + 2 rho ||A||^2)}
double alpha_S_strongly_convex(double alpha, double rho, double norm_a);
// beta_S + 2 mu (||A|| + 1)^2
double beta_hat(double beta_s, double mu, double norm_a);

// spec.pqg_alpha, else alpha_S_strongly_convex from f.alpha, else nothing.
std::optional<double> effective_pqg_alpha(const ProblemSpec& spec, double rho);

}  // namespace wpmm::model
