#pragma once

#include <optional>
#include <span>
#include <string>

#include "wpmm/solver/wpmm.hpp"

namespace wpmm::solver {

struct Certificate {
  std::string name;
  bool applicable = true;
  bool passed = false;
  // First failing iteration index t (1-based), when any.
  std::optional<std::size_t> first_failure;
  // Largest violation (positive) or smallest slack (nonpositive) across checks.
  double worst_margin = 0.0;
  std::string message;
};

// al_values[t-1] = L_rho(q_t, w_t). Checks d_{t+1} <= (1 - eta) d_t + 1e-8 (1 + |d_1|)
// with d_t = al_values[t-1] - l_star.
Certificate check_linear_decay(std::span<const double> al_values, double l_star, double eta);

// If h_gap + c ||Kq|| + (rho/2)||Kq||^2 <= delta, asserts h_gap <= delta and
// ||Kq|| <= 2 delta / c. Not applicable when the antecedent fails.
Certificate check_obj_feas_split(double h_gap, double c, double rho, double k_norm, double delta);

// For every logged T: h(mean_T) - h_star <= B / T + tol and
// ||K mean_T|| <= feasibility_scale * 2B / c + tol, where feasibility_scale is
// 1 for the stated bound or 1/T for the sharper one.
struct ErgodicCheck {
  double h_star = 0.0;
  double bound = 0.0;  // B(rho, mu)
  double c = 0.0;
  double tol = 1e-8;
  bool sharp_feasibility = false;
};
Certificate check_ergodic_bounds(const RunLog& log, const ErgodicCheck& check);

// d_1 = L_rho(q_1, w_1) - l_star from a log.
double measured_d1(const RunLog& log, double l_star);

// Mean output recomputed from the stored iterates; needs keep_iterates.
model::PrimalPoint recompute_mean(const RunLog& log);

}  // namespace wpmm::solver
