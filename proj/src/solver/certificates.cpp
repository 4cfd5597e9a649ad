#include "wpmm/solver/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wpmm/errors.hpp"

namespace wpmm::solver {

Certificate check_linear_decay(std::span<const double> al_values, double l_star, double eta) {
  Certificate cert;
  cert.name = "linear_decay";
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("check_linear_decay: eta must lie in (0, 1]");
  if (al_values.empty()) {
    cert.applicable = false;
    cert.message = "empty log";
    return cert;
  }
  const double d1 = al_values.front() - l_star;
  const double tol = 1e-8 * (1.0 + std::abs(d1));
  cert.passed = true;
  cert.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < al_values.size(); ++i) {
    const double dt = al_values[i] - l_star;
    const double dnext = al_values[i + 1] - l_star;
    const double margin = dnext - ((1.0 - eta) * dt + tol);
    cert.worst_margin = std::max(cert.worst_margin, margin);
    if (!(margin <= 0.0) && cert.passed) {
      cert.passed = false;
      cert.first_failure = i + 2;
    }
  }
  if (al_values.size() == 1) cert.worst_margin = 0.0;
  cert.message = cert.passed ? "d_{t+1} <= (1 - eta) d_t holds at every iteration"
                             : "decay violated first at t = " + std::to_string(*cert.first_failure);
  return cert;
}

Certificate check_obj_feas_split(double h_gap, double c, double rho, double k_norm, double delta) {
  if (!(c > 0.0)) throw InvalidArgument("check_obj_feas_split: c must be positive");
  if (delta < 0.0) throw InvalidArgument("check_obj_feas_split: delta must be nonnegative");
  Certificate cert;
  cert.name = "objective_feasibility_split";
  const double antecedent = h_gap + c * k_norm + 0.5 * rho * k_norm * k_norm;
  if (antecedent > delta) {
    cert.applicable = false;
    cert.message = "antecedent fails: " + std::to_string(antecedent) + " > delta = " + std::to_string(delta);
    return cert;
  }
  const double m1 = h_gap - delta;
  const double m2 = k_norm - 2.0 * delta / c;
  cert.worst_margin = std::max(m1, m2);
  cert.passed = m1 <= 0.0 && m2 <= 0.0;
  cert.message = cert.passed ? "objective gap and feasibility bounds hold" : "a consequent fails";
  return cert;
}

Certificate check_ergodic_bounds(const RunLog& log, const ErgodicCheck& check) {
  if (!(check.c > 0.0)) throw InvalidArgument("check_ergodic_bounds: c must be positive");
  Certificate cert;
  cert.name = check.sharp_feasibility ? "ergodic_bounds_sharp" : "ergodic_bounds";
  if (log.records.empty() || !log.records.front().mean) {
    cert.applicable = false;
    cert.message = "log has no mean evaluations";
    return cert;
  }
  cert.passed = true;
  cert.worst_margin = -std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : log.records) {
    if (!rec.mean) continue;
    const double T = static_cast<double>(rec.t);
    const double obj_margin = rec.mean->objective - check.h_star - (check.bound / T + check.tol);
    const double feas_limit = 2.0 * check.bound / check.c * (check.sharp_feasibility ? 1.0 / T : 1.0);
    const double feas_margin = rec.mean->feasibility - (feas_limit + check.tol);
    const bool ok = !rec.mean->penalized && obj_margin <= 0.0 && feas_margin <= 0.0;
    cert.worst_margin = std::max({cert.worst_margin, obj_margin, feas_margin});
    if (!ok && cert.passed) {
      cert.passed = false;
      cert.first_failure = rec.t;
    }
  }
  cert.message = cert.passed ? "bounds hold for every logged T"
                             : "bound violated first at T = " + std::to_string(*cert.first_failure);
  return cert;
}

double measured_d1(const RunLog& log, double l_star) {
  if (log.records.empty() || !log.records.front().last) throw InvalidArgument("measured_d1: empty log");
  return log.records.front().last->al_value - l_star;
}

model::PrimalPoint recompute_mean(const RunLog& log) {
  if (log.iterates.empty()) throw InvalidArgument("recompute_mean: log has no stored iterates");
  model::PrimalPoint m{Vec(log.iterates.front().x.size(), 0.0), Vec(log.iterates.front().y.size(), 0.0)};
  for (const auto& q : log.iterates) {
    linalg::axpy(1.0, q.x, m.x);
    linalg::axpy(1.0, q.y, m.y);
  }
  const double inv = 1.0 / static_cast<double>(log.iterates.size());
  linalg::scale(m.x, inv);
  linalg::scale(m.y, inv);
  return m;
}

}  // namespace wpmm::solver
