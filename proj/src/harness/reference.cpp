#include "wpmm/harness/reference.hpp"

#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/model/lagrangian.hpp"

namespace wpmm::harness {

solver::SolverConfig ReferenceOptions::default_config() {
  solver::SolverConfig c;
  c.rho = 1.0;
  c.mu = 0.2;
  c.step_policy = solver::StepPolicy::LineSearch;
  c.variant = solver::Variant::Last;
  return c;
}

ReferenceSolution reference_solution(const ProblemInstance& instance, const ReferenceOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("reference_solution: tol must be positive");
  model::ProblemSpec spec = instance.spec;
  spec.rx = spec.rx->exact_variant();
  spec.ry = spec.ry->exact_variant();
  solver::SolverConfig config = opts.config;
  config.lambda = 1.0;
  config.iters = opts.max_iters;

  solver::Wpmm wpmm(spec, config);
  wpmm.reset(instance.q0, instance.w0);
  double prev_h = solver::evaluate(wpmm.spec(), wpmm.q(), wpmm.w(), config.rho).objective;
  std::size_t streak = 0;
  double feas = 0.0;
  for (std::size_t t = 1; t <= opts.max_iters; ++t) {
    (void)wpmm.step();
    const solver::Evaluation e = solver::evaluate(wpmm.spec(), wpmm.q(), wpmm.w(), config.rho);
    feas = e.feasibility;
    streak = (e.feasibility <= opts.tol && std::abs(e.objective - prev_h) <= opts.tol) ? streak + 1 : 0;
    prev_h = e.objective;
    if (streak >= opts.patience) {
      ReferenceSolution out;
      out.q = wpmm.q();
      out.w = wpmm.w();
      out.h = e.objective;
      out.l = e.al_value;
      out.feasibility = e.feasibility;
      out.iterations = t;
      return out;
    }
  }
  throw ConvergenceError("reference_solution: no convergence within " + std::to_string(opts.max_iters) +
                             " iterations (||Kq|| = " + std::to_string(feas) + ")",
                         feas);
}

}  // namespace wpmm::harness
