#include "wpmm/solver/step_size.hpp"

#include <algorithm>
#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/model/lagrangian.hpp"

namespace wpmm::solver {

namespace {

void require_positive(double v, const char* name, const char* who) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(who) + ": " + name + " must be positive");
}

bool all_indicators(const model::ProblemSpec& spec) { return spec.rx->is_indicator() && spec.ry->is_indicator(); }

// Regularizer terms that vary along the segment.
double varying_regularizers(const model::ProblemSpec& spec, const model::PrimalPoint& q) {
  double r = 0.0;
  if (!spec.rx->is_indicator()) r += spec.rx->value(q.x);
  if (!spec.ry->is_indicator()) r += spec.ry->value(q.y);
  return r;
}

}  // namespace

double theoretical_eta(double alpha_s, double beta_s, double lambda, double mu, double norm_a) {
  require_positive(alpha_s, "alpha_S", "theoretical_eta");
  require_positive(beta_s, "beta_S", "theoretical_eta");
  require_positive(mu, "mu", "theoretical_eta");
  if (!(lambda >= 1.0)) throw InvalidArgument("theoretical_eta: lambda must be at least 1");
  if (!(norm_a >= 0.0)) throw InvalidArgument("theoretical_eta: ||A|| must be nonnegative");
  const double eta = alpha_s / (2.0 * lambda * (beta_s + 2.0 * mu * (norm_a + 1.0) * (norm_a + 1.0)));
  if (eta > 1.0)
    throw InvalidArgument("theoretical_eta: eta = " + std::to_string(eta) +
                          " exceeds 1; alpha_S and beta_S are inconsistent");
  return eta;
}

double max_dual_step(double alpha_s, double beta_s, double lambda, double norm_a) {
  require_positive(alpha_s, "alpha_S", "max_dual_step");
  require_positive(beta_s, "beta_S", "max_dual_step");
  if (!(lambda >= 1.0)) throw InvalidArgument("max_dual_step: lambda must be at least 1");
  if (!(norm_a >= 0.0)) throw InvalidArgument("max_dual_step: ||A|| must be nonnegative");
  const double k2 = (norm_a + 1.0) * (norm_a + 1.0);
  // sqrt(l a^2 + l^2 b^2) - l b, written to avoid cancellation.
  const double root = std::sqrt(lambda * alpha_s * alpha_s + lambda * lambda * beta_s * beta_s);
  const double diff = lambda * alpha_s * alpha_s / (root + lambda * beta_s);
  return diff / (4.0 * lambda * k2);
}

double ergodic_bound(double c, double w0_norm, double d1, double beta, double rho, double mu, double norm_a,
                     double alpha_s) {
  require_positive(c, "c", "ergodic_bound");
  require_positive(mu, "mu", "ergodic_bound");
  require_positive(alpha_s, "alpha_S", "ergodic_bound");
  if (w0_norm < 0.0 || beta < 0.0 || rho < 0.0 || norm_a < 0.0)
    throw InvalidArgument("ergodic_bound: norms, beta and rho must be nonnegative");
  const double dual = (c + w0_norm) * (c + w0_norm) / (2.0 * mu);
  const double k2 = (norm_a + 1.0) * (norm_a + 1.0);
  const double primal = 2.0 * d1 * (beta + (rho + 2.0 * mu) * k2) / alpha_s;
  return dual + std::max(0.0, primal);
}

double line_search_objective(const model::ProblemSpec& spec, const model::PrimalPoint& q,
                             const model::PrimalPoint& v, std::span<const double> w, double mu, double rho,
                             double eta) {
  const model::PrimalPoint qe = model::lerp(q, v, eta);
  const Vec kq = model::k_apply(spec, qe);
  const double n = linalg::norm2(kq);
  return mu * n * n + model::smooth_value(spec, qe, w, rho) + varying_regularizers(spec, qe);
}

double line_search_eta(const model::ProblemSpec& spec, const model::PrimalPoint& q, const model::PrimalPoint& v,
                       std::span<const double> w, double mu, double rho) {
  if (model::distance(q, v) == 0.0) return 0.0;
  if (!model::in_domain(spec, q)) throw InvalidArgument("line_search_eta: q is outside an indicator domain");
  if (!model::in_domain(spec, v)) throw InvalidArgument("line_search_eta: v is outside an indicator domain");

  if (spec.f.quadratic && all_indicators(spec)) {
    const model::PrimalPoint d{linalg::sub(v.x, q.x), linalg::sub(v.y, q.y)};
    const Vec k0 = model::k_apply(spec, q);
    const Vec kd = model::k_apply(spec, d);
    const Vec g0 = spec.f.gradient(q.x);
    const Vec g1 = spec.f.gradient(v.x);
    const double penalty = rho + 2.0 * mu;
    const double a1 = linalg::dot(g0, d.x) + linalg::dot(w, kd) + penalty * linalg::dot(k0, kd);
    const double curvature = linalg::dot(linalg::sub(g1, g0), d.x);
    const double kd_norm = linalg::norm2(kd);
    const double a2 = std::max(curvature, 0.0) + penalty * kd_norm * kd_norm;
    if (a2 > 0.0) return std::clamp(-a1 / a2, 0.0, 1.0);
    return a1 < 0.0 ? 1.0 : 0.0;
  }

  auto phi = [&](double eta) { return line_search_objective(spec, q, v, w, mu, rho, eta); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > 1e-6) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = phi(d);
    }
  }
  double best = 0.5 * (a + b);
  double best_value = phi(best);
  for (double candidate : {0.0, 1.0}) {
    const double value = phi(candidate);
    if (value < best_value) {
      best = candidate;
      best_value = value;
    }
  }
  return best;
}

}  // namespace wpmm::solver
