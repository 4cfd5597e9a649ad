#include "wpmm/model/lagrangian.hpp"

#include <cmath>
#include <limits>

#include "wpmm/errors.hpp"

namespace wpmm::model {

namespace {
void check_point(const ProblemSpec& spec, const PrimalPoint& q) {
  if (q.x.size() != spec.dim_x() || q.y.size() != spec.dim_y())
    throw DimensionMismatch("point (" + std::to_string(q.x.size()) + ", " + std::to_string(q.y.size()) +
                            ") does not match problem dimensions (" + std::to_string(spec.dim_x()) + ", " +
                            std::to_string(spec.dim_y()) + ")");
}

void check_dual(const ProblemSpec& spec, std::span<const double> w) {
  if (w.size() != spec.dim_y()) throw DimensionMismatch("dual point has the wrong dimension");
}
}  // namespace

Vec k_apply(const ProblemSpec& spec, const PrimalPoint& q) {
  check_point(spec, q);
  Vec kq = spec.A(q.x);
  linalg::axpy(-1.0, q.y, kq);
  return kq;
}

PrimalPoint k_adjoint(const ProblemSpec& spec, std::span<const double> w) {
  check_dual(spec, w);
  return {spec.A.transpose_apply(w), linalg::scaled(w, -1.0)};
}

double smooth_value(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho) {
  check_dual(spec, w);
  const Vec kq = k_apply(spec, q);
  const double n = linalg::norm2(kq);
  return spec.f.value(q.x) + linalg::dot(w, kq) + 0.5 * rho * n * n;
}

double regularizer_value(const ProblemSpec& spec, const PrimalPoint& q) {
  check_point(spec, q);
  return spec.rx->value(q.x) + spec.ry->value(q.y);
}

double al_value(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho) {
  const double r = regularizer_value(spec, q);
  if (std::isinf(r)) return std::numeric_limits<double>::infinity();
  return smooth_value(spec, q, w, rho) + r;
}

PrimalPoint smooth_grad(const ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho) {
  check_dual(spec, w);
  Vec m(w.begin(), w.end());
  linalg::axpy(rho, k_apply(spec, q), m);
  Vec gx = spec.f.gradient(q.x);
  linalg::axpy(1.0, spec.A.transpose_apply(m), gx);
  linalg::scale(m, -1.0);
  return {std::move(gx), std::move(m)};
}

double objective_h(const ProblemSpec& spec, const PrimalPoint& q) {
  const double r = regularizer_value(spec, q);
  if (std::isinf(r)) return std::numeric_limits<double>::infinity();
  return spec.f.value(q.x) + r;
}

double domain_distance(const ProblemSpec& spec, const PrimalPoint& q) {
  check_point(spec, q);
  return std::hypot(spec.rx->domain_distance(q.x), spec.ry->domain_distance(q.y));
}

bool in_domain(const ProblemSpec& spec, const PrimalPoint& q) { return !std::isinf(regularizer_value(spec, q)); }

double beta_S(double beta, double rho, double norm_a) {
  if (!(beta > 0.0) || rho < 0.0 || norm_a < 0.0) throw InvalidArgument("beta_S: need beta > 0, rho >= 0, ||A|| >= 0");
  return beta + rho * (norm_a + 1.0) * (norm_a + 1.0);
}

double alpha_S_strongly_convex(double alpha, double rho, double norm_a) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha_S_strongly_convex: alpha must be positive");
  if (!(rho > 0.0)) throw InvalidArgument("alpha_S_strongly_convex: rho must be positive");
  if (norm_a < 0.0) throw InvalidArgument("alpha_S_strongly_convex: ||A|| must be nonnegative");
  return std::min(alpha / 2.0, alpha * rho / (alpha + 2.0 * rho * norm_a * norm_a));
}

double beta_hat(double beta_s, double mu, double norm_a) {
  if (mu < 0.0) throw InvalidArgument("beta_hat: mu must be nonnegative");
  return beta_s + 2.0 * mu * (norm_a + 1.0) * (norm_a + 1.0);
}

std::optional<double> effective_pqg_alpha(const ProblemSpec& spec, double rho) {
  if (spec.pqg_alpha) return spec.pqg_alpha;
  if (spec.f.alpha && *spec.f.alpha > 0.0 && rho > 0.0)
    return alpha_S_strongly_convex(*spec.f.alpha, rho, spec.A.norm_bound);
  return std::nullopt;
}

}  // namespace wpmm::model
