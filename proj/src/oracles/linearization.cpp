#include "wpmm/oracles/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/model/lagrangian.hpp"

namespace wpmm::oracles {

namespace {
// w + (rho + 2 mu) K q
Vec shifted_dual(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w, double mu,
                 double rho) {
  if (!(mu > 0.0)) throw InvalidArgument("linearization: mu must be positive");
  if (w.size() != spec.dim_y()) throw DimensionMismatch("linearization: dual point has the wrong dimension");
  Vec m(w.begin(), w.end());
  linalg::axpy(rho + 2.0 * mu, model::k_apply(spec, q), m);
  return m;
}
}  // namespace

Vec p_vector_x(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w, double mu,
               double rho) {
  const Vec m = shifted_dual(spec, q, w, mu, rho);
  Vec p = spec.f.gradient(q.x);
  linalg::axpy(1.0, spec.A.transpose_apply(m), p);
  return p;
}

Vec p_vector_y(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w, double mu,
               double rho) {
  return linalg::scaled(shifted_dual(spec, q, w, mu, rho), -1.0);
}

double phi_with_value(double r_value, std::span<const double> v, std::span<const double> center,
                      std::span<const double> p, double c, double lambda) {
  if (v.size() != center.size() || v.size() != p.size()) throw DimensionMismatch("phi: block sizes differ");
  const double d = linalg::distance(v, center);
  return r_value + linalg::dot(v, p) + 0.5 * lambda * c * d * d;
}

double phi(const WpoComponent& r, std::span<const double> v, std::span<const double> center,
           std::span<const double> p, double c, double lambda) {
  return phi_with_value(r.value(v), v, center, p, c, lambda);
}

Vec prox_exact(const WpoComponent& r, std::span<const double> center, std::span<const double> p, double c) {
  if (!(c > 0.0)) throw InvalidArgument("prox_exact: c must be positive");
  return r.prox(center, p, c);
}

ComposedProposal wpo_compose(Vec vx, double lx, Vec vy, double ly) {
  if (!(lx >= 1.0) || !(ly >= 1.0)) throw InvalidArgument("wpo_compose: block lambdas must be at least 1");
  return {{std::move(vx), std::move(vy)}, std::max(lx, ly)};
}

}  // namespace wpmm::oracles
