#include "wpmm/oracles/polytope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/projections.hpp"

namespace wpmm::oracles {

using linalg::axpy;
using linalg::dot;

Vec PolytopeState::point() const {
  if (vertices.empty()) throw InvalidArgument("PolytopeState: empty vertex set");
  Vec v(vertices.front().size(), 0.0);
  for (std::size_t i = 0; i < vertices.size(); ++i) axpy(weights[i], vertices[i], v);
  return v;
}

void prune(PolytopeState& state) {
  PolytopeState kept;
  for (std::size_t i = 0; i < state.vertices.size(); ++i) {
    if (state.weights[i] >= kPruneThreshold) {
      kept.vertices.push_back(std::move(state.vertices[i]));
      kept.weights.push_back(state.weights[i]);
    }
  }
  if (kept.vertices.empty()) throw InvalidArgument("prune: every weight is below the threshold");
  double total = 0.0;
  for (double w : kept.weights) total += w;
  for (double& w : kept.weights) w /= total;
  state = std::move(kept);
}

namespace {

struct Qp {
  Eigen::MatrixXd G;  // M^T M
  Eigen::VectorXd b;  // M^T p - c M^T center
  double c;
  double constant;  // (c/2) ||center||^2

  double value(const Eigen::VectorXd& g) const { return 0.5 * c * g.dot(G * g) + b.dot(g) + constant; }
  Eigen::VectorXd grad(const Eigen::VectorXd& g) const { return c * (G * g) + b; }
};

Eigen::VectorXd to_simplex(const Eigen::VectorXd& z) {
  const Vec p = linalg::project_simplex(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())), 1.0);
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

double wolfe_gap(const Eigen::VectorXd& g, const Eigen::VectorXd& grad) { return grad.dot(g) - grad.minCoeff(); }

// Solve the KKT system on the support of g; returns nothing if the solution
// leaves the simplex.
std::optional<Eigen::VectorXd> support_polish(const Qp& qp, const Eigen::VectorXd& g) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g(i) > 0.0) support.push_back(i);
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s == 0) return std::nullopt;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
  Eigen::VectorXd rhs(s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = qp.c * qp.G(support[a], support[b]);
    kkt(a, s) = -1.0;
    kkt(s, a) = 1.0;
    rhs(a) = -qp.b(support[a]);
  }
  rhs(s) = 1.0;
  const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (Eigen::Index a = 0; a < s; ++a) {
    if (!(sol(a) >= 0.0)) return std::nullopt;
    out(support[a]) = sol(a);
  }
  const double total = out.sum();
  if (!(std::abs(total - 1.0) < 1e-9)) return std::nullopt;
  return out / total;
}

}  // namespace

SimplexQpResult simplex_qp(const std::vector<Vec>& vertices, std::span<const double> p, std::span<const double> center,
                           double c, const SimplexQpOptions& opts) {
  if (vertices.empty()) throw InvalidArgument("simplex_qp: empty vertex set");
  if (!(c > 0.0)) throw InvalidArgument("simplex_qp: c must be positive");
  const std::size_t d = center.size();
  if (p.size() != d) throw DimensionMismatch("simplex_qp: p and center lengths differ");
  for (const Vec& v : vertices)
    if (v.size() != d) throw DimensionMismatch("simplex_qp: vertex has the wrong length");

  const auto n = static_cast<Eigen::Index>(vertices.size());
  Qp qp;
  qp.c = c;
  qp.G.resize(n, n);
  qp.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec& vi = vertices[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i; j < n; ++j) qp.G(i, j) = qp.G(j, i) = dot(vi, vertices[static_cast<std::size_t>(j)]);
    qp.b(i) = dot(vi, p) - c * dot(vi, center);
  }
  const double cn = linalg::norm2(center);
  qp.constant = 0.5 * c * cn * cn;

  SimplexQpResult result;
  if (n == 1) {
    result.gamma = {1.0};
    result.objective = qp.value(Eigen::VectorXd::Ones(1));
    return result;
  }

  const double lip = c * std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(qp.G, Eigen::EigenvaluesOnly)
                                      .eigenvalues()
                                      .maxCoeff(),
                                  1e-300);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y = x;
  double theta = 1.0;
  std::size_t it = 0;
  auto converged = [&](const Eigen::VectorXd& g) {
    return wolfe_gap(g, qp.grad(g)) <= opts.gap_tol * std::max(1.0, std::abs(qp.value(g)));
  };
  bool polished_done = false;
  for (; it < opts.max_iters; ++it) {
    if (converged(x)) break;
    // The support usually settles long before the gap closes.
    if (it > 0 && it % 25 == 0) {
      if (auto polished = support_polish(qp, x); polished && qp.value(*polished) <= qp.value(x) && converged(*polished)) {
        x = *polished;
        polished_done = true;
        break;
      }
    }
    const Eigen::VectorXd x_next = to_simplex(y - qp.grad(y) / lip);
    // Gradient-based adaptive restart.
    if (qp.grad(y).dot(x_next - x) > 0.0) {
      theta = 1.0;
      y = x;
      continue;
    }
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    y = x_next + ((theta - 1.0) / theta_next) * (x_next - x);
    x = x_next;
    theta = theta_next;
  }

  if (!polished_done)
    if (auto polished = support_polish(qp, x); polished && qp.value(*polished) <= qp.value(x)) x = *polished;
  result.gamma.assign(x.data(), x.data() + x.size());
  result.objective = qp.value(x);
  result.wolfe_gap = wolfe_gap(x, qp.grad(x));
  result.iterations = it;
  return result;
}

PolytopeProposal wpo_polytope(const PolytopeState& state, std::span<const double> p, std::span<const double> center,
                              double c, const Lmo& lmo, const SimplexQpOptions& opts) {
  if (state.empty()) throw InvalidArgument("wpo_polytope: empty state");
  if (!lmo) throw InvalidArgument("wpo_polytope: no linear minimization oracle");
  const Vec represented = state.point();
  if (represented.size() != center.size()) throw DimensionMismatch("wpo_polytope: state and center lengths differ");
  const double mismatch = linalg::distance(represented, center);
  if (mismatch > 1e-9 * (1.0 + linalg::norm2(center)))
    throw InvalidArgument("wpo_polytope: state does not represent the center (distance " + std::to_string(mismatch) +
                          ")");

  Vec z = lmo(p);
  if (z.size() != center.size() || !linalg::all_finite(z))
    throw InvalidArgument("wpo_polytope: linear minimization oracle returned an invalid vertex");

  std::vector<Vec> vertices = state.vertices;
  bool present = false;
  for (const Vec& v : vertices) present = present || v == z;
  if (!present) vertices.push_back(std::move(z));

  const SimplexQpResult qp = simplex_qp(vertices, p, center, c, opts);
  PolytopeProposal out;
  out.state.vertices = std::move(vertices);
  out.state.weights = qp.gamma;
  prune(out.state);
  out.v = out.state.point();
  return out;
}

PolytopeState combine_states(const PolytopeState& current, const PolytopeState& proposal, double eta) {
  if (eta < 0.0 || eta > 1.0) throw InvalidArgument("combine_states: eta outside [0, 1]");
  PolytopeState merged = current;
  for (double& w : merged.weights) w *= 1.0 - eta;
  for (std::size_t i = 0; i < proposal.vertices.size(); ++i) {
    auto it = std::find(merged.vertices.begin(), merged.vertices.end(), proposal.vertices[i]);
    if (it == merged.vertices.end()) {
      merged.vertices.push_back(proposal.vertices[i]);
      merged.weights.push_back(eta * proposal.weights[i]);
    } else {
      merged.weights[static_cast<std::size_t>(it - merged.vertices.begin())] += eta * proposal.weights[i];
    }
  }
  prune(merged);
  return merged;
}

std::vector<Vec> hypercube_vertices(std::size_t d) {
  if (d == 0 || d > 20) throw InvalidArgument("hypercube_vertices: dimension must be in [1, 20]");
  std::vector<Vec> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Vec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i) & 1u ? 1.0 : 0.0;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> simplex_vertices(std::size_t d) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < d; ++i) {
    Vec v(d, 0.0);
    v[i] = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

Lmo hypercube_lmo(std::size_t d) {
  return [d](std::span<const double> p) {
    if (p.size() != d) throw DimensionMismatch("hypercube_lmo: wrong length");
    Vec v(d);
    // Ties go to 0.
    for (std::size_t i = 0; i < d; ++i) v[i] = p[i] < 0.0 ? 1.0 : 0.0;
    return v;
  };
}

Lmo simplex_lmo(std::size_t d) {
  return [d](std::span<const double> p) {
    if (p.size() != d) throw DimensionMismatch("simplex_lmo: wrong length");
    Vec v(d, 0.0);
    v[static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin())] = 1.0;
    return v;
  };
}

Lmo enumerated_lmo(std::vector<Vec> vertices) {
  if (vertices.empty()) throw InvalidArgument("enumerated_lmo: empty vertex list");
  return [vertices = std::move(vertices)](std::span<const double> p) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const double v = dot(vertices[i], p);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    return vertices[best];
  };
}

}  // namespace wpmm::oracles
