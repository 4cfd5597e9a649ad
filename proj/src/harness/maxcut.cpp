#include "wpmm/harness/maxcut.hpp"

#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/oracles/components.hpp"

namespace wpmm::harness {

using linalg::DenseMatrix;

ProblemInstance build_maxcut_problem(const DenseMatrix& c, std::size_t k_hat, const linalg::LanczosOptions& opts) {
  if (c.rows() != c.cols()) throw DimensionMismatch("build_maxcut_problem: C must be square");
  if (c.asymmetry() > 1e-12 * std::max(1.0, c.max_abs())) throw InvalidArgument("build_maxcut_problem: C must be symmetric");
  const std::size_t d = c.rows(), n = d * d;
  if (k_hat == 0 || k_hat > d) throw InvalidArgument("build_maxcut_problem: k_hat out of range");
  Vec neg = c.values();
  for (double& x : neg) x = -x;
  ProblemInstance inst{{model::SmoothTerm::linear(std::move(neg), 1e-6), LinearMap::identity(n),
                        oracles::make_spectrahedron(d, static_cast<double>(d), k_hat, opts),
                        oracles::make_diag_ones(d), std::nullopt},
                       {},
                       Vec(n, 0.0)};
  inst.spec.f.name = "-tr(CS)";
  const Vec id = DenseMatrix::identity(d).values();
  inst.q0 = {id, id};
  model::validate(inst.spec);
  return inst;
}

MaxCutMetrics metrics_maxcut(std::span<const double> s_matrix, const DenseMatrix& c) {
  const std::size_t d = c.rows();
  if (c.cols() != d || s_matrix.size() != d * d) throw DimensionMismatch("metrics_maxcut: shapes differ");
  MaxCutMetrics m;
  m.objective = -linalg::dot(c.values(), s_matrix);
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) sq += (s_matrix[i * d + i] - 1.0) * (s_matrix[i * d + i] - 1.0);
  m.diag_feasibility = std::sqrt(sq);
  return m;
}

}  // namespace wpmm::harness
