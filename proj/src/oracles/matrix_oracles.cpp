#include "wpmm/oracles/matrix_oracles.hpp"

#include <algorithm>
#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/kernels.hpp"
#include "wpmm/linalg/projections.hpp"

namespace wpmm::oracles {

using linalg::DenseMatrix;

namespace {

DenseMatrix shifted_center(const DenseMatrix& center, const DenseMatrix& p, double c, const char* who) {
  if (!(c > 0.0)) throw InvalidArgument(std::string(who) + ": c must be positive");
  if (center.rows() != p.rows() || center.cols() != p.cols())
    throw DimensionMismatch(std::string(who) + ": center and p shapes differ");
  DenseMatrix m = center;
  linalg::axpy(-1.0 / c, p.data(), m.data());
  return m;
}

void check_rank(std::size_t k, std::size_t limit, const char* who) {
  if (k < 1 || k > limit) throw InvalidArgument(std::string(who) + ": rank " + std::to_string(k) + " outside [1, " +
                                                std::to_string(limit) + "]");
}

// U diag(s) U^T
DenseMatrix symmetric_reconstruct(const DenseMatrix& u, std::span<const double> s) {
  DenseMatrix out = linalg::reconstruct(u, s, u);
  out.symmetrize();
  return out;
}

DenseMatrix leading_columns(const DenseMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), k);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = m(i, j);
  return out;
}

// Lanczos stalls on tight clusters straddling the k-th value; the dense
// decomposition is used in that case.
linalg::TruncatedFactors leading_svd(const DenseMatrix& m, std::size_t k, const linalg::LanczosOptions& opts) {
  try {
    return linalg::truncated_svd(m, k, kDecompositionTol, opts);
  } catch (const ConvergenceError&) {
    linalg::TruncatedFactors f = linalg::svd_dense(m);
    f.sigma.resize(k);
    return {leading_columns(f.U, k), f.sigma, leading_columns(f.V, k)};
  }
}

linalg::EigenPairs leading_eigh(const DenseMatrix& m, std::size_t k, const linalg::LanczosOptions& opts) {
  try {
    return linalg::truncated_eigh(m, k, kDecompositionTol, opts);
  } catch (const ConvergenceError&) {
    linalg::EigenPairs e = linalg::symmetric_eigen(m);
    e.lambda.resize(k);
    return {leading_columns(e.U, k), e.lambda};
  }
}

}  // namespace

DenseMatrix wpo_nuclear_reg(const DenseMatrix& center, const DenseMatrix& p, double c, double nu, std::size_t k,
                            const linalg::LanczosOptions& opts) {
  if (!(nu > 0.0)) throw InvalidArgument("wpo_nuclear_reg: nu must be positive");
  check_rank(k, std::min(center.rows(), center.cols()), "wpo_nuclear_reg");
  const DenseMatrix m = shifted_center(center, p, c, "wpo_nuclear_reg");
  linalg::TruncatedFactors f = leading_svd(m, k, opts);
  const double zeta = nu / c;
  for (double& s : f.sigma) s = std::max(s - zeta, 0.0);
  return linalg::reconstruct(f.U, f.sigma, f.V);
}

DenseMatrix wpo_nuclear_ball(const DenseMatrix& center, const DenseMatrix& p, double c, double tau, std::size_t k,
                             const linalg::LanczosOptions& opts) {
  if (!(tau > 0.0)) throw InvalidArgument("wpo_nuclear_ball: tau must be positive");
  check_rank(k, std::min(center.rows(), center.cols()), "wpo_nuclear_ball");
  const DenseMatrix m = shifted_center(center, p, c, "wpo_nuclear_ball");
  linalg::TruncatedFactors f = leading_svd(m, k, opts);
  f.sigma = linalg::project_l1_ball(f.sigma, tau);
  return linalg::reconstruct(f.U, f.sigma, f.V);
}

DenseMatrix wpo_spectrahedron(const DenseMatrix& center, const DenseMatrix& p, double c, double tau, std::size_t k,
                              const linalg::LanczosOptions& opts) {
  if (!(tau > 0.0)) throw InvalidArgument("wpo_spectrahedron: tau must be positive");
  if (!center.square()) throw DimensionMismatch("wpo_spectrahedron: center is not square");
  check_rank(k, center.rows(), "wpo_spectrahedron");
  for (const DenseMatrix* x : {&center, &p}) {
    if (x->asymmetry() > 1e-10 * std::max(1.0, x->max_abs()))
      throw InvalidArgument("wpo_spectrahedron: input is not symmetric (asymmetry " +
                            std::to_string(x->asymmetry()) + ")");
  }
  DenseMatrix m = shifted_center(center, p, c, "wpo_spectrahedron");
  m.symmetrize();
  linalg::EigenPairs e = leading_eigh(m, k, opts);
  e.lambda = linalg::project_simplex(e.lambda, tau);
  return symmetric_reconstruct(e.U, e.lambda);
}

DenseMatrix prox_diag_ones(const DenseMatrix& center) {
  if (!center.square()) throw DimensionMismatch("prox_diag_ones: input is not square");
  DenseMatrix out = center;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix project_nuclear_ball(const DenseMatrix& m, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("project_nuclear_ball: tau must be positive");
  linalg::TruncatedFactors f = linalg::svd_dense(m);
  f.sigma = linalg::project_l1_ball(f.sigma, tau);
  return linalg::reconstruct(f.U, f.sigma, f.V);
}

DenseMatrix project_spectrahedron(const DenseMatrix& m, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("project_spectrahedron: tau must be positive");
  if (!m.square()) throw DimensionMismatch("project_spectrahedron: input is not square");
  DenseMatrix sym = m;
  sym.symmetrize();
  linalg::EigenPairs e = linalg::symmetric_eigen(sym);
  e.lambda = linalg::project_simplex(e.lambda, tau);
  return symmetric_reconstruct(e.U, e.lambda);
}

DenseMatrix prox_nuclear_norm(const DenseMatrix& m, double nu) {
  if (nu < 0.0) throw InvalidArgument("prox_nuclear_norm: nu must be nonnegative");
  linalg::TruncatedFactors f = linalg::svd_dense(m);
  for (double& s : f.sigma) s = std::max(s - nu, 0.0);
  return linalg::reconstruct(f.U, f.sigma, f.V);
}

}  // namespace wpmm::oracles
