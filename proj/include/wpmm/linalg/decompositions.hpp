#pragma once

#include <cstdint>
#include <span>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::linalg {

// Leading singular triplets: M ~= U diag(sigma) V^T.
struct TruncatedFactors {
  DenseMatrix U;  // m x k, orthonormal columns
  Vec sigma;      // k values, nonincreasing, nonnegative
  DenseMatrix V;  // n x k, orthonormal columns
};

// Leading (algebraically largest) eigenpairs of a symmetric matrix.
struct EigenPairs {
  DenseMatrix U;  // d x k, orthonormal columns
  Vec lambda;     // k values, nonincreasing
};

struct LanczosOptions {
  std::uint64_t seed = 0x5eed;
  // Krylov basis size before a restart; 0 picks min(n, max(2k + 10, 20)).
  std::size_t basis_size = 0;
  // 0 picks max(4k, 30).
  std::size_t max_restarts = 0;
  // When the basis would span the whole space, use the dense decomposition.
  bool allow_dense = true;
};

// Full symmetric eigendecomposition (Eigen's self-adjoint solver). Eigenvalues
// in nonincreasing order, eigenvectors as columns.
EigenPairs symmetric_eigen(const DenseMatrix& m);

// Thin SVD (Eigen's Jacobi SVD). k = min(rows, cols) triplets.
TruncatedFactors svd_dense(const DenseMatrix& m);

Vec singular_values(const DenseMatrix& m);
double nuclear_norm(const DenseMatrix& m);

// Top-k singular triplets by Golub-Kahan-Lanczos bidiagonalization with full
// reorthogonalization and thick restarts. Stops when every retained triplet
// has ||M v_i - s_i u_i|| <= tol * s_1 and ||M^T u_i - s_i v_i|| <= tol * s_1.
// Throws ConvergenceError when the restart cap is exhausted.
TruncatedFactors truncated_svd(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts = {});

// Top-k algebraically largest eigenpairs of a symmetric matrix by thick-restart
// Lanczos with full reorthogonalization. Residual target:
// ||M u_i - l_i u_i|| <= tol * max(1, |l_1|).
EigenPairs truncated_eigh(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts = {});

// Lower-triangular L with L L^T = m. Throws InvalidArgument if m is not
// numerically positive definite.
DenseMatrix cholesky(const DenseMatrix& m);

// U diag(s) V^T for U (m x k), V (n x k).
DenseMatrix reconstruct(const DenseMatrix& u, std::span<const double> s, const DenseMatrix& v);

}  // namespace wpmm::linalg
