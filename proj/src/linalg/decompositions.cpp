#include "wpmm/linalg/decompositions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/kernels.hpp"
#include "wpmm/rng.hpp"

namespace wpmm::linalg {

namespace {

using EMatrix = Eigen::MatrixXd;
using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

EMatrix to_eigen(const DenseMatrix& m) {
  return RowMajorMap(m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

DenseMatrix from_eigen(const EMatrix& e) {
  DenseMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

void require_finite(const DenseMatrix& m, const char* who) {
  if (!m.all_finite()) throw InvalidArgument(std::string(who) + ": non-finite entries");
}

// Orthogonalize v against basis by two passes of classical Gram-Schmidt.
// Returns the norm of the remainder before normalization.
double orthogonalize(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& b : basis) axpy(-dot(b, v), b, v);
  }
  return norm2(v);
}

// Fill v with a unit vector orthogonal to basis. Returns false when the basis
// already spans the space.
bool random_orthogonal(Vec& v, const std::vector<Vec>& basis, Rng& rng) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    v = rng.normal_vector(v.size());
    const double before = norm2(v);
    const double after = orthogonalize(v, basis);
    if (after > 1e-8 * before) {
      scale(v, 1.0 / after);
      return true;
    }
  }
  return false;
}

Vec combine(const std::vector<Vec>& basis, const EMatrix& coeffs, Eigen::Index col) {
  Vec out(basis.front().size(), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) axpy(coeffs(static_cast<Eigen::Index>(i), col), basis[i], out);
  return out;
}

std::size_t default_basis(std::size_t n, std::size_t k, const LanczosOptions& opts) {
  std::size_t b = opts.basis_size ? opts.basis_size : std::max<std::size_t>(2 * k + 10, 20);
  b = std::max(b, k + 1);
  return std::min(b, n);
}

std::size_t default_restarts(std::size_t k, const LanczosOptions& opts) {
  return opts.max_restarts ? opts.max_restarts : std::max<std::size_t>(4 * k, 30);
}

TruncatedFactors take_leading(const TruncatedFactors& full, std::size_t k) {
  TruncatedFactors out{DenseMatrix(full.U.rows(), k), Vec(full.sigma.begin(), full.sigma.begin() + static_cast<std::ptrdiff_t>(k)),
                       DenseMatrix(full.V.rows(), k)};
  for (std::size_t i = 0; i < full.U.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out.U(i, j) = full.U(i, j);
  for (std::size_t i = 0; i < full.V.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out.V(i, j) = full.V(i, j);
  return out;
}

TruncatedFactors transpose_factors(TruncatedFactors f) {
  std::swap(f.U, f.V);
  return f;
}

// Golub-Kahan expansion with explicit Rayleigh-Ritz on B = U^T M V. Assumes
// rows >= cols.
TruncatedFactors lanczos_svd(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t basis_cap = default_basis(cols, k, opts);
  const std::size_t restarts = default_restarts(k, opts);
  const double anorm = m.frobenius_norm();
  const double floor = 64.0 * kEps * anorm;

  Rng rng(opts.seed);
  std::vector<Vec> V, U, MV, MtU;
  Vec pending(cols);
  if (!random_orthogonal(pending, V, rng)) throw InvalidArgument("truncated_svd: empty matrix");
  bool have_pending = true;
  double attained = std::numeric_limits<double>::infinity();

  for (std::size_t restart = 0; restart <= restarts; ++restart) {
    while (V.size() < basis_cap && have_pending) {
      V.push_back(pending);
      MV.push_back(kernels::gemv(m, V.back()));
      Vec u = MV.back();
      const double un = orthogonalize(u, U);
      if (un > 1e-12 * std::max(anorm, 1e-300)) {
        scale(u, 1.0 / un);
      } else if (!random_orthogonal(u, U, rng)) {
        u.assign(rows, 0.0);
      }
      U.push_back(u);
      MtU.push_back(kernels::gemv_t(m, U.back()));
      pending = MtU.back();
      const double vn = orthogonalize(pending, V);
      if (vn > 1e-12 * std::max(anorm, 1e-300)) {
        scale(pending, 1.0 / vn);
      } else {
        have_pending = random_orthogonal(pending, V, rng);
      }
    }

    const auto j = static_cast<Eigen::Index>(V.size());
    EMatrix B(j, j);
    for (Eigen::Index a = 0; a < j; ++a)
      for (Eigen::Index b = 0; b < j; ++b)
        B(a, b) = dot(U[static_cast<std::size_t>(a)], MV[static_cast<std::size_t>(b)]);
    Eigen::JacobiSVD<EMatrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const EMatrix& P = svd.matrixU();
    const EMatrix& Q = svd.matrixV();
    const Eigen::VectorXd& s = svd.singularValues();

    const double threshold = std::max(tol * s(0), floor);
    attained = 0.0;
    bool converged = true;
    for (std::size_t i = 0; i < k; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const Vec v = combine(V, Q, ii), u = combine(U, P, ii);
      Vec r1 = combine(MV, Q, ii), r2 = combine(MtU, P, ii);
      axpy(-s(ii), u, r1);
      axpy(-s(ii), v, r2);
      const double r = std::max(norm2(r1), norm2(r2));
      attained = std::max(attained, r / std::max(s(0), 1e-300));
      if (r > threshold) converged = false;
    }

    const std::size_t keep = converged ? k : std::min<std::size_t>(V.size(), k + (basis_cap - k) / 2);
    std::vector<Vec> nV, nU, nMV, nMtU;
    for (std::size_t i = 0; i < keep; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      nV.push_back(combine(V, Q, ii));
      nU.push_back(combine(U, P, ii));
      nMV.push_back(combine(MV, Q, ii));
      nMtU.push_back(combine(MtU, P, ii));
    }
    if (converged || !have_pending) {
      if (!converged && attained > tol)
        break;
      TruncatedFactors out{DenseMatrix(rows, k), Vec(k), DenseMatrix(cols, k)};
      for (std::size_t i = 0; i < k; ++i) {
        out.sigma[i] = s(static_cast<Eigen::Index>(i));
        for (std::size_t r = 0; r < rows; ++r) out.U(r, i) = nU[i][r];
        for (std::size_t r = 0; r < cols; ++r) out.V(r, i) = nV[i][r];
      }
      return out;
    }
    V = std::move(nV);
    U = std::move(nU);
    MV = std::move(nMV);
    MtU = std::move(nMtU);
  }
  throw ConvergenceError("truncated_svd: no convergence within the restart cap (relative residual " +
                             std::to_string(attained) + ")",
                         attained);
}

EigenPairs lanczos_eigh(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts) {
  const std::size_t d = m.rows();
  const std::size_t basis_cap = default_basis(d, k, opts);
  const std::size_t restarts = default_restarts(k, opts);
  const double anorm = m.frobenius_norm();
  const double floor = 64.0 * kEps * anorm;

  Rng rng(opts.seed);
  std::vector<Vec> V, MV;
  Vec pending(d);
  if (!random_orthogonal(pending, V, rng)) throw InvalidArgument("truncated_eigh: empty matrix");
  bool have_pending = true;
  double attained = std::numeric_limits<double>::infinity();

  for (std::size_t restart = 0; restart <= restarts; ++restart) {
    while (V.size() < basis_cap && have_pending) {
      V.push_back(pending);
      MV.push_back(kernels::gemv(m, V.back()));
      pending = MV.back();
      const double wn = orthogonalize(pending, V);
      if (wn > 1e-12 * std::max(anorm, 1e-300)) {
        scale(pending, 1.0 / wn);
      } else {
        have_pending = random_orthogonal(pending, V, rng);
      }
    }

    const auto j = static_cast<Eigen::Index>(V.size());
    EMatrix H(j, j);
    for (Eigen::Index a = 0; a < j; ++a)
      for (Eigen::Index b = 0; b < j; ++b)
        H(a, b) = dot(V[static_cast<std::size_t>(a)], MV[static_cast<std::size_t>(b)]);
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<EMatrix> es(H);
    // Descending order.
    EMatrix Y = es.eigenvectors().rowwise().reverse();
    Eigen::VectorXd theta = es.eigenvalues().reverse();

    const double threshold = std::max(tol * std::max(1.0, std::abs(theta(0))), floor);
    attained = 0.0;
    bool converged = true;
    for (std::size_t i = 0; i < k; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      Vec r = combine(MV, Y, ii);
      axpy(-theta(ii), combine(V, Y, ii), r);
      const double rn = norm2(r);
      attained = std::max(attained, rn / std::max(1.0, std::abs(theta(0))));
      if (rn > threshold) converged = false;
    }

    const std::size_t keep = converged ? k : std::min<std::size_t>(V.size(), k + (basis_cap - k) / 2);
    std::vector<Vec> nV, nMV;
    for (std::size_t i = 0; i < keep; ++i) {
      nV.push_back(combine(V, Y, static_cast<Eigen::Index>(i)));
      nMV.push_back(combine(MV, Y, static_cast<Eigen::Index>(i)));
    }
    if (converged || !have_pending) {
      if (!converged && attained > tol) break;
      EigenPairs out{DenseMatrix(d, k), Vec(k)};
      for (std::size_t i = 0; i < k; ++i) {
        out.lambda[i] = theta(static_cast<Eigen::Index>(i));
        for (std::size_t r = 0; r < d; ++r) out.U(r, i) = nV[i][r];
      }
      return out;
    }
    V = std::move(nV);
    MV = std::move(nMV);
  }
  throw ConvergenceError("truncated_eigh: no convergence within the restart cap (relative residual " +
                             std::to_string(attained) + ")",
                         attained);
}

}  // namespace

EigenPairs symmetric_eigen(const DenseMatrix& m) {
  if (!m.square()) throw DimensionMismatch("symmetric_eigen: matrix is not square");
  require_finite(m, "symmetric_eigen");
  EMatrix e = to_eigen(m);
  e = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<EMatrix> es(e);
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric_eigen: QL iteration failed", 0.0);
  EigenPairs out{from_eigen(es.eigenvectors().rowwise().reverse()), Vec(m.rows())};
  const Eigen::VectorXd ev = es.eigenvalues().reverse();
  for (std::size_t i = 0; i < m.rows(); ++i) out.lambda[i] = ev(static_cast<Eigen::Index>(i));
  return out;
}

TruncatedFactors svd_dense(const DenseMatrix& m) {
  require_finite(m, "svd_dense");
  if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("svd_dense: empty matrix");
  Eigen::JacobiSVD<EMatrix> svd(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const std::size_t k = std::min(m.rows(), m.cols());
  TruncatedFactors out{from_eigen(svd.matrixU()), Vec(k), from_eigen(svd.matrixV())};
  for (std::size_t i = 0; i < k; ++i) out.sigma[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
  return out;
}

Vec singular_values(const DenseMatrix& m) {
  require_finite(m, "singular_values");
  Eigen::JacobiSVD<EMatrix> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  return Vec(s.data(), s.data() + s.size());
}

double nuclear_norm(const DenseMatrix& m) {
  const Vec s = singular_values(m);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

TruncatedFactors truncated_svd(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts) {
  if (k < 1 || k > std::min(m.rows(), m.cols()))
    throw InvalidArgument("truncated_svd: k = " + std::to_string(k) + " outside [1, min(rows, cols)]");
  if (!(tol > 0.0)) throw InvalidArgument("truncated_svd: tol must be positive");
  require_finite(m, "truncated_svd");
  if (m.rows() < m.cols()) return transpose_factors(truncated_svd(m.transposed(), k, tol, opts));
  if (opts.allow_dense && default_basis(m.cols(), k, opts) >= m.cols()) return take_leading(svd_dense(m), k);
  return lanczos_svd(m, k, tol, opts);
}

EigenPairs truncated_eigh(const DenseMatrix& m, std::size_t k, double tol, const LanczosOptions& opts) {
  if (!m.square()) throw DimensionMismatch("truncated_eigh: matrix is not square");
  if (k < 1 || k > m.rows()) throw InvalidArgument("truncated_eigh: k = " + std::to_string(k) + " outside [1, d]");
  if (!(tol > 0.0)) throw InvalidArgument("truncated_eigh: tol must be positive");
  require_finite(m, "truncated_eigh");
  if (m.asymmetry() > 1e-10 * std::max(1.0, m.max_abs()))
    throw InvalidArgument("truncated_eigh: matrix is not symmetric (asymmetry " + std::to_string(m.asymmetry()) + ")");
  if (opts.allow_dense && default_basis(m.rows(), k, opts) >= m.rows()) {
    EigenPairs full = symmetric_eigen(m);
    EigenPairs out{DenseMatrix(m.rows(), k), Vec(full.lambda.begin(), full.lambda.begin() + static_cast<std::ptrdiff_t>(k))};
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < k; ++j) out.U(i, j) = full.U(i, j);
    return out;
  }
  return lanczos_eigh(m, k, tol, opts);
}

DenseMatrix cholesky(const DenseMatrix& m) {
  if (!m.square()) throw DimensionMismatch("cholesky: matrix is not square");
  require_finite(m, "cholesky");
  Eigen::LLT<EMatrix> llt(to_eigen(m));
  if (llt.info() != Eigen::Success) throw InvalidArgument("cholesky: matrix is not positive definite");
  return from_eigen(llt.matrixL());
}

DenseMatrix reconstruct(const DenseMatrix& u, std::span<const double> s, const DenseMatrix& v) {
  if (u.cols() != s.size() || v.cols() != s.size()) throw DimensionMismatch("reconstruct: factor ranks differ");
  DenseMatrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) us(i, j) *= s[j];
  return kernels::gemm_nt(us, v);
}

}  // namespace wpmm::linalg
