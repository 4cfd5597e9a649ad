#include <omp.h>

#include <algorithm>
#include <cstdint>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/kernels.hpp"

namespace wpmm::linalg::kernels::omp {

namespace {
// Below this many multiply-adds the fork/join costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 14;
}  // namespace

Vec gemv(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DimensionMismatch("gemv: x has wrong length");
  const auto m = static_cast<std::int64_t>(a.rows());
  const std::size_t n = a.cols();
  Vec y(a.rows());
  const double* ad = a.data().data();
#pragma omp parallel for schedule(static) if (a.size() > kParallelWork)
  for (std::int64_t i = 0; i < m; ++i) {
    const double* row = ad + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Vec gemv_t(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw DimensionMismatch("gemv_t: x has wrong length");
  const std::size_t m = a.rows(), n = a.cols();
  // Column tiles: each thread sweeps the rows over its own contiguous tile.
  constexpr std::size_t kTile = 256;
  const auto tiles = static_cast<std::int64_t>((n + kTile - 1) / kTile);
  Vec y(n, 0.0);
  const double* ad = a.data().data();
#pragma omp parallel for schedule(static) if (a.size() > kParallelWork)
  for (std::int64_t t = 0; t < tiles; ++t) {
    const std::size_t j0 = static_cast<std::size_t>(t) * kTile, j1 = std::min(n, j0 + kTile);
    double* yt = y.data();
    for (std::size_t i = 0; i < m; ++i) {
      const double xi = x[i];
      const double* row = ad + i * n;
      for (std::size_t j = j0; j < j1; ++j) yt[j] += row[j] * xi;
    }
  }
  return y;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("gemm: inner dimensions differ");
  const auto m = static_cast<std::int64_t>(a.rows());
  const std::size_t p = a.cols(), n = b.cols();
  DenseMatrix c(a.rows(), n);
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  double* cd = c.data().data();
#pragma omp parallel for schedule(static) if (a.rows() * p * n > kParallelWork)
  for (std::int64_t i = 0; i < m; ++i) {
    double* crow = cd + static_cast<std::size_t>(i) * n;
    const double* arow = ad + static_cast<std::size_t>(i) * p;
    for (std::size_t k = 0; k < p; ++k) {
      const double aik = arow[k];
      const double* brow = bd + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("gemm_tn: row counts differ");
  const std::size_t m = a.rows();
  const auto p = static_cast<std::int64_t>(a.cols());
  const std::size_t n = b.cols();
  DenseMatrix c(a.cols(), n);
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  double* cd = c.data().data();
#pragma omp parallel for schedule(static) if (m * a.cols() * n > kParallelWork)
  for (std::int64_t r = 0; r < p; ++r) {
    double* crow = cd + static_cast<std::size_t>(r) * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double air = ad[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(r)];
      const double* brow = bd + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += air * brow[j];
    }
  }
  return c;
}

DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("gemm_nt: column counts differ");
  const auto m = static_cast<std::int64_t>(a.rows());
  const std::size_t n = b.rows(), p = a.cols();
  DenseMatrix c(a.rows(), n);
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  double* cd = c.data().data();
#pragma omp parallel for schedule(static) if (a.rows() * n * p > kParallelWork)
  for (std::int64_t i = 0; i < m; ++i) {
    const double* arow = ad + static_cast<std::size_t>(i) * p;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = bd + j * p;
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += arow[k] * brow[k];
      cd[static_cast<std::size_t>(i) * n + j] = s;
    }
  }
  return c;
}

}  // namespace wpmm::linalg::kernels::omp
