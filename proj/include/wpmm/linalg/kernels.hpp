#pragma once

#include <span>

#include "wpmm/linalg/dense_matrix.hpp"

// Dense products used by the decompositions and the harness.
//
// Two implementations with identical signatures:
//   kernels::omp     OpenMP-parallel, used by the library.
//   kernels::serial  textbook loops, kept as the reference for tests and the
//                    benchmark.
// Every output entry of the parallel versions is accumulated by one thread in
// a fixed order, so results do not depend on the thread count.
namespace wpmm::linalg::kernels {

namespace omp {
// y = A x
Vec gemv(const DenseMatrix& a, std::span<const double> x);
// y = A^T x
Vec gemv_t(const DenseMatrix& a, std::span<const double> x);
// C = A B
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);
// C = A^T B
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b);
// C = A B^T
DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b);
}  // namespace omp

namespace serial {
Vec gemv(const DenseMatrix& a, std::span<const double> x);
Vec gemv_t(const DenseMatrix& a, std::span<const double> x);
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b);
}  // namespace serial

using omp::gemm;
using omp::gemm_nt;
using omp::gemm_tn;
using omp::gemv;
using omp::gemv_t;

}  // namespace wpmm::linalg::kernels
