#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm {

// A linear map E1 -> E2 given by its action and adjoint on flat vectors.
struct LinearMap {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::function<Vec(std::span<const double>)> apply;
  std::function<Vec(std::span<const double>)> adjoint;
  // Upper bound on the operator norm.
  double norm_bound = 0.0;
  std::string name;

  Vec operator()(std::span<const double> x) const;
  Vec transpose_apply(std::span<const double> w) const;

  static LinearMap identity(std::size_t n);
  // Dense A; norm_bound from the power-iteration estimate.
  static LinearMap dense(linalg::DenseMatrix a);
  static LinearMap diagonal(Vec d);
  // x -> (x, x, ..., x) with `copies` blocks; norm sqrt(copies).
  static LinearMap stacked_identity(std::size_t n, std::size_t copies);
};

// Checks <A x, w> = <x, A^T w> on random probes and norm_bound >= the
// power-iteration estimate. Throws InvalidArgument describing the failure.
void validate_linear_map(const LinearMap& a, std::size_t probes = 10, std::uint64_t seed = 7);

}  // namespace wpmm
