#include "wpmm/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/linalg/kernels.hpp"
#include "wpmm/linalg/operator_norm.hpp"
#include "wpmm/rng.hpp"

namespace wpmm {

using linalg::DenseMatrix;

Vec LinearMap::operator()(std::span<const double> x) const {
  if (x.size() != in_dim) throw DimensionMismatch("LinearMap: input has length " + std::to_string(x.size()) +
                                                  ", expected " + std::to_string(in_dim));
  return apply(x);
}

Vec LinearMap::transpose_apply(std::span<const double> w) const {
  if (w.size() != out_dim) throw DimensionMismatch("LinearMap: adjoint input has length " + std::to_string(w.size()) +
                                                   ", expected " + std::to_string(out_dim));
  return adjoint(w);
}

LinearMap LinearMap::identity(std::size_t n) {
  auto id = [](std::span<const double> x) { return Vec(x.begin(), x.end()); };
  return {n, n, id, id, 1.0, "identity"};
}

LinearMap LinearMap::dense(DenseMatrix a) {
  LinearMap m;
  m.in_dim = a.cols();
  m.out_dim = a.rows();
  auto shared = std::make_shared<const DenseMatrix>(std::move(a));
  m.apply = [shared](std::span<const double> x) { return linalg::kernels::gemv(*shared, x); };
  m.adjoint = [shared](std::span<const double> w) { return linalg::kernels::gemv_t(*shared, w); };
  m.name = "dense";
  // Power iteration can undershoot on clustered spectra; take the exact top
  // singular value as a floor.
  m.norm_bound = std::max(linalg::operator_norm_bound(m, 200), linalg::singular_values(*shared).front());
  return m;
}

LinearMap LinearMap::diagonal(Vec d) {
  LinearMap m;
  m.in_dim = m.out_dim = d.size();
  double mx = 0.0;
  for (double v : d) mx = std::max(mx, std::abs(v));
  auto shared = std::make_shared<const Vec>(std::move(d));
  auto f = [shared](std::span<const double> x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (*shared)[i] * x[i];
    return y;
  };
  m.apply = f;
  m.adjoint = f;
  m.norm_bound = mx;
  m.name = "diagonal";
  return m;
}

LinearMap LinearMap::stacked_identity(std::size_t n, std::size_t copies) {
  if (copies == 0) throw InvalidArgument("stacked_identity: copies must be positive");
  LinearMap m;
  m.in_dim = n;
  m.out_dim = n * copies;
  m.apply = [n, copies](std::span<const double> x) {
    Vec y(n * copies);
    for (std::size_t c = 0; c < copies; ++c) std::copy(x.begin(), x.end(), y.begin() + static_cast<std::ptrdiff_t>(c * n));
    return y;
  };
  m.adjoint = [n, copies](std::span<const double> w) {
    Vec x(n, 0.0);
    for (std::size_t c = 0; c < copies; ++c)
      for (std::size_t i = 0; i < n; ++i) x[i] += w[c * n + i];
    return x;
  };
  m.norm_bound = std::sqrt(static_cast<double>(copies));
  m.name = "stacked_identity";
  return m;
}

void validate_linear_map(const LinearMap& a, std::size_t probes, std::uint64_t seed) {
  if (!a.apply || !a.adjoint) throw InvalidArgument("LinearMap: apply and adjoint are required");
  Rng rng(seed);
  for (std::size_t p = 0; p < probes; ++p) {
    const Vec x = rng.normal_vector(a.in_dim);
    const Vec w = rng.normal_vector(a.out_dim);
    const Vec ax = a.apply(x);
    const Vec atw = a.adjoint(w);
    if (ax.size() != a.out_dim || atw.size() != a.in_dim)
      throw DimensionMismatch("LinearMap: apply/adjoint dimensions disagree with the declared shape");
    const double lhs = linalg::dot(ax, w), rhs = linalg::dot(x, atw);
    const double scale = 1.0 + linalg::norm2(x) * linalg::norm2(w) * std::max(1.0, a.norm_bound);
    if (std::abs(lhs - rhs) > 1e-10 * scale)
      throw InvalidArgument("LinearMap: adjoint mismatch (" + std::to_string(std::abs(lhs - rhs)) + ")");
  }
  const double est = linalg::operator_norm_bound(a, 100, seed) / 1.01;
  if (a.norm_bound < est * (1.0 - 1e-9))
    throw InvalidArgument("LinearMap: norm_bound " + std::to_string(a.norm_bound) + " below estimate " +
                          std::to_string(est));
}

}  // namespace wpmm
