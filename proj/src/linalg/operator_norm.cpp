#include "wpmm/linalg/operator_norm.hpp"

#include <algorithm>
#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/rng.hpp"

namespace wpmm::linalg {

double operator_norm_bound(const LinearMap& a, std::size_t iters, std::uint64_t seed) {
  if (!a.apply || !a.adjoint) throw InvalidArgument("operator_norm_bound: map lacks apply or adjoint");
  if (a.in_dim == 0) return 0.0;
  Rng rng(seed);
  Vec x = rng.normal_vector(a.in_dim);
  scale(x, 1.0 / norm2(x));
  double best = 0.0;
  for (std::size_t it = 0; it < std::max<std::size_t>(iters, 1); ++it) {
    const Vec ax = a.apply(x);
    if (ax.size() != a.out_dim) throw DimensionMismatch("operator_norm_bound: apply returned the wrong length");
    Vec atax = a.adjoint(ax);
    if (atax.size() != a.in_dim) throw DimensionMismatch("operator_norm_bound: adjoint returned the wrong length");
    best = std::max(best, norm2(ax));
    const double n = norm2(atax);
    if (n == 0.0) break;
    scale(atax, 1.0 / n);
    x = std::move(atax);
  }
  return 1.01 * best;
}

}  // namespace wpmm::linalg
