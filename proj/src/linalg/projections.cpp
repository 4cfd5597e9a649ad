#include "wpmm/linalg/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wpmm/errors.hpp"

namespace wpmm::linalg {

Vec project_simplex(std::span<const double> z, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("project_simplex: tau must be positive");
  if (!all_finite(z)) throw InvalidArgument("project_simplex: non-finite input");
  if (z.empty()) throw InvalidArgument("project_simplex: empty input");

  Vec sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - tau) / static_cast<double>(j + 1);
    // The support is the longest prefix whose entries stay above the threshold.
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Vec v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = std::max(z[i] - theta, 0.0);
  return v;
}

Vec project_l1_ball(std::span<const double> z, double s) {
  if (!(s > 0.0)) throw InvalidArgument("project_l1_ball: radius must be positive");
  if (!all_finite(z)) throw InvalidArgument("project_l1_ball: non-finite input");
  if (norm1(z) <= s) return Vec(z.begin(), z.end());

  Vec magnitude(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) magnitude[i] = std::abs(z[i]);
  Vec w = project_simplex(magnitude, s);
  for (std::size_t i = 0; i < z.size(); ++i) w[i] = std::copysign(w[i], z[i]);
  return w;
}

Vec project_box(std::span<const double> z, std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != z.size() || hi.size() != z.size()) throw DimensionMismatch("project_box: bound sizes");
  Vec v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = std::clamp(z[i], lo[i], hi[i]);
  return v;
}

}  // namespace wpmm::linalg
