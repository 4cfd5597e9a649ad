#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "wpmm/linalg/dense_matrix.hpp"
#include "wpmm/linear_map.hpp"
#include "wpmm/oracles/component.hpp"

namespace wpmm::model {

// Convex beta-smooth f on E1.
struct SmoothTerm {
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;
  double beta = 1.0;
  // Strong convexity modulus, when known.
  std::optional<double> alpha;
  // f is quadratic (or affine): the curvature along d is exactly
  // <grad f(x + d) - grad f(x), d>.
  bool quadratic = false;
  std::string name;

  // 0.5 ||x - a||^2
  static SmoothTerm half_squared_distance(Vec a);
  // 0.5 ||B x - b||^2; beta = sigma_max(B)^2, alpha = sigma_min(B)^2 when B has
  // full column rank.
  static SmoothTerm least_squares(linalg::DenseMatrix b_mat, Vec b);
  // 0.5 x^T Q x + c^T x for symmetric PSD Q.
  static SmoothTerm quadratic_form(linalg::DenseMatrix q, Vec c);
  // <c, x>; beta is a positive floor since affine terms have no curvature.
  static SmoothTerm linear(Vec c, double beta_floor = 1e-6);
  static SmoothTerm zero(std::size_t n, double beta_floor = 1e-6);
};

struct PrimalPoint {
  Vec x;
  Vec y;

  friend bool operator==(const PrimalPoint&, const PrimalPoint&) = default;
};

using DualPoint = Vec;

// min f(x) + R_X(x) + R_Y(y)  s.t.  A x = y.
struct ProblemSpec {
  SmoothTerm f;
  LinearMap A;
  oracles::ComponentPtr rx;
  oracles::ComponentPtr ry;
  // PQG modulus of S; computed from f.alpha when absent (see effective_pqg_alpha).
  std::optional<double> pqg_alpha;

  std::size_t dim_x() const { return A.in_dim; }
  std::size_t dim_y() const { return A.out_dim; }
};

// Throws DimensionMismatch/InvalidArgument if the pieces do not fit together.
void validate(const ProblemSpec& spec);

PrimalPoint lerp(const PrimalPoint& a, const PrimalPoint& b, double t);
double norm2(const PrimalPoint& q);
double distance(const PrimalPoint& a, const PrimalPoint& b);

}  // namespace wpmm::model
