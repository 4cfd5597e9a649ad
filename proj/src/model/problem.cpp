#include "wpmm/model/problem.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/linalg/kernels.hpp"

namespace wpmm::model {

using linalg::DenseMatrix;

SmoothTerm SmoothTerm::half_squared_distance(Vec a) {
  auto target = std::make_shared<const Vec>(std::move(a));
  SmoothTerm f;
  f.value = [target](std::span<const double> x) {
    const double d = linalg::distance(x, *target);
    return 0.5 * d * d;
  };
  f.gradient = [target](std::span<const double> x) { return linalg::sub(x, *target); };
  f.beta = 1.0;
  f.alpha = 1.0;
  f.quadratic = true;
  f.name = "half_squared_distance";
  return f;
}

SmoothTerm SmoothTerm::least_squares(DenseMatrix b_mat, Vec b) {
  if (b_mat.rows() != b.size()) throw DimensionMismatch("least_squares: rows of B must match b");
  const Vec s = linalg::singular_values(b_mat);
  auto mat = std::make_shared<const DenseMatrix>(std::move(b_mat));
  auto rhs = std::make_shared<const Vec>(std::move(b));
  SmoothTerm f;
  f.value = [mat, rhs](std::span<const double> x) {
    const Vec r = linalg::sub(linalg::kernels::gemv(*mat, x), *rhs);
    const double n = linalg::norm2(r);
    return 0.5 * n * n;
  };
  f.gradient = [mat, rhs](std::span<const double> x) {
    return linalg::kernels::gemv_t(*mat, linalg::sub(linalg::kernels::gemv(*mat, x), *rhs));
  };
  f.beta = std::max(s.front() * s.front(), 1e-12);
  if (mat->rows() >= mat->cols() && s.back() > 1e-12 * s.front()) f.alpha = s.back() * s.back();
  f.quadratic = true;
  f.name = "least_squares";
  return f;
}

SmoothTerm SmoothTerm::quadratic_form(DenseMatrix q, Vec c) {
  if (!q.square() || q.rows() != c.size()) throw DimensionMismatch("quadratic_form: Q must be n x n with c of length n");
  if (q.asymmetry() > 1e-10 * std::max(1.0, q.max_abs())) throw InvalidArgument("quadratic_form: Q is not symmetric");
  const linalg::EigenPairs eig = linalg::symmetric_eigen(q);
  if (eig.lambda.back() < -1e-10 * std::max(1.0, std::abs(eig.lambda.front())))
    throw InvalidArgument("quadratic_form: Q is not positive semidefinite");
  auto mat = std::make_shared<const DenseMatrix>(std::move(q));
  auto lin = std::make_shared<const Vec>(std::move(c));
  SmoothTerm f;
  f.value = [mat, lin](std::span<const double> x) {
    return 0.5 * linalg::dot(x, linalg::kernels::gemv(*mat, x)) + linalg::dot(*lin, x);
  };
  f.gradient = [mat, lin](std::span<const double> x) { return linalg::add(linalg::kernels::gemv(*mat, x), *lin); };
  f.beta = std::max(eig.lambda.front(), 1e-12);
  if (eig.lambda.back() > 1e-12 * f.beta) f.alpha = eig.lambda.back();
  f.quadratic = true;
  f.name = "quadratic_form";
  return f;
}

SmoothTerm SmoothTerm::linear(Vec c, double beta_floor) {
  if (!(beta_floor > 0.0)) throw InvalidArgument("linear: beta floor must be positive");
  auto lin = std::make_shared<const Vec>(std::move(c));
  SmoothTerm f;
  f.value = [lin](std::span<const double> x) { return linalg::dot(*lin, x); };
  f.gradient = [lin](std::span<const double>) { return *lin; };
  f.beta = beta_floor;
  f.quadratic = true;
  f.name = "linear";
  return f;
}

SmoothTerm SmoothTerm::zero(std::size_t n, double beta_floor) {
  SmoothTerm f = linear(Vec(n, 0.0), beta_floor);
  f.name = "zero";
  return f;
}

void validate(const ProblemSpec& spec) {
  if (!spec.f.value || !spec.f.gradient) throw InvalidArgument("ProblemSpec: f needs value and gradient");
  if (!(spec.f.beta > 0.0)) throw InvalidArgument("ProblemSpec: f.beta must be positive");
  if (spec.f.alpha && *spec.f.alpha < 0.0) throw InvalidArgument("ProblemSpec: f.alpha must be nonnegative");
  if (!spec.A.apply || !spec.A.adjoint) throw InvalidArgument("ProblemSpec: A needs apply and adjoint");
  if (!spec.rx || !spec.ry) throw InvalidArgument("ProblemSpec: both regularizer slots must be filled");
  if (spec.rx->dim() != spec.A.in_dim)
    throw DimensionMismatch("ProblemSpec: R_X acts on dimension " + std::to_string(spec.rx->dim()) +
                            " but A has input dimension " + std::to_string(spec.A.in_dim));
  if (spec.ry->dim() != spec.A.out_dim)
    throw DimensionMismatch("ProblemSpec: R_Y acts on dimension " + std::to_string(spec.ry->dim()) +
                            " but A has output dimension " + std::to_string(spec.A.out_dim));
  if (spec.pqg_alpha && !(*spec.pqg_alpha > 0.0)) throw InvalidArgument("ProblemSpec: pqg_alpha must be positive");
}

PrimalPoint lerp(const PrimalPoint& a, const PrimalPoint& b, double t) {
  return {linalg::lerp(a.x, b.x, t), linalg::lerp(a.y, b.y, t)};
}

double norm2(const PrimalPoint& q) { return std::hypot(linalg::norm2(q.x), linalg::norm2(q.y)); }

double distance(const PrimalPoint& a, const PrimalPoint& b) {
  return std::hypot(linalg::distance(a.x, b.x), linalg::distance(a.y, b.y));
}

}  // namespace wpmm::model
