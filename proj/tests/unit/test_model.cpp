#include <gtest/gtest.h>

#include <cmath>

#include "test_oracles.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/linalg/kernels.hpp"
#include "wpmm/oracles/components.hpp"

using namespace wpmm;
namespace wt = wpmm::testing;
using model::PrimalPoint;
using model::ProblemSpec;
using model::SmoothTerm;

namespace {

ProblemSpec spec_with(SmoothTerm f, LinearMap a, oracles::ComponentPtr rx, oracles::ComponentPtr ry) {
  ProblemSpec s{std::move(f), std::move(a), std::move(rx), std::move(ry), std::nullopt};
  model::validate(s);
  return s;
}

ProblemSpec free_identity(std::size_t n, SmoothTerm f) {
  return spec_with(std::move(f), LinearMap::identity(n), oracles::make_zero(n), oracles::make_zero(n));
}

ProblemSpec random_dense_problem(Rng& rng, std::size_t n, std::size_t m) {
  const linalg::DenseMatrix b = wt::random_matrix(rng, n + 2, n);
  return spec_with(SmoothTerm::least_squares(b, rng.normal_vector(n + 2)),
                   LinearMap::dense(wt::random_matrix(rng, m, n)), oracles::make_zero(n),
                   oracles::make_zero(m));
}

}  // namespace

TEST(KApply, Examples) {
  const ProblemSpec id = free_identity(2, SmoothTerm::zero(2));
  EXPECT_EQ(model::k_apply(id, {{1, 2}, {1, 2}}), (Vec{0, 0}));
  EXPECT_EQ(model::k_apply(id, {{1, 0}, {0, 0}}), (Vec{1, 0}));
  const ProblemSpec d = spec_with(SmoothTerm::zero(2), LinearMap::diagonal(Vec{2, 1}), oracles::make_zero(2),
                                  oracles::make_zero(2));
  EXPECT_EQ(model::k_apply(d, {{1, 1}, {2, 1}}), (Vec{0, 0}));
  EXPECT_THROW(model::k_apply(id, {{1, 0, 0}, {0, 0}}), DimensionMismatch);
}

TEST(KAdjoint, ExamplesAndProbes) {
  const ProblemSpec id = free_identity(2, SmoothTerm::zero(2));
  EXPECT_EQ(model::k_adjoint(id, Vec{0, 0}), (PrimalPoint{{0, 0}, {0, 0}}));
  EXPECT_EQ(model::k_adjoint(id, Vec{1, 2}), (PrimalPoint{{1, 2}, {-1, -2}}));
  EXPECT_THROW(model::k_adjoint(id, Vec{1}), DimensionMismatch);

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemSpec s = random_dense_problem(rng, 4, 3);
    const PrimalPoint q{rng.normal_vector(4), rng.normal_vector(3)};
    const Vec w = rng.normal_vector(3);
    const PrimalPoint kt = model::k_adjoint(s, w);
    const double lhs = linalg::dot(model::k_apply(s, q), w);
    const double rhs = linalg::dot(q.x, kt.x) + linalg::dot(q.y, kt.y);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + model::norm2(q) * linalg::norm2(w)));
  }
}

TEST(AlValue, Examples) {
  const ProblemSpec s = free_identity(2, SmoothTerm::half_squared_distance(Vec{0, 0}));
  EXPECT_DOUBLE_EQ(model::al_value(s, {{1, 0}, {0, 0}}, Vec{1, 1}, 2.0), 2.5);
  EXPECT_DOUBLE_EQ(model::smooth_value(s, {{1, 0}, {0, 0}}, Vec{1, 1}, 2.0), 2.5);
  EXPECT_DOUBLE_EQ(model::al_value(s, {{1, 2}, {1, 2}}, Vec{7, -3}, 4.0), 2.5);
  EXPECT_DOUBLE_EQ(model::smooth_value(s, {{1, 2}, {3, 4}}, Vec{0, 0}, 0.0), 2.5);

  const ProblemSpec boxed = spec_with(SmoothTerm::half_squared_distance(Vec{0, 0}), LinearMap::identity(2),
                                      oracles::make_box({0, 0}, {1, 1}), oracles::make_box({0, 0}, {1, 1}));
  EXPECT_TRUE(std::isinf(model::al_value(boxed, {{2, 0}, {0, 0}}, Vec{0, 0}, 1.0)));
  EXPECT_TRUE(std::isinf(model::objective_h(boxed, {{2, 0}, {0, 0}})));
  EXPECT_DOUBLE_EQ(model::objective_h(boxed, {{1, 0}, {0, 0}}), 0.5);
  // Tiny drift within tolerance counts as inside.
  EXPECT_DOUBLE_EQ(model::objective_h(boxed, {{1 + 1e-12, 0}, {0, 0}}), 0.5 * (1 + 1e-12) * (1 + 1e-12));
}

TEST(ObjectiveH, NuclearRegularizer) {
  const std::size_t n = 4;
  const ProblemSpec s = spec_with(SmoothTerm::zero(n), LinearMap::identity(n), oracles::make_nuclear_norm(2, 2, 1.0, 0),
                                  oracles::make_zero(n));
  EXPECT_NEAR(model::objective_h(s, {{2, 0, 0, 3}, {0, 0, 0, 0}}), 5.0, 1e-12);
}

TEST(SmoothGrad, ExamplesAndFiniteDifferences) {
  const ProblemSpec s = free_identity(2, SmoothTerm::zero(2));
  const PrimalPoint g = model::smooth_grad(s, {{1, 0}, {0, 0}}, Vec{0, 0}, 1.0);
  EXPECT_EQ(g, (PrimalPoint{{1, 0}, {-1, 0}}));

  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const ProblemSpec p = random_dense_problem(rng, 4, 3);
    PrimalPoint q{rng.normal_vector(4), rng.normal_vector(3)};
    const Vec w = rng.normal_vector(3);
    const double rho = rng.uniform(0.1, 3.0);
    const PrimalPoint grad = model::smooth_grad(p, q, w, rho);
    const double h = 1e-6;
    auto fd = [&](Vec& block, std::size_t i) {
      const double orig = block[i];
      block[i] = orig + h;
      const double up = model::smooth_value(p, q, w, rho);
      block[i] = orig - h;
      const double down = model::smooth_value(p, q, w, rho);
      block[i] = orig;
      return (up - down) / (2 * h);
    };
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(fd(q.x, i), grad.x[i], 1e-5 * std::max(1.0, std::abs(grad.x[i])));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(fd(q.y, i), grad.y[i], 1e-5 * std::max(1.0, std::abs(grad.y[i])));
  }
}

TEST(SmoothTerm, GradientAndSmoothnessAudit) {
  Rng rng(13);
  const linalg::DenseMatrix q = [&] {
    const linalg::DenseMatrix b = wt::random_matrix(rng, 5, 5);
    return linalg::kernels::gemm_tn(b, b);
  }();
  for (const SmoothTerm& f : {SmoothTerm::half_squared_distance(rng.normal_vector(5)),
                              SmoothTerm::least_squares(wt::random_matrix(rng, 7, 5), rng.normal_vector(7)),
                              SmoothTerm::quadratic_form(q, rng.normal_vector(5)), SmoothTerm::linear(rng.normal_vector(5))}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = rng.normal_vector(5), x2 = rng.normal_vector(5);
      const Vec g = f.gradient(x);
      for (std::size_t i = 0; i < 5; ++i) {
        Vec up = x, down = x;
        up[i] += 1e-6;
        down[i] -= 1e-6;
        EXPECT_NEAR((f.value(up) - f.value(down)) / 2e-6, g[i], 1e-5 * std::max(1.0, std::abs(g[i]))) << f.name;
      }
      EXPECT_LE(linalg::distance(f.gradient(x), f.gradient(x2)), f.beta * linalg::distance(x, x2) * (1 + 1e-12) + 1e-12)
          << f.name;
    }
  }
  linalg::DenseMatrix indefinite = linalg::DenseMatrix::diagonal(Vec{1, -1});
  EXPECT_THROW(SmoothTerm::quadratic_form(indefinite, Vec{0, 0}), InvalidArgument);
}

TEST(Constants, Formulas) {
  EXPECT_DOUBLE_EQ(model::beta_S(1, 1, 1), 5.0);
  EXPECT_DOUBLE_EQ(model::beta_S(2.5, 0, 7), 2.5);
  EXPECT_DOUBLE_EQ(model::beta_S(2, 3, 0), 5.0);
  EXPECT_NEAR(model::alpha_S_strongly_convex(1, 1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(model::alpha_S_strongly_convex(2, 1, 1), 0.5);
  // With ||A|| = 0 the second branch is rho, so alpha/2 wins once rho >= alpha/2.
  EXPECT_DOUBLE_EQ(model::alpha_S_strongly_convex(3, 2, 0), 1.5);
  EXPECT_DOUBLE_EQ(model::alpha_S_strongly_convex(3, 1, 0), 1.0);
  EXPECT_THROW(model::alpha_S_strongly_convex(0, 1, 1), InvalidArgument);
  EXPECT_THROW(model::alpha_S_strongly_convex(1, 0, 1), InvalidArgument);
  EXPECT_GE(model::beta_hat(5, 0.1, 1), 5.0);
}

TEST(Lagrangian, DecompositionAndDescentInequality) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3;
    const ProblemSpec s = spec_with(SmoothTerm::least_squares(wt::random_matrix(rng, 5, n), rng.normal_vector(5)),
                                    LinearMap::dense(wt::random_matrix(rng, n, n)),
                                    oracles::make_l1_ball(n, 100.0), oracles::make_nuclear_norm(1, n, 0.5, 0));
    const PrimalPoint q{rng.normal_vector(n), rng.normal_vector(n)};
    const PrimalPoint q2{rng.normal_vector(n), rng.normal_vector(n)};
    const Vec w = rng.normal_vector(n);
    const double rho = rng.uniform(0.0, 2.0);
    EXPECT_EQ(model::al_value(s, q, w, rho), model::smooth_value(s, q, w, rho) + model::regularizer_value(s, q));
    const double bs = model::beta_S(s.f.beta, rho, s.A.norm_bound);
    const PrimalPoint g = model::smooth_grad(s, q, w, rho);
    const PrimalPoint d{linalg::sub(q2.x, q.x), linalg::sub(q2.y, q.y)};
    const double dist = model::norm2(d);
    const double upper = model::smooth_value(s, q, w, rho) + linalg::dot(g.x, d.x) + linalg::dot(g.y, d.y) +
                         0.5 * bs * dist * dist;
    EXPECT_LE(model::smooth_value(s, q2, w, rho), upper + 1e-9 * std::max(1.0, std::abs(upper)));
  }
}

TEST(Lagrangian, SaddleInequality) {
  // min 0.5||x - a||^2 s.t. x = y, no regularizers: x* = y* = a, w* = 0.
  const Vec a{0.4, -1.2, 2.0};
  const ProblemSpec s = free_identity(3, SmoothTerm::half_squared_distance(a));
  const PrimalPoint qs{a, a};
  const Vec ws{0, 0, 0};
  const double rho = 1.5;
  const double l = model::al_value(s, qs, ws, rho);
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec w = rng.normal_vector(3);
    const PrimalPoint q{rng.normal_vector(3), rng.normal_vector(3)};
    EXPECT_LE(model::al_value(s, qs, w, rho), l + 1e-12);
    EXPECT_LE(l, model::al_value(s, q, ws, rho) + 1e-12);
  }
}

TEST(Validate, CatchesMismatches) {
  ProblemSpec s{SmoothTerm::zero(2), LinearMap::identity(2), oracles::make_zero(3), oracles::make_zero(2), std::nullopt};
  EXPECT_THROW(model::validate(s), DimensionMismatch);
  s.rx = nullptr;
  EXPECT_THROW(model::validate(s), InvalidArgument);
}

TEST(EffectivePqgAlpha, Sources) {
  ProblemSpec s = free_identity(2, SmoothTerm::half_squared_distance(Vec{0, 0}));
  EXPECT_NEAR(*model::effective_pqg_alpha(s, 1.0), model::alpha_S_strongly_convex(1, 1, s.A.norm_bound), 1e-15);
  s.pqg_alpha = 0.25;
  EXPECT_EQ(*model::effective_pqg_alpha(s, 1.0), 0.25);
  const ProblemSpec lin = free_identity(2, SmoothTerm::linear(Vec{1, 1}));
  EXPECT_FALSE(model::effective_pqg_alpha(lin, 1.0).has_value());
}
