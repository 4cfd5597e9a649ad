#include <gtest/gtest.h>

#include "audits.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/linalg/projections.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/oracles/components.hpp"
#include "wpmm/oracles/linearization.hpp"
#include "wpmm/oracles/matrix_oracles.hpp"

using namespace wpmm;
namespace wt = wpmm::testing;
using linalg::DenseMatrix;
using model::PrimalPoint;
using model::ProblemSpec;
using model::SmoothTerm;

namespace {

ProblemSpec identity_problem(std::size_t n, SmoothTerm f) {
  ProblemSpec s{std::move(f), LinearMap::identity(n), oracles::make_zero(n), oracles::make_zero(n), std::nullopt};
  model::validate(s);
  return s;
}

std::size_t numeric_rank(const DenseMatrix& m) {
  const auto s = wt::jacobi_singular_values(m);
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > 1e-8 * std::max(1.0, s.front()); }));
}

}  // namespace

TEST(PVector, Examples) {
  const ProblemSpec s = identity_problem(2, SmoothTerm::zero(2));
  const PrimalPoint q{{1, 0}, {0, 0}};
  EXPECT_EQ(oracles::p_vector_x(s, q, Vec{0, 0}, 0.5, 1.0), (Vec{2, 0}));
  EXPECT_EQ(oracles::p_vector_y(s, q, Vec{0, 0}, 0.5, 1.0), (Vec{-2, 0}));
  const PrimalPoint feas{{3, 1}, {3, 1}};
  EXPECT_EQ(oracles::p_vector_y(s, feas, Vec{1, 1}, 0.5, 1.0), (Vec{-1, -1}));
  const ProblemSpec g = identity_problem(2, SmoothTerm::half_squared_distance(Vec{1, 2}));
  EXPECT_EQ(oracles::p_vector_x(g, feas, Vec{0, 0}, 0.5, 1.0), (Vec{2, -1}));
  EXPECT_THROW(oracles::p_vector_x(s, q, Vec{0, 0}, 0.0, 1.0), InvalidArgument);
}

TEST(PVector, MatchesFiniteDifferences) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    ProblemSpec s{SmoothTerm::least_squares(wt::random_matrix(rng, 6, 4), rng.normal_vector(6)),
                  LinearMap::dense(wt::random_matrix(rng, 3, 4)), oracles::make_zero(4), oracles::make_zero(3),
                  std::nullopt};
    PrimalPoint q{rng.normal_vector(4), rng.normal_vector(3)};
    const Vec w = rng.normal_vector(3);
    const double mu = rng.uniform(0.05, 1.0), rho = rng.uniform(0.1, 2.0);
    auto g = [&](const PrimalPoint& z) {
      const double kn = linalg::norm2(model::k_apply(s, z));
      return model::smooth_value(s, z, w, rho) + mu * kn * kn;
    };
    const Vec px = oracles::p_vector_x(s, q, w, mu, rho);
    const Vec py = oracles::p_vector_y(s, q, w, mu, rho);
    // The y-part of the same map has derivative grad_y S + 2 mu grad_y ||Kq||^2 / 2 ... which
    // equals -(w + (rho + 2 mu) K q) = p_y.
    for (std::size_t i = 0; i < 4; ++i) {
      PrimalPoint up = q, down = q;
      up.x[i] += 1e-6;
      down.x[i] -= 1e-6;
      EXPECT_NEAR((g(up) - g(down)) / 2e-6, px[i], 1e-5 * std::max(1.0, std::abs(px[i])));
    }
    for (std::size_t i = 0; i < 3; ++i) {
      PrimalPoint up = q, down = q;
      up.y[i] += 1e-6;
      down.y[i] -= 1e-6;
      EXPECT_NEAR((g(up) - g(down)) / 2e-6, py[i], 1e-5 * std::max(1.0, std::abs(py[i])));
    }
  }
}

TEST(ProxExact, Examples) {
  const auto zero = oracles::make_zero(2);
  EXPECT_EQ(oracles::prox_exact(*zero, Vec{1, 1}, Vec{2, -2}, 2.0), (Vec{0, 2}));
  const auto ball = oracles::make_l1_ball(2, 1.0);
  EXPECT_EQ(oracles::prox_exact(*ball, Vec{1, 0}, Vec{-2, 0}, 1.0), linalg::project_l1_ball(Vec{3, 0}, 1.0));
  EXPECT_EQ(oracles::prox_exact(*ball, Vec{0.25, -0.5}, Vec{0, 0}, 3.0), (Vec{0.25, -0.5}));
  oracles::PolytopeOptions bare;
  bare.lambda = 1.0;
  const auto lmo_only = oracles::make_polytope(2, oracles::hypercube_lmo(2), bare);
  EXPECT_THROW(oracles::prox_exact(*lmo_only, Vec{1, 0}, Vec{0, 0}, 1.0), InvalidArgument);
}

TEST(ProxExact, OptimalityViaProjection) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const double r = rng.uniform(0.2, 2.0), c = rng.uniform(0.1, 5.0);
    const Vec center = rng.normal_vector(n), p = rng.normal_vector(n);
    Vec z = center;
    linalg::axpy(-1.0 / c, p, z);
    const Vec vb = oracles::prox_exact(*oracles::make_l1_ball(n, r), center, p, c);
    EXPECT_LE(linalg::distance(vb, wt::brute_l1_projection(z, r)), 1e-11);
    const Vec vs = oracles::prox_exact(*oracles::make_simplex(n, r), center, p, c);
    EXPECT_LE(linalg::distance(vs, wt::brute_simplex_projection(z, r)), 1e-11);
  }
}

TEST(WpoNuclearReg, Examples) {
  const DenseMatrix m = DenseMatrix::diagonal(Vec{3, 1});
  const DenseMatrix zero(2, 2);
  // center = M, p = 0, c = 2, nu = 1 gives zeta = 0.5.
  EXPECT_LE(wt::max_abs_diff(oracles::wpo_nuclear_reg(m, zero, 2.0, 1.0, 1), DenseMatrix::diagonal(Vec{2.5, 0})),
            1e-12);
  EXPECT_LE(oracles::wpo_nuclear_reg(m, zero, 1.0, 3.5, 1).max_abs(), 1e-14);
  EXPECT_THROW(oracles::wpo_nuclear_reg(m, zero, 1.0, 1.0, 3), InvalidArgument);
  Rng rng(5);
  const DenseMatrix r = wt::random_matrix(rng, 6, 4);
  const DenseMatrix p = wt::random_matrix(rng, 6, 4);
  wt::MatrixWpoInstance in{r, p, 1.5, 0.7, 4};
  EXPECT_LE(wt::frob_diff(oracles::wpo_nuclear_reg(r, p, 1.5, 0.7, 4), wt::reference_nuclear_prox(in)), 1e-8);
}

TEST(WpoNuclearBall, Examples) {
  const DenseMatrix zero(2, 2);
  const DenseMatrix inside = DenseMatrix::diagonal(Vec{0.2, 0.1});
  EXPECT_LE(wt::max_abs_diff(oracles::wpo_nuclear_ball(inside, zero, 1.0, 1.0, 2), inside), 1e-12);
  EXPECT_LE(wt::max_abs_diff(oracles::wpo_nuclear_ball(DenseMatrix::diagonal(Vec{2, 0}), zero, 1.0, 1.0, 1),
                                  DenseMatrix::diagonal(Vec{1, 0})),
            1e-12);
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix c = wt::random_matrix(rng, 7, 5, 2.0);
    const DenseMatrix out = oracles::wpo_nuclear_ball(c, DenseMatrix(7, 5), 1.0, 1.5, 3);
    EXPECT_LE(wt::jacobi_nuclear_norm(out), 1.5 + 1e-9);
    EXPECT_LE(numeric_rank(out), 3u);
  }
}

TEST(WpoSpectrahedron, Examples) {
  const DenseMatrix zero(3, 3);
  const DenseMatrix rank1 = DenseMatrix::diagonal(Vec{2, 0, 0});
  EXPECT_LE(wt::max_abs_diff(oracles::wpo_spectrahedron(rank1, zero, 1.0, 2.0, 1), rank1), 1e-12);
  EXPECT_LE(wt::max_abs_diff(oracles::wpo_spectrahedron(DenseMatrix::diagonal(Vec{2, 1}), DenseMatrix(2, 2), 1.0,
                                                             1.0, 2),
                                  DenseMatrix::diagonal(Vec{1, 0})),
            1e-12);
  DenseMatrix asym = DenseMatrix::identity(2);
  asym(0, 1) = 1e-6;
  EXPECT_THROW(oracles::wpo_spectrahedron(asym, DenseMatrix(2, 2), 1.0, 1.0, 1), InvalidArgument);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix c = wt::random_symmetric(rng, 8);
    const DenseMatrix p = wt::random_symmetric(rng, 8);
    const DenseMatrix out = oracles::wpo_spectrahedron(c, p, rng.uniform(0.5, 2.0), 3.0, 2);
    EXPECT_NEAR(out.trace(), 3.0, 1e-9);
    const auto e = wt::jacobi_eigen(out);
    EXPECT_GE(e.values.back(), -1e-9);
    EXPECT_LE(numeric_rank(out), 2u);
  }
}

TEST(MatrixOracles, MatchFullProxWhenOptimumIsLowRank) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    {
      const auto in = wt::low_rank_nuclear_reg(rng, 12, 9, 3);
      const DenseMatrix v = oracles::wpo_nuclear_reg(in.center, in.p, in.c, in.param, in.k);
      const DenseMatrix ref = wt::reference_nuclear_prox(in);
      EXPECT_LE(wt::frob_diff(v, ref), 1e-6);
      EXPECT_LE(wt::phi1(in.param * wt::jacobi_nuclear_norm(v), v, in),
                wt::phi1(in.param * wt::jacobi_nuclear_norm(ref), ref, in) + 1e-8);
    }
    {
      const auto in = wt::low_rank_nuclear_ball(rng, 12, 9, 3);
      const DenseMatrix v = oracles::wpo_nuclear_ball(in.center, in.p, in.c, in.param, in.k);
      EXPECT_LE(wt::frob_diff(v, wt::reference_nuclear_ball(in)), 1e-6);
    }
    {
      const auto in = wt::low_rank_spectrahedron(rng, 10, 3);
      const DenseMatrix v = oracles::wpo_spectrahedron(in.center, in.p, in.c, in.param, in.k);
      EXPECT_LE(wt::frob_diff(v, wt::reference_spectrahedron(in)), 1e-6);
    }
  }
}

TEST(MatrixOracles, FullDecompositionProjections) {
  Rng rng(9);
  const DenseMatrix m = wt::random_matrix(rng, 6, 6);
  wt::MatrixWpoInstance in{m, DenseMatrix(6, 6), 1.0, 2.0, 6};
  EXPECT_LE(wt::frob_diff(oracles::project_nuclear_ball(m, 2.0), wt::reference_nuclear_ball(in)), 1e-9);
  EXPECT_LE(wt::frob_diff(oracles::prox_nuclear_norm(m, 2.0), wt::reference_nuclear_prox(in)), 1e-9);
  const DenseMatrix s = wt::random_symmetric(rng, 6);
  wt::MatrixWpoInstance is{s, DenseMatrix(6, 6), 1.0, 2.0, 6};
  EXPECT_LE(wt::frob_diff(oracles::project_spectrahedron(s, 2.0), wt::reference_spectrahedron(is)), 1e-9);
}

TEST(ProxDiagOnes, Examples) {
  EXPECT_EQ(oracles::prox_diag_ones(DenseMatrix(3, 3)), DenseMatrix::identity(3));
  DenseMatrix m{{1, 0.3}, {0.3, 1}};
  EXPECT_EQ(oracles::prox_diag_ones(m), m);
  DenseMatrix a{{5, -2}, {7, 0}};
  const DenseMatrix out = oracles::prox_diag_ones(a);
  EXPECT_EQ(out(0, 1), -2.0);
  EXPECT_EQ(out(1, 0), 7.0);
  EXPECT_THROW(oracles::prox_diag_ones(DenseMatrix(2, 3)), DimensionMismatch);
}

TEST(SimplexQp, Examples) {
  const auto single = oracles::simplex_qp({{1.0, 2.0}}, Vec{1, 1}, Vec{0, 0}, 1.0);
  EXPECT_EQ(single.gamma, (Vec{1.0}));
  const auto r = oracles::simplex_qp(oracles::simplex_vertices(2), Vec{0, 0}, Vec{0.3, 0.7}, 1.0);
  EXPECT_NEAR(r.gamma[0], 0.3, 1e-10);
  EXPECT_NEAR(r.gamma[1], 0.7, 1e-10);
  EXPECT_THROW(oracles::simplex_qp({}, Vec{}, Vec{}, 1.0), InvalidArgument);
}

TEST(SimplexQp, BeatsRandomCompetitors) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.index(4), t = 1 + rng.index(6);
    std::vector<Vec> verts;
    for (std::size_t i = 0; i < t; ++i) verts.push_back(rng.uniform_vector(d, -1.0, 1.0));
    const Vec p = rng.normal_vector(d), center = rng.uniform_vector(d, -1.0, 1.0);
    const double c = rng.uniform(0.1, 5.0);
    const auto r = oracles::simplex_qp(verts, p, center, c);
    double total = 0.0;
    for (double g : r.gamma) {
      EXPECT_GE(g, 0.0);
      total += g;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    auto obj = [&](const Vec& g) {
      Vec x(d, 0.0);
      for (std::size_t i = 0; i < t; ++i) linalg::axpy(g[i], verts[i], x);
      const double dist = linalg::distance(x, center);
      return linalg::dot(x, p) + 0.5 * c * dist * dist;
    };
    for (int k = 0; k < 1000; ++k) {
      Vec g = rng.uniform_vector(t, 0.0, 1.0);
      const double s = std::accumulate(g.begin(), g.end(), 0.0);
      for (double& x : g) x /= s;
      EXPECT_LE(r.objective, obj(g) + 1e-10);
    }
  }
}

TEST(WpoPolytope, SimplexFixedPoint) {
  oracles::PolytopeState state{{Vec{1, 0, 0}}, {1.0}};
  const auto out = oracles::wpo_polytope(state, Vec{-1, 0, 0.5}, Vec{1, 0, 0}, 1.0, oracles::simplex_lmo(3));
  EXPECT_LE(linalg::distance(out.v, Vec{1, 0, 0}), 1e-12);
  EXPECT_THROW(oracles::wpo_polytope(state, Vec{0, 0, 0}, Vec{0, 1, 0}, 1.0, oracles::simplex_lmo(3)), InvalidArgument);
}

TEST(WpoPolytope, SquareAudit) {
  Rng rng(11);
  const auto verts = oracles::hypercube_vertices(2);
  for (int trial = 0; trial < 30; ++trial) {
    oracles::PolytopeState state;
    for (const Vec& v : verts)
      if (rng.uniform(0, 1) < 0.5 || state.empty()) {
        state.vertices.push_back(v);
        state.weights.push_back(rng.uniform(0.1, 1.0));
      }
    const double tw = std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
    for (double& w : state.weights) w /= tw;
    const Vec center = state.point(), p = rng.normal_vector(2);
    const double c = rng.uniform(0.1, 5.0);
    const auto out = oracles::wpo_polytope(state, p, center, c, oracles::hypercube_lmo(2));
    auto phi = [&](const Vec& u) {
      const double dist = linalg::distance(u, center);
      return linalg::dot(u, p) + 0.5 * c * dist * dist;
    };
    // Optimal over the enlarged hull, hence over every vertex it contains.
    for (const Vec& u : out.state.vertices) EXPECT_LE(phi(out.v), phi(u) + 1e-10);
    const double lambda = wt::polytope_required_lambda(out.v, verts, center, p, c);
    EXPECT_TRUE(std::isfinite(lambda));
    EXPECT_LE(linalg::distance(out.state.point(), out.v), 1e-10);
  }
}

TEST(PolytopeState, PruneKeepsPoint) {
  oracles::PolytopeState s{{Vec{0, 0}, Vec{1, 0}, Vec{0, 1}}, {0.5, 0.5 - 1e-13, 1e-13}};
  const Vec before = s.point();
  oracles::prune(s);
  EXPECT_EQ(s.vertices.size(), 2u);
  EXPECT_LE(linalg::distance(s.point(), before), 1e-10);
}

TEST(WpoCompose, MaxRule) {
  EXPECT_EQ(oracles::wpo_compose({1}, 1.0, {2}, 1.0).lambda, 1.0);
  const auto c = oracles::wpo_compose({1}, 1.0, {2}, 4.0);
  EXPECT_EQ(c.lambda, 4.0);
  EXPECT_EQ(c.v, (PrimalPoint{{1}, {2}}));
  EXPECT_THROW(oracles::wpo_compose({1}, 0.5, {2}, 1.0), InvalidArgument);
}

TEST(Components, RankLimitedMatrixBlocks) {
  Rng rng(12);
  const auto nuc = oracles::make_nuclear_norm(5, 4, 0.3, 2);
  const auto ball = oracles::make_nuclear_ball(5, 4, 2.0, 2);
  const auto spec = oracles::make_spectrahedron(5, 2.0, 2);
  const Vec c20 = rng.normal_vector(20), p20 = rng.normal_vector(20);
  EXPECT_LE(numeric_rank(DenseMatrix(5, 4, nuc->clone()->propose(c20, p20, 1.0))), 2u);
  EXPECT_LE(numeric_rank(DenseMatrix(5, 4, ball->clone()->propose(c20, p20, 1.0))), 2u);
  DenseMatrix sym = wt::random_symmetric(rng, 5);
  const Vec sv = spec->clone()->propose(sym.values(), Vec(25, 0.0), 1.0);
  EXPECT_EQ(spec->value(sv), 0.0);
  EXPECT_TRUE(std::isinf(spec->value(sym.values())));
  EXPECT_NEAR(nuc->value(DenseMatrix(5, 4).values()), 0.0, 0.0);
  EXPECT_EQ(spec->exact_variant()->describe(), spec->exact_variant()->describe());
}

TEST(Components, ProductSplitsBlocks) {
  const auto prod = oracles::make_product({oracles::make_box({0, 0}, {1, 1}), oracles::make_simplex(2, 1.0)});
  EXPECT_EQ(prod->dim(), 4u);
  EXPECT_TRUE(prod->is_indicator());
  auto clone = prod->clone();
  const Vec v = clone->propose(Vec{0.5, 0.5, 0.5, 0.5}, Vec{-10, 10, 1, -1}, 1.0);
  EXPECT_EQ(v, (Vec{1, 0, 0, 1}));
  EXPECT_EQ(prod->value(Vec{1, 0, 0.5, 0.5}), 0.0);
  EXPECT_TRUE(std::isinf(prod->value(Vec{1, 0, 0.5, 0.6})));
}

TEST(Components, PolytopeBlockTracksSteps) {
  auto cube = oracles::make_polytope_hypercube(2, 1.0)->clone();
  cube->reset(Vec{0, 0});
  const Vec v = cube->propose(Vec{0, 0}, Vec{-1, -1}, 0.1);
  EXPECT_EQ(v, (Vec{1, 1}));
  cube->advance(0.25);
  const auto* s = oracles::polytope_state(*cube);
  ASSERT_NE(s, nullptr);
  EXPECT_LE(linalg::distance(s->point(), Vec{0.25, 0.25}), 1e-14);
  EXPECT_EQ(cube->value(Vec{0.5, 0.25}), 0.0);
  EXPECT_TRUE(std::isinf(cube->value(Vec{1.5, 0.25})));
}
