#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/oracles/component.hpp"
#include "wpmm/oracles/polytope.hpp"

namespace wpmm::oracles {

// R = 0 on R^n.
std::shared_ptr<WpoComponent> make_zero(std::size_t n);
// Indicator of the box [lo, hi].
std::shared_ptr<WpoComponent> make_box(Vec lo, Vec hi);
// Indicator of {||v||_1 <= s}.
std::shared_ptr<WpoComponent> make_l1_ball(std::size_t n, double s);
// Indicator of {v >= 0, sum v = tau}.
std::shared_ptr<WpoComponent> make_simplex(std::size_t n, double tau);

// Matrix blocks are stored row-major as flat vectors of length rows * cols.
// rank = 0 means full rank (exact prox).
std::shared_ptr<WpoComponent> make_nuclear_norm(std::size_t rows, std::size_t cols, double nu, std::size_t rank,
                                                const linalg::LanczosOptions& opts = {});
std::shared_ptr<WpoComponent> make_nuclear_ball(std::size_t rows, std::size_t cols, double tau, std::size_t rank,
                                                const linalg::LanczosOptions& opts = {});
std::shared_ptr<WpoComponent> make_spectrahedron(std::size_t d, double tau, std::size_t rank,
                                                 const linalg::LanczosOptions& opts = {});
// Indicator of {S : diag(S) = 1} on d x d matrices.
std::shared_ptr<WpoComponent> make_diag_ones(std::size_t d);

struct PolytopeOptions {
  // WPO parameter; when absent lambda = 1 and a warning is printed once.
  std::optional<double> lambda;
  // Exact Euclidean distance to the polytope, when available. Without it the
  // polytope block only checks the dimension.
  std::function<double(std::span<const double>)> distance;
  // Exact projection, enabling has_exact_prox().
  std::function<Vec(std::span<const double>)> projection;
  SimplexQpOptions qp;
};

std::shared_ptr<WpoComponent> make_polytope(std::size_t n, Lmo lmo, PolytopeOptions opts = {});
// [0, 1]^n and the probability simplex as LMO-driven polytopes.
std::shared_ptr<WpoComponent> make_polytope_hypercube(std::size_t n, std::optional<double> lambda = std::nullopt);
std::shared_ptr<WpoComponent> make_polytope_simplex(std::size_t n, std::optional<double> lambda = std::nullopt);

// Cartesian product of blocks laid out consecutively; lambda = max of blocks.
std::shared_ptr<WpoComponent> make_product(std::vector<std::shared_ptr<const WpoComponent>> blocks);

// Set the explicit convex-combination state of a polytope component (or of
// every polytope block of a product). Throws if the component is not one.
void set_polytope_state(WpoComponent& component, PolytopeState state);
const PolytopeState* polytope_state(const WpoComponent& component);

}  // namespace wpmm::oracles
