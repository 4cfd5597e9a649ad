#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::oracles {

// Returns a vertex minimizing <., p> over the polytope.
using Lmo = std::function<Vec(std::span<const double> p)>;

// A point of the polytope written as a convex combination of vertices.
struct PolytopeState {
  std::vector<Vec> vertices;
  Vec weights;

  Vec point() const;
  bool empty() const { return vertices.empty(); }
};

// Weights and vertices pruned below this value are dropped.
inline constexpr double kPruneThreshold = 1e-12;

// Drops weights below kPruneThreshold and renormalizes.
void prune(PolytopeState& state);

struct SimplexQpOptions {
  std::size_t max_iters = 10000;
  // Stop when the Wolfe gap falls below gap_tol * max(1, |objective|).
  double gap_tol = 1e-12;
};

struct SimplexQpResult {
  Vec gamma;
  double objective = 0.0;
  double wolfe_gap = 0.0;
  std::size_t iterations = 0;
};

// min over the simplex of <M gamma, p> + (c/2)||M gamma - center||^2, where the
// columns of M are vertices.
SimplexQpResult simplex_qp(const std::vector<Vec>& vertices, std::span<const double> p,
                           std::span<const double> center, double c, const SimplexQpOptions& opts = {});

struct PolytopeProposal {
  Vec v;
  // State representing v (vertices of the input state plus the LMO vertex,
  // pruned).
  PolytopeState state;
};

// One LMO call on p, then the simplex QP over the enlarged vertex set.
PolytopeProposal wpo_polytope(const PolytopeState& state, std::span<const double> p, std::span<const double> center,
                              double c, const Lmo& lmo, const SimplexQpOptions& opts = {});

// Merge after a primal step: (1 - eta) * current + eta * proposal.
PolytopeState combine_states(const PolytopeState& current, const PolytopeState& proposal, double eta);

// Vertex sets used by tests and the harness.
std::vector<Vec> hypercube_vertices(std::size_t d);
std::vector<Vec> simplex_vertices(std::size_t d);
Lmo hypercube_lmo(std::size_t d);  // [0, 1]^d
Lmo simplex_lmo(std::size_t d);    // probability simplex
Lmo enumerated_lmo(std::vector<Vec> vertices);

}  // namespace wpmm::oracles
