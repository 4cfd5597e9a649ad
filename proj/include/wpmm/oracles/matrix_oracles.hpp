#pragma once

#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::oracles {

// Tolerance handed to the truncated decompositions by the rank-k oracles.
inline constexpr double kDecompositionTol = 1e-10;

// M = center - p / c. U diag(max(sigma_i - nu / c, 0)) V^T over the top k
// singular triplets of M.
linalg::DenseMatrix wpo_nuclear_reg(const linalg::DenseMatrix& center, const linalg::DenseMatrix& p, double c,
                                    double nu, std::size_t k, const linalg::LanczosOptions& opts = {});

// Top-k triplets of M with sigma replaced by its projection onto the l1 ball
// of radius tau.
linalg::DenseMatrix wpo_nuclear_ball(const linalg::DenseMatrix& center, const linalg::DenseMatrix& p, double c,
                                     double tau, std::size_t k, const linalg::LanczosOptions& opts = {});

// Top-k eigenpairs of the symmetric M with eigenvalues projected onto the
// simplex of radius tau. Output is symmetric PSD with trace tau.
linalg::DenseMatrix wpo_spectrahedron(const linalg::DenseMatrix& center, const linalg::DenseMatrix& p, double c,
                                      double tau, std::size_t k, const linalg::LanczosOptions& opts = {});

// Copy of a square matrix with the diagonal set to ones.
linalg::DenseMatrix prox_diag_ones(const linalg::DenseMatrix& center);

// Euclidean projections by full decompositions.
linalg::DenseMatrix project_nuclear_ball(const linalg::DenseMatrix& m, double tau);
linalg::DenseMatrix project_spectrahedron(const linalg::DenseMatrix& m, double tau);
// prox of nu ||.||_nuc with unit step: singular value soft-threshold at nu.
linalg::DenseMatrix prox_nuclear_norm(const linalg::DenseMatrix& m, double nu);

}  // namespace wpmm::oracles
