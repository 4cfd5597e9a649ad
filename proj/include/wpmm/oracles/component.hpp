#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::oracles {

enum class ComponentKind {
  Zero,
  Box,
  L1Ball,
  Simplex,
  NuclearNorm,
  NuclearBall,
  Spectrahedron,
  DiagOnes,
  Polytope,
  Product,
};

std::string to_string(ComponentKind kind);

// Relative tolerance for indicator membership: a point is inside when its
// distance to the set is at most kIndicatorTol * (1 + ||point||).
inline constexpr double kIndicatorTol = 1e-9;

bool within_indicator_tolerance(double distance, std::span<const double> point);

// One block of the regularizer R_Q together with its weak proximal oracle.
//
// propose() returns a point v with
//   Phi_1(v) <= Phi_lambda(u)  for every minimizer u of
//   Phi_1(.) = R(.) + <., p> + (c/2)||. - center||^2,
// where lambda = lambda(). Stateful oracles (polytopes) learn the step actually
// taken through advance(). A solver run works on its own clone().
class WpoComponent {
 public:
  virtual ~WpoComponent() = default;

  virtual ComponentKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double lambda() const { return 1.0; }
  virtual bool is_indicator() const = 0;

  // Regularizer value; +inf for an indicator when the point is outside the set
  // beyond kIndicatorTol.
  virtual double value(std::span<const double> v) const;
  // Euclidean distance to dom R (0 for finite-valued regularizers).
  virtual double domain_distance(std::span<const double> v) const = 0;

  virtual Vec propose(std::span<const double> center, std::span<const double> p, double c) = 0;
  // The solver moved from center to (1 - eta) center + eta * (last proposal).
  virtual void advance(double /*eta*/) {}
  // Called once before a run with q0's block.
  virtual void reset(std::span<const double> /*start*/) {}

  virtual bool has_exact_prox() const { return false; }
  // argmin_v R(v) + <v, p> + (c/2)||v - center||^2. Throws InvalidArgument when
  // the block has no exact prox routine.
  virtual Vec prox(std::span<const double> center, std::span<const double> p, double c) const;

  // The same regularizer with a lambda = 1 exact oracle (full-rank
  // decompositions). Used by high-accuracy reference runs.
  virtual std::unique_ptr<WpoComponent> exact_variant() const { return clone(); }
  virtual std::unique_ptr<WpoComponent> clone() const = 0;

  virtual std::string describe() const { return to_string(kind()); }

 protected:
  // Finite part of value(); indicators leave it at 0.
  virtual double finite_value(std::span<const double> /*v*/) const { return 0.0; }
};

using ComponentPtr = std::shared_ptr<const WpoComponent>;

}  // namespace wpmm::oracles
