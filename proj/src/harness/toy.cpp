#include "wpmm/harness/toy.hpp"

#include "wpmm/errors.hpp"
#include "wpmm/oracles/components.hpp"

namespace wpmm::harness {

ProblemInstance box_toy(Vec a, double lo, double hi) {
  if (a.empty()) throw InvalidArgument("box_toy: empty target");
  if (!(lo < hi)) throw InvalidArgument("box_toy: need lo < hi");
  const std::size_t n = a.size();
  ProblemInstance inst{{model::SmoothTerm::half_squared_distance(std::move(a)), LinearMap::identity(n),
                        oracles::make_box(Vec(n, lo), Vec(n, hi)), oracles::make_box(Vec(n, lo), Vec(n, hi)),
                        std::nullopt},
                       {Vec(n, lo), Vec(n, lo)},
                       Vec(n, 0.0)};
  model::validate(inst.spec);
  return inst;
}

ProblemInstance default_toy() {
  ProblemInstance inst = box_toy(Vec{1.5, 0.3});
  inst.q0 = {Vec{0.0, 1.0}, Vec{0.0, 1.0}};
  return inst;
}

}  // namespace wpmm::harness
