#include "wpmm/cli/generic_problem.hpp"

#include <algorithm>
#include <set>

#include "wpmm/cli/config.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/linalg/projections.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/oracles/components.hpp"

namespace wpmm::cli {

using nlohmann::json;
using linalg::DenseMatrix;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

template <class T>
T as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong type (" + j.dump() + ")");
  }
}

template <class T>
T need(const json& j, const char* key, const std::string& where) {
  return as<T>(field(j, key, where), where + "." + key);
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

DenseMatrix matrix(const json& j, const std::string& where) {
  const auto rows = as<std::vector<std::vector<double>>>(j, where);
  if (rows.empty() || rows.front().empty()) throw ConfigError(where + ": empty matrix");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ConfigError(where + ": ragged matrix rows");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

std::optional<double> opt_lambda(const json& j, const std::string& where) {
  if (!j.contains("lambda")) return std::nullopt;
  return need<double>(j, "lambda", where);
}

std::shared_ptr<oracles::WpoComponent> polytope_box(const Vec& lo, const Vec& hi, std::optional<double> lambda) {
  oracles::PolytopeOptions opts;
  opts.lambda = lambda;
  opts.projection = [lo, hi](std::span<const double> z) {
    Vec out(z.begin(), z.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lo[i], hi[i]);
    return out;
  };
  opts.distance = [lo, hi](std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = z[i] - std::clamp(z[i], lo[i], hi[i]);
      s += d * d;
    }
    return std::sqrt(s);
  };
  oracles::Lmo lmo = [lo, hi](std::span<const double> p) {
    Vec v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] > 0.0 ? lo[i] : hi[i];
    return v;
  };
  return oracles::make_polytope(lo.size(), std::move(lmo), std::move(opts));
}

std::shared_ptr<oracles::WpoComponent> regularizer(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object with a 'kind'");
  const auto kind = need<std::string>(j, "kind", where);
  const std::string at = where + " (" + kind + ")";
  try {
    if (kind == "zero") {
      only_keys(j, {"kind", "n"}, at);
      return oracles::make_zero(need<std::size_t>(j, "n", at));
    }
    if (kind == "box") {
      only_keys(j, {"kind", "lo", "hi"}, at);
      return oracles::make_box(need<Vec>(j, "lo", at), need<Vec>(j, "hi", at));
    }
    if (kind == "l1_ball") {
      only_keys(j, {"kind", "n", "s"}, at);
      return oracles::make_l1_ball(need<std::size_t>(j, "n", at), need<double>(j, "s", at));
    }
    if (kind == "simplex") {
      only_keys(j, {"kind", "n", "tau"}, at);
      return oracles::make_simplex(need<std::size_t>(j, "n", at), need<double>(j, "tau", at));
    }
    if (kind == "polytope_box") {
      only_keys(j, {"kind", "lo", "hi", "lambda"}, at);
      const Vec lo = need<Vec>(j, "lo", at), hi = need<Vec>(j, "hi", at);
      if (lo.size() != hi.size()) throw ConfigError(at + ": lo and hi differ in length");
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw ConfigError(at + ": lo must not exceed hi");
      return polytope_box(lo, hi, opt_lambda(j, at));
    }
    if (kind == "polytope_hypercube") {
      only_keys(j, {"kind", "n", "lambda"}, at);
      return oracles::make_polytope_hypercube(need<std::size_t>(j, "n", at), opt_lambda(j, at));
    }
    if (kind == "polytope_simplex") {
      only_keys(j, {"kind", "n", "lambda"}, at);
      return oracles::make_polytope_simplex(need<std::size_t>(j, "n", at), opt_lambda(j, at));
    }
    if (kind == "nuclear_norm") {
      only_keys(j, {"kind", "rows", "cols", "nu", "rank"}, at);
      return oracles::make_nuclear_norm(need<std::size_t>(j, "rows", at), need<std::size_t>(j, "cols", at),
                                        need<double>(j, "nu", at), need<std::size_t>(j, "rank", at));
    }
    if (kind == "nuclear_ball") {
      only_keys(j, {"kind", "rows", "cols", "tau", "rank"}, at);
      return oracles::make_nuclear_ball(need<std::size_t>(j, "rows", at), need<std::size_t>(j, "cols", at),
                                        need<double>(j, "tau", at), need<std::size_t>(j, "rank", at));
    }
    if (kind == "spectrahedron") {
      only_keys(j, {"kind", "d", "tau", "rank"}, at);
      return oracles::make_spectrahedron(need<std::size_t>(j, "d", at), need<double>(j, "tau", at),
                                         need<std::size_t>(j, "rank", at));
    }
    if (kind == "diag_ones") {
      only_keys(j, {"kind", "d"}, at);
      return oracles::make_diag_ones(need<std::size_t>(j, "d", at));
    }
    if (kind == "product") {
      only_keys(j, {"kind", "blocks"}, at);
      const json& blocks = field(j, "blocks", at);
      if (!blocks.is_array() || blocks.empty()) throw ConfigError(at + ": blocks must be a nonempty array");
      std::vector<std::shared_ptr<const oracles::WpoComponent>> parts;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        parts.push_back(regularizer(blocks[i], at + ".blocks[" + std::to_string(i) + "]"));
      return oracles::make_product(std::move(parts));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(at + ": " + e.what());
  }
  std::string names;
  for (const auto& n : supported_regularizers()) names += (names.empty() ? "" : ", ") + n;
  throw ConfigError(where + ": unsupported regularizer kind '" + kind + "' (supported: " + names + ")");
}

model::SmoothTerm smooth(const json& j) {
  const std::string where = "f";
  const auto kind = need<std::string>(j, "kind", where);
  const std::string at = where + " (" + kind + ")";
  try {
    if (kind == "zero") {
      only_keys(j, {"kind", "n"}, at);
      return model::SmoothTerm::zero(need<std::size_t>(j, "n", at));
    }
    if (kind == "linear") {
      only_keys(j, {"kind", "c"}, at);
      return model::SmoothTerm::linear(need<Vec>(j, "c", at));
    }
    if (kind == "half_squared_distance") {
      only_keys(j, {"kind", "a"}, at);
      return model::SmoothTerm::half_squared_distance(need<Vec>(j, "a", at));
    }
    if (kind == "least_squares") {
      only_keys(j, {"kind", "B", "b"}, at);
      return model::SmoothTerm::least_squares(matrix(field(j, "B", at), at + ".B"), need<Vec>(j, "b", at));
    }
    if (kind == "quadratic") {
      only_keys(j, {"kind", "Q", "c"}, at);
      return model::SmoothTerm::quadratic_form(matrix(field(j, "Q", at), at + ".Q"), need<Vec>(j, "c", at));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(at + ": " + e.what());
  }
  throw ConfigError("f: unsupported smooth term kind '" + kind +
                    "' (supported: zero, linear, half_squared_distance, least_squares, quadratic)");
}

LinearMap linear_map(const json& j, std::size_t n) {
  if (j.is_string()) {
    if (as<std::string>(j, "A") != "identity") throw ConfigError("A: the only string form is \"identity\"");
    return LinearMap::identity(n);
  }
  const auto kind = need<std::string>(j, "kind", "A");
  if (kind == "identity") {
    only_keys(j, {"kind", "n"}, "A");
    return LinearMap::identity(j.contains("n") ? need<std::size_t>(j, "n", "A") : n);
  }
  if (kind == "dense") {
    only_keys(j, {"kind", "matrix"}, "A");
    return LinearMap::dense(matrix(field(j, "matrix", "A"), "A.matrix"));
  }
  if (kind == "diagonal") {
    only_keys(j, {"kind", "d"}, "A");
    return LinearMap::diagonal(need<Vec>(j, "d", "A"));
  }
  if (kind == "stacked_identity") {
    only_keys(j, {"kind", "n", "copies"}, "A");
    return LinearMap::stacked_identity(j.contains("n") ? need<std::size_t>(j, "n", "A") : n,
                                       need<std::size_t>(j, "copies", "A"));
  }
  throw ConfigError("A: unsupported kind '" + kind + "' (supported: identity, dense, diagonal, stacked_identity)");
}

}  // namespace

std::vector<std::string> supported_regularizers() {
  return {"zero",          "box",          "l1_ball",       "simplex",   "polytope_box",
          "polytope_hypercube", "polytope_simplex", "nuclear_norm", "nuclear_ball", "spectrahedron",
          "diag_ones",     "product"};
}

harness::ProblemInstance load_generic_problem(const json& j) {
  if (!j.is_object()) throw ConfigError("problem file: expected a JSON object");
  only_keys(j, {"f", "A", "rx", "ry", "x0", "y0", "w0", "pqg_alpha"}, "problem file");
  harness::ProblemInstance inst;
  inst.spec.rx = regularizer(field(j, "rx", "problem file"), "rx");
  inst.spec.ry = regularizer(field(j, "ry", "problem file"), "ry");
  inst.spec.f = smooth(field(j, "f", "problem file"));
  inst.spec.A = linear_map(j.contains("A") ? j.at("A") : json("identity"), inst.spec.rx->dim());
  if (j.contains("pqg_alpha")) inst.spec.pqg_alpha = need<double>(j, "pqg_alpha", "problem file");
  try {
    model::validate(inst.spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }

  inst.q0.x = j.contains("x0") ? need<Vec>(j, "x0", "problem file") : Vec(inst.spec.dim_x(), 0.0);
  if (inst.q0.x.size() != inst.spec.dim_x()) throw ConfigError("problem file: x0 has the wrong length");
  inst.q0.y = j.contains("y0") ? need<Vec>(j, "y0", "problem file") : inst.spec.A.apply(inst.q0.x);
  if (inst.q0.y.size() != inst.spec.dim_y()) throw ConfigError("problem file: y0 has the wrong length");
  inst.w0 = j.contains("w0") ? need<Vec>(j, "w0", "problem file") : Vec(inst.spec.dim_y(), 0.0);
  if (inst.w0.size() != inst.spec.dim_y()) throw ConfigError("problem file: w0 has the wrong length");
  if (!model::in_domain(inst.spec, inst.q0))
    throw ConfigError("problem file: the initial point is outside the regularizer domains (distance " +
                      std::to_string(model::domain_distance(inst.spec, inst.q0)) + "); set x0 and y0");
  return inst;
}

}  // namespace wpmm::cli
