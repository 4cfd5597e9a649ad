#include "wpmm/solver/wpmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wpmm/errors.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/oracles/linearization.hpp"
#include "wpmm/solver/step_size.hpp"

namespace wpmm::solver {

using model::PrimalPoint;

std::string to_string(StepPolicy p) {
  switch (p) {
    case StepPolicy::Theoretical: return "theoretical";
    case StepPolicy::LineSearch: return "line_search";
    case StepPolicy::Fixed: return "fixed";
  }
  return "unknown";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Mean: return "mean";
    case Variant::Last: return "last";
    case Variant::Both: return "both";
  }
  return "unknown";
}

StepPolicy parse_step_policy(const std::string& s) {
  if (s == "theoretical") return StepPolicy::Theoretical;
  if (s == "line_search") return StepPolicy::LineSearch;
  if (s == "fixed") return StepPolicy::Fixed;
  throw InvalidArgument("unknown step policy '" + s + "' (expected theoretical, line_search or fixed)");
}

Variant parse_variant(const std::string& s) {
  if (s == "mean") return Variant::Mean;
  if (s == "last") return Variant::Last;
  if (s == "both") return Variant::Both;
  throw InvalidArgument("unknown variant '" + s + "' (expected mean, last or both)");
}

namespace {

// Block value with indicator violations replaced by the distance to the set.
double penalized_block(const oracles::WpoComponent& r, std::span<const double> v, bool& penalized) {
  const double value = r.value(v);
  if (!std::isinf(value)) return value;
  penalized = true;
  return r.domain_distance(v);
}

}  // namespace

Evaluation evaluate(const model::ProblemSpec& spec, const PrimalPoint& q, std::span<const double> w, double rho) {
  Evaluation e;
  const Vec kq = model::k_apply(spec, q);
  e.feasibility = linalg::norm2(kq);
  const double reg = penalized_block(*spec.rx, q.x, e.penalized) + penalized_block(*spec.ry, q.y, e.penalized);
  const double fx = spec.f.value(q.x);
  e.objective = fx + reg;
  e.al_value = fx + reg + linalg::dot(w, kq) + 0.5 * rho * e.feasibility * e.feasibility;
  return e;
}

StepConstants compute_constants(const model::ProblemSpec& spec, const SolverConfig& config) {
  if (!(config.rho > 0.0)) throw InvalidArgument("SolverConfig: rho must be positive");
  if (!(config.mu > 0.0)) throw InvalidArgument("SolverConfig: mu must be positive");
  if (config.lambda && !(*config.lambda >= 1.0)) throw InvalidArgument("SolverConfig: lambda must be at least 1");

  StepConstants k;
  k.norm_a = spec.A.norm_bound;
  k.beta_s = model::beta_S(spec.f.beta, config.rho, k.norm_a);
  k.alpha_s = model::effective_pqg_alpha(spec, config.rho);
  k.beta_hat = model::beta_hat(k.beta_s, config.mu, k.norm_a);
  k.lambda = config.lambda.value_or(std::max(spec.rx->lambda(), spec.ry->lambda()));
  if (k.alpha_s) k.max_mu = max_dual_step(*k.alpha_s, k.beta_s, k.lambda, k.norm_a);

  switch (config.step_policy) {
    case StepPolicy::Theoretical:
      if (!k.alpha_s)
        throw InvalidArgument("theoretical steps need the PQG modulus: set pqg_alpha or give f a strong convexity "
                              "modulus");
      if (config.mu > *k.max_mu * (1.0 + 1e-12))
        throw InvalidArgument("theoretical steps need mu <= " + std::to_string(*k.max_mu) + " (got " +
                              std::to_string(config.mu) + ")");
      k.base_eta = theoretical_eta(*k.alpha_s, k.beta_s, k.lambda, config.mu, k.norm_a);
      break;
    case StepPolicy::Fixed:
      if (!config.eta) throw InvalidArgument("fixed steps need eta");
      k.base_eta = *config.eta;
      break;
    case StepPolicy::LineSearch:
      if (config.eta) {
        k.base_eta = *config.eta;
      } else if (k.alpha_s) {
        k.base_eta = theoretical_eta(*k.alpha_s, k.beta_s, k.lambda, config.mu, k.norm_a);
      } else {
        throw InvalidArgument("line search needs a base eta when the PQG modulus is unknown");
      }
      break;
  }
  if (!(k.base_eta > 0.0 && k.base_eta <= 1.0)) throw InvalidArgument("eta must lie in (0, 1]");
  k.oracle_coefficient = k.base_eta * k.beta_hat;
  return k;
}

Wpmm::Wpmm(const model::ProblemSpec& spec, SolverConfig config) : spec_(spec), config_(config) {
  model::validate(spec);
  rx_ = spec.rx->clone();
  ry_ = spec.ry->clone();
  spec_.rx = rx_;
  spec_.ry = ry_;
  constants_ = compute_constants(spec_, config_);
}

void Wpmm::reset(PrimalPoint q0, model::DualPoint w0) {
  if (q0.x.size() != spec_.dim_x() || q0.y.size() != spec_.dim_y())
    throw DimensionMismatch("initial point does not match the problem dimensions");
  if (w0.size() != spec_.dim_y()) throw DimensionMismatch("initial dual point does not match the problem dimensions");
  if (!model::in_domain(spec_, q0))
    throw InvalidArgument("initial point is outside dom R (distance " +
                          std::to_string(model::domain_distance(spec_, q0)) + ")");
  rx_->reset(q0.x);
  ry_->reset(q0.y);
  q_ = std::move(q0);
  w_ = std::move(w0);
  sum_ = {Vec(q_.x.size(), 0.0), Vec(q_.y.size(), 0.0)};
  t_ = 0;
}

Wpmm::StepInfo Wpmm::step() {
  const std::size_t iteration = t_ + 1;
  StepInfo info;
  try {
    const Vec px = oracles::p_vector_x(spec_, q_, w_, config_.mu, config_.rho);
    const Vec py = oracles::p_vector_y(spec_, q_, w_, config_.mu, config_.rho);
    const double c = constants_.oracle_coefficient;
    info.v = {rx_->propose(q_.x, px, c), ry_->propose(q_.y, py, c)};
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(std::string("oracle failed: ") + e.what(), iteration);
  }
  if (!linalg::all_finite(info.v.x) || !linalg::all_finite(info.v.y))
    throw SolverError("oracle returned non-finite entries", iteration);

  info.eta = constants_.base_eta;
  if (config_.step_policy == StepPolicy::LineSearch) {
    try {
      const double ls = line_search_eta(spec_, q_, info.v, w_, config_.mu, config_.rho);
      const double phi_ls = line_search_objective(spec_, q_, info.v, w_, config_.mu, config_.rho, ls);
      const double phi_base =
          line_search_objective(spec_, q_, info.v, w_, config_.mu, config_.rho, constants_.base_eta);
      info.eta = phi_base < phi_ls ? constants_.base_eta : ls;
    } catch (const std::exception&) {
      info.fallback = true;
      info.eta = constants_.base_eta;
    }
  }

  q_ = model::lerp(q_, info.v, info.eta);
  rx_->advance(info.eta);
  ry_->advance(info.eta);
  linalg::axpy(config_.mu, model::k_apply(spec_, q_), w_);
  linalg::axpy(1.0, q_.x, sum_.x);
  linalg::axpy(1.0, q_.y, sum_.y);
  ++t_;
  return info;
}

PrimalPoint Wpmm::mean() const {
  if (t_ == 0) throw InvalidArgument("mean: no iterations have been run");
  const double inv = 1.0 / static_cast<double>(t_);
  return {linalg::scaled(sum_.x, inv), linalg::scaled(sum_.y, inv)};
}

RunLog run(const model::ProblemSpec& spec, const PrimalPoint& q0, const model::DualPoint& w0,
           const SolverConfig& config, const Observer& observer) {
  Wpmm solver(spec, config);
  solver.reset(q0, w0);

  RunLog log;
  log.config = config;
  log.constants = solver.constants();
  log.initial = evaluate(solver.spec(), q0, w0, config.rho);
  log.records.reserve(config.iters);
  if (config.keep_iterates) {
    log.iterates.reserve(config.iters);
    log.duals.reserve(config.iters);
  }
  const bool want_mean = config.variant != Variant::Last;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t t = 1; t <= config.iters; ++t) {
    IterationRecord rec;
    rec.t = t;
    try {
      const Wpmm::StepInfo info = solver.step();
      rec.eta = info.eta;
      rec.fallback = info.fallback;
      // Last is evaluated for every variant: L_rho(q_t, w_t) feeds the decay
      // certificate.
      rec.last = evaluate(solver.spec(), solver.q(), solver.w(), config.rho);
      if (want_mean) rec.mean = evaluate(solver.spec(), solver.mean(), solver.w(), config.rho);
    } catch (const std::exception& e) {
      log.error = e.what();
      break;
    }
    rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.keep_iterates) {
      log.iterates.push_back(solver.q());
      log.duals.push_back(solver.w());
    }
    log.records.push_back(rec);
    if (observer) observer(log.records.back());
  }

  log.last = solver.q();
  log.w = solver.w();
  if (solver.t() > 0) log.mean = solver.mean();
  return log;
}

}  // namespace wpmm::solver
