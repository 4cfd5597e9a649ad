#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wpmm/model/problem.hpp"

namespace wpmm::solver {

enum class StepPolicy { Theoretical, LineSearch, Fixed };
enum class Variant { Mean, Last, Both };

std::string to_string(StepPolicy p);
std::string to_string(Variant v);
StepPolicy parse_step_policy(const std::string& s);
Variant parse_variant(const std::string& s);

struct SolverConfig {
  double rho = 1.0;
  double mu = 0.2;
  StepPolicy step_policy = StepPolicy::Theoretical;
  // Fixed policy: the step. Line search: the base step used in the oracle
  // coefficient (theoretical_eta when absent). Ignored by the theoretical policy.
  std::optional<double> eta;
  std::size_t iters = 100;
  Variant variant = Variant::Both;
  // Overrides max(lambda_x, lambda_y) of the oracles.
  std::optional<double> lambda;
  // c >= 2 ||w*|| for the ergodic bound.
  std::optional<double> c_dual_bound;
  std::uint64_t seed = 0;
  // Store every (q_t, w_t) in the log.
  bool keep_iterates = false;
};

// Constants fixed for a run.
struct StepConstants {
  double norm_a = 0.0;
  double beta_s = 0.0;
  std::optional<double> alpha_s;
  double beta_hat = 0.0;
  double lambda = 1.0;
  // eta passed to the oracle; the coefficient is c = base_eta * beta_hat.
  double base_eta = 0.0;
  double oracle_coefficient = 0.0;
  std::optional<double> max_mu;
};

struct Evaluation {
  // h(q), or the penalized value when q is marginally outside an indicator.
  double objective = 0.0;
  bool penalized = false;
  // ||K q||
  double feasibility = 0.0;
  // L_rho(q, w_t), penalized likewise.
  double al_value = 0.0;
};

struct IterationRecord {
  std::size_t t = 0;
  double eta = 0.0;
  // Line search failed and the base step was used.
  bool fallback = false;
  double elapsed_seconds = 0.0;
  std::optional<Evaluation> last;
  std::optional<Evaluation> mean;
};

struct RunLog {
  SolverConfig config;
  StepConstants constants;
  std::vector<IterationRecord> records;
  model::PrimalPoint last;
  // Undefined for an empty run.
  std::optional<model::PrimalPoint> mean;
  model::DualPoint w;
  Evaluation initial;
  std::vector<model::PrimalPoint> iterates;
  std::vector<model::DualPoint> duals;
  // Set when a step failed; records hold the iterations completed before it.
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

using Observer = std::function<void(const IterationRecord&)>;

Evaluation evaluate(const model::ProblemSpec& spec, const model::PrimalPoint& q, std::span<const double> w,
                    double rho);

StepConstants compute_constants(const model::ProblemSpec& spec, const SolverConfig& config);

// Algorithm state. Owns clones of the oracles so stateful ones do not leak
// between runs.
class Wpmm {
 public:
  Wpmm(const model::ProblemSpec& spec, SolverConfig config);

  // Throws InvalidArgument if q0 is outside dom R_Q.
  void reset(model::PrimalPoint q0, model::DualPoint w0);

  struct StepInfo {
    model::PrimalPoint v;
    double eta = 0.0;
    bool fallback = false;
  };
  // One primal-dual update. Throws SolverError on oracle failure.
  StepInfo step();

  const model::PrimalPoint& q() const { return q_; }
  const model::DualPoint& w() const { return w_; }
  std::size_t t() const { return t_; }
  // Ergodic average of q_1..q_t; throws if t = 0.
  model::PrimalPoint mean() const;
  const model::PrimalPoint& running_sum() const { return sum_; }
  const StepConstants& constants() const { return constants_; }
  const SolverConfig& config() const { return config_; }
  // The problem with this run's oracle clones.
  const model::ProblemSpec& spec() const { return spec_; }

 private:
  model::ProblemSpec spec_;
  std::shared_ptr<oracles::WpoComponent> rx_, ry_;
  SolverConfig config_;
  StepConstants constants_;
  model::PrimalPoint q_, sum_;
  model::DualPoint w_;
  std::size_t t_ = 0;
};

RunLog run(const model::ProblemSpec& spec, const model::PrimalPoint& q0, const model::DualPoint& w0,
           const SolverConfig& config, const Observer& observer = {});

}  // namespace wpmm::solver
