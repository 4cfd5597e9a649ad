#include "wpmm/solver/run_log_json.hpp"

namespace wpmm::solver {

using nlohmann::json;

namespace {
json evaluation(const std::optional<Evaluation>& e) {
  if (!e) return nullptr;
  return {{"objective", e->objective}, {"penalized", e->penalized}, {"feasibility", e->feasibility},
          {"al_value", e->al_value}};
}
}  // namespace

json to_json(const SolverConfig& c) {
  json j = {{"rho", c.rho},
            {"mu", c.mu},
            {"step_policy", to_string(c.step_policy)},
            {"iters", c.iters},
            {"variant", to_string(c.variant)},
            {"seed", c.seed}};
  j["eta"] = c.eta ? json(*c.eta) : json(nullptr);
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["c_dual_bound"] = c.c_dual_bound ? json(*c.c_dual_bound) : json(nullptr);
  return j;
}

json to_json(const StepConstants& k) {
  json j = {{"norm_a", k.norm_a},     {"beta_s", k.beta_s},   {"beta_hat", k.beta_hat},
            {"lambda", k.lambda},     {"base_eta", k.base_eta}, {"oracle_coefficient", k.oracle_coefficient}};
  j["alpha_s"] = k.alpha_s ? json(*k.alpha_s) : json(nullptr);
  j["max_mu"] = k.max_mu ? json(*k.max_mu) : json(nullptr);
  return j;
}

json to_json(const RunLog& log, bool include_points) {
  json records = json::array();
  for (const auto& r : log.records) {
    records.push_back({{"t", r.t},
                       {"eta", r.eta},
                       {"fallback", r.fallback},
                       {"elapsed_seconds", r.elapsed_seconds},
                       {"last", evaluation(r.last)},
                       {"mean", evaluation(r.mean)}});
  }
  json j = {{"config", to_json(log.config)},
            {"constants", to_json(log.constants)},
            {"initial", evaluation(log.initial)},
            {"records", std::move(records)}};
  j["error"] = log.error ? json(*log.error) : json(nullptr);
  if (include_points) {
    j["last"] = {{"x", log.last.x}, {"y", log.last.y}};
    j["mean"] = log.mean ? json{{"x", log.mean->x}, {"y", log.mean->y}} : json(nullptr);
    j["w"] = log.w;
  }
  return j;
}

}  // namespace wpmm::solver
