#include "wpmm/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "wpmm/errors.hpp"

namespace wpmm::cli {

using nlohmann::json;

namespace {

// Pulls typed fields out of a JSON object and remembers which keys were used.
class Reader {
 public:
  Reader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
  }

  template <class T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(context_ + ": key '" + key + "' has the wrong type (" + j_.at(key).dump() + ")");
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    T value{};
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    get(key, value);
    out = value;
  }

  void get_path(const char* key, std::filesystem::path& out) {
    std::string s;
    bool present = j_.contains(key) && !j_.at(key).is_null();
    get(key, s);
    if (present) out = s;
  }

  void ignore(const char* key) { used_.insert(key); }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError(context_ + ": unknown key '" + item.key() + "'");
  }

  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> used_;
};

void read_run(Reader& r, RunSettings& run) {
  std::string policy = solver::to_string(run.solver.step_policy);
  std::string variant = solver::to_string(run.solver.variant);
  r.get("iters", run.solver.iters);
  r.get("rho", run.solver.rho);
  r.get("rho_mean", run.rho_mean);
  r.get("rho_last", run.rho_last);
  r.get("mu", run.solver.mu);
  r.get("eta", run.solver.eta);
  r.get("step_policy", policy);
  r.get("variant", variant);
  r.get("lambda", run.solver.lambda);
  r.get("c_dual_bound", run.solver.c_dual_bound);
  r.get("trials", run.trials);
  r.get("jobs", run.jobs);
  r.get("seed", run.seed);
  r.get_path("out", run.out_dir);
  r.get("tol", run.tol);
  r.ignore("preset");
  try {
    run.solver.step_policy = solver::parse_step_policy(policy);
    run.solver.variant = solver::parse_variant(variant);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  run.solver.seed = run.seed;

  if (!(run.solver.rho > 0.0)) throw ConfigError("rho must be positive");
  for (const auto& r_opt : {run.rho_mean, run.rho_last})
    if (r_opt && !(*r_opt > 0.0)) throw ConfigError("rho_mean and rho_last must be positive");
  if (!(run.solver.mu > 0.0)) throw ConfigError("mu must be positive");
  if (run.solver.eta && !(*run.solver.eta > 0.0 && *run.solver.eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
  if (run.solver.lambda && !(*run.solver.lambda >= 1.0)) throw ConfigError("lambda must be at least 1");
  if (run.solver.step_policy == solver::StepPolicy::Fixed && !run.solver.eta)
    throw ConfigError("step_policy 'fixed' needs eta");
  if (run.trials == 0) throw ConfigError("trials must be at least 1");
  if (run.jobs == 0) throw ConfigError("jobs must be at least 1");
  if (!(run.tol > 0.0)) throw ConfigError("tol must be positive");
}

json run_json(const RunSettings& run) {
  json j = {{"iters", run.solver.iters},
            {"rho", run.solver.rho},
            {"mu", run.solver.mu},
            {"step_policy", solver::to_string(run.solver.step_policy)},
            {"variant", solver::to_string(run.solver.variant)},
            {"trials", run.trials},
            {"jobs", run.jobs},
            {"seed", run.seed},
            {"out", run.out_dir.string()},
            {"tol", run.tol}};
  if (run.rho_mean) j["rho_mean"] = *run.rho_mean;
  if (run.rho_last) j["rho_last"] = *run.rho_last;
  if (run.solver.eta) j["eta"] = *run.solver.eta;
  if (run.solver.lambda) j["lambda"] = *run.solver.lambda;
  if (run.solver.c_dual_bound) j["c_dual_bound"] = *run.solver.c_dual_bound;
  return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

json cme_preset(const std::string& name, std::size_t r) {
  if (name != "paper-cme") throw ConfigError("unknown cme preset '" + name + "' (expected paper-cme)");
  json j = {{"d", 400}, {"iters", 2000}, {"trials", 20}, {"mu", 0.2}, {"step_policy", "line_search"},
            {"variant", "both"}};
  // Tuned penalties per block count.
  switch (r) {
    case 5: j.update({{"rho_last", 25.0}, {"rho_mean", 5.0}}); break;
    case 10: j.update({{"rho_last", 5.0}, {"rho_mean", 5.0}}); break;
    case 20: j.update({{"rho_last", 1.0}, {"rho_mean", 1.0}}); break;
    default: break;
  }
  return j;
}

json maxcut_preset(const std::string& name) {
  if (name != "paper-maxcut") throw ConfigError("unknown maxcut preset '" + name + "' (expected paper-maxcut)");
  return {{"mu", 0.2}, {"eta", 0.2}, {"rho", 1.0}, {"iters", 2000}, {"step_policy", "fixed"}};
}

CmeCommandConfig cme_config_from_json(const json& j) {
  CmeCommandConfig c;
  c.run.solver.step_policy = solver::StepPolicy::LineSearch;
  Reader r(j, "cme config");
  r.get("d", c.cme.d);
  r.get("r", c.cme.r);
  r.get("noise_sigma", c.cme.noise_sigma);
  r.get("entry_threshold", c.cme.entry_threshold);
  r.get("rank", c.rank);
  read_run(r, c.run);
  r.finish();
  try {
    harness::validate(c.cme);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (c.rank > c.cme.d) throw ConfigError("rank must not exceed d");
  return c;
}

MaxCutCommandConfig maxcut_config_from_json(const json& j) {
  MaxCutCommandConfig c;
  c.run.solver.step_policy = solver::StepPolicy::Fixed;
  c.run.solver.eta = 0.2;
  c.run.solver.variant = solver::Variant::Last;
  Reader r(j, "maxcut config");
  r.get_path("graph", c.graph);
  r.get("random_n", c.random_n);
  r.get("random_p", c.random_p);
  r.get("rank", c.rank);
  read_run(r, c.run);
  r.finish();
  if (c.run.solver.step_policy == solver::StepPolicy::Theoretical)
    throw ConfigError("maxcut has no PQG modulus; use step_policy 'fixed' or 'line_search'");
  if (c.random_n == 0) throw ConfigError("random_n must be positive");
  if (!(c.random_p >= 0.0 && c.random_p <= 1.0)) throw ConfigError("random_p must lie in [0, 1]");
  if (c.rank == 0) throw ConfigError("rank must be at least 1");
  return c;
}

GenericCommandConfig generic_config_from_json(const json& j) {
  GenericCommandConfig c;
  c.run.solver.step_policy = solver::StepPolicy::LineSearch;
  Reader r(j, "generic config");
  r.get_path("problem", c.problem);
  read_run(r, c.run);
  r.finish();
  if (c.problem.empty()) throw ConfigError("generic: a problem file is required");
  return c;
}

json to_json(const CmeCommandConfig& c) {
  json j = run_json(c.run);
  j.update({{"d", c.cme.d},
            {"r", c.cme.r},
            {"noise_sigma", c.cme.noise_sigma},
            {"entry_threshold", c.cme.entry_threshold},
            {"rank", c.rank == 0 ? c.cme.r : c.rank}});
  return j;
}

json to_json(const MaxCutCommandConfig& c) {
  json j = run_json(c.run);
  j["rank"] = c.rank;
  if (c.graph.empty()) {
    j.update({{"random_n", c.random_n}, {"random_p", c.random_p}});
  } else {
    j["graph"] = c.graph.string();
  }
  return j;
}

json to_json(const GenericCommandConfig& c) {
  json j = run_json(c.run);
  j["problem"] = c.problem.string();
  return j;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

json merge(json a, const json& b) {
  if (a.is_null()) a = json::object();
  for (const auto& item : b.items()) a[item.key()] = item.value();
  return a;
}

}  // namespace wpmm::cli
