#include "wpmm/cli/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "wpmm/cli/generic_problem.hpp"
#include "wpmm/cli/output.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/harness/gset.hpp"
#include "wpmm/harness/maxcut.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/solver/run_log_json.hpp"

namespace wpmm::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultBaseEta = 0.2;

// objective and feasibility reported in the trace for a primal point.
using Metric = std::function<std::pair<double, double>(const model::PrimalPoint&)>;
// Extra summary fields for a final point.
using FinalInfo = std::function<json(const model::PrimalPoint&)>;

struct TrialOutput {
  std::vector<ResultRow> rows;
  json info = json::object();
  int code = kExitOk;
  std::string error;
};

struct Output {
  solver::Variant variant;
  const char* name;
  double rho;
};

std::vector<Output> outputs(const RunSettings& run) {
  const auto v = run.solver.variant;
  std::vector<Output> out;
  if (v != solver::Variant::Last) out.push_back({solver::Variant::Mean, "mean", run.rho_mean.value_or(run.solver.rho)});
  if (v != solver::Variant::Mean) out.push_back({solver::Variant::Last, "last", run.rho_last.value_or(run.solver.rho)});
  return out;
}

// Runs every requested output on one instance. Outputs sharing a penalty share
// one run; others get their own.
TrialOutput run_instance(const harness::ProblemInstance& inst, const RunSettings& run, std::size_t trial,
                         const Metric& metric, const FinalInfo& final_info) {
  TrialOutput out;
  std::map<double, std::vector<Output>> groups;
  for (const Output& o : outputs(run)) groups[o.rho].push_back(o);

  json constants = json::object();
  json finals = json::object();
  for (const auto& [rho, group] : groups) {
    solver::SolverConfig cfg = run.solver;
    cfg.rho = rho;
    cfg.variant = group.size() == 2 ? solver::Variant::Both : group.front().variant;
    std::optional<solver::Wpmm> s;
    try {
      s.emplace(inst.spec, cfg);
      s->reset(inst.q0, inst.w0);
    } catch (const std::exception& e) {
      out.code = kExitConfig;
      out.error = e.what();
      return out;
    }
    for (const Output& o : group) constants[o.name] = solver::to_json(s->constants());

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<ResultRow>> per(group.size());
    for (std::size_t t = 1; t <= cfg.iters; ++t) {
      solver::Wpmm::StepInfo info;
      try {
        info = s->step();
      } catch (const std::exception& e) {
        out.code = kExitSolver;
        out.error = "trial " + std::to_string(trial) + ", t=" + std::to_string(t) + ": " + e.what();
        break;
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (std::size_t g = 0; g < group.size(); ++g) {
        const model::PrimalPoint& q = group[g].variant == solver::Variant::Mean ? s->mean() : s->q();
        const auto ev = solver::evaluate(s->spec(), q, s->w(), rho);
        ResultRow row{trial, t, ev.objective, ev.feasibility, ev.al_value, info.eta, elapsed, group[g].name};
        if (metric) std::tie(row.objective, row.feasibility) = metric(q);
        per[g].push_back(std::move(row));
      }
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      for (auto& row : per[g]) out.rows.push_back(std::move(row));
      if (s->t() > 0 && final_info)
        finals[group[g].name] = final_info(group[g].variant == solver::Variant::Mean ? s->mean() : s->q());
    }
    if (out.code != kExitOk) break;
  }
  out.info["constants"] = std::move(constants);
  if (!finals.empty()) out.info["final"] = std::move(finals);
  return out;
}

// Runs trials 0..n-1 on a pool of jobs threads. Results come back in trial order.
std::vector<TrialOutput> run_trials(std::size_t n, std::size_t jobs, const std::function<TrialOutput(std::size_t)>& one,
                                    std::ostream& log) {
  std::vector<TrialOutput> results(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = one(i);
      } catch (const ConfigError& e) {
        results[i].code = kExitConfig;
        results[i].error = e.what();
      } catch (const IoError& e) {
        results[i].code = kExitIo;
        results[i].error = e.what();
      } catch (const std::exception& e) {
        results[i].code = kExitSolver;
        results[i].error = e.what();
      }
      std::lock_guard lock(log_mutex);
      log << "trial " << i << (results[i].code == kExitOk ? " done" : " failed: " + results[i].error) << '\n';
    }
  };
  const std::size_t threads = std::min(jobs, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

// Collects rows, writes outputs and maps failures to the exit code. The first
// failing trial decides the code; config errors win over solver errors.
int finish(const std::vector<TrialOutput>& results, json summary, const RunSettings& run, std::ostream& log,
           const std::function<void(json&, const std::vector<ResultRow>&)>& extra = {}) {
  std::vector<ResultRow> rows;
  int code = kExitOk;
  json trials = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    json t = r.info;
    t["trial"] = i;
    if (r.code != kExitOk) {
      t["error"] = r.error;
      if (code == kExitOk || r.code == kExitConfig) code = r.code;
    }
    trials.push_back(std::move(t));
  }
  if (code == kExitConfig) {
    for (const auto& r : results)
      if (r.code == kExitConfig) {
        log << "config error: " << r.error << '\n';
        break;
      }
    return kExitConfig;
  }
  summary["trials"] = std::move(trials);
  summary["variants"] = summarize(rows);
  summary["status"] = code == kExitOk ? "ok" : "solver_error";
  if (extra) extra(summary, rows);
  try {
    write_outputs(run.out_dir, rows, summary);
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  if (code != kExitOk) {
    for (const auto& r : results)
      if (r.code != kExitOk) {
        log << "solver error: " << r.error << " (partial outputs kept in " << run.out_dir.string() << ")\n";
        break;
      }
    return code;
  }
  log << "wrote " << (run.out_dir / "trace.csv").string() << " and summary.json\n";
  return kExitOk;
}

}  // namespace

int cmd_cme(const CmeCommandConfig& config, std::ostream& log) {
  const std::size_t k_hat = config.rank == 0 ? config.cme.r : config.rank;
  auto one = [&](std::size_t trial) {
    harness::CmeConfig cfg = config.cme;
    cfg.seed = config.run.seed + trial;
    const auto ci = harness::gen_cme_instance(cfg);
    const auto inst = harness::build_cme_problem(ci.sigma_hat, ci.tau, ci.s, k_hat);
    Metric metric = [&](const model::PrimalPoint& q) {
      const auto m = harness::metrics_cme(q.x, ci.sigma, ci.sigma_hat, ci.s);
      return std::pair{m.normalized_objective, m.feasibility_distance};
    };
    FinalInfo fin = [&](const model::PrimalPoint& q) {
      const auto m = harness::metrics_cme(q.x, ci.sigma, ci.sigma_hat, ci.s);
      return json{{"normalized_objective", m.normalized_objective},
                  {"feasibility_distance", m.feasibility_distance},
                  {"recovery_error", m.recovery_error}};
    };
    TrialOutput out = run_instance(inst, config.run, trial, metric, fin);
    out.info["seed"] = cfg.seed;
    out.info["tau"] = ci.tau;
    out.info["s"] = ci.s;
    out.info["sigma_hat_frobenius"] = ci.sigma_hat.frobenius_norm();
    return out;
  };
  json summary = {{"command", "cme"}, {"config", to_json(config)}};
  return finish(run_trials(config.run.trials, config.run.jobs, one, log), std::move(summary), config.run, log);
}

int cmd_maxcut(const MaxCutCommandConfig& config, std::ostream& log) {
  std::optional<harness::GsetGraph> file_graph;
  if (!config.graph.empty()) {
    try {
      file_graph = harness::load_gset(harness::resolve_data_path(config.graph));
    } catch (const std::exception& e) {
      log << "I/O error: " << e.what() << '\n';
      return kExitIo;
    }
  }
  auto one = [&](std::size_t trial) {
    const auto graph = file_graph ? *file_graph
                                  : harness::erdos_renyi(config.random_n, config.random_p, config.run.seed + trial);
    const auto c = harness::laplacian(graph);
    if (config.rank > graph.n) throw ConfigError("rank must not exceed the number of vertices");
    const auto inst = harness::build_maxcut_problem(c, config.rank);
    Metric metric = [&](const model::PrimalPoint& q) {
      const auto m = harness::metrics_maxcut(q.x, c);
      return std::pair{m.objective, m.diag_feasibility};
    };
    TrialOutput out = run_instance(inst, config.run, trial, metric, {});
    out.info["vertices"] = graph.n;
    out.info["edges"] = graph.edges.size();
    return out;
  };
  json summary = {{"command", "maxcut"}, {"config", to_json(config)}};
  return finish(run_trials(config.run.trials, config.run.jobs, one, log), std::move(summary), config.run, log);
}

int cmd_generic(const GenericCommandConfig& config, std::ostream& log) {
  harness::ProblemInstance inst;
  try {
    inst = load_generic_problem(read_json_file(config.problem));
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  RunSettings run = config.run;
  if (run.solver.step_policy == solver::StepPolicy::LineSearch && !run.solver.eta &&
      !model::effective_pqg_alpha(inst.spec, run.solver.rho)) {
    run.solver.eta = kDefaultBaseEta;
    log << "note: no PQG modulus; line search uses base eta " << kDefaultBaseEta << '\n';
  }
  const auto initial = solver::evaluate(inst.spec, inst.q0, inst.w0, run.solver.rho);
  auto one = [&](std::size_t trial) { return run_instance(inst, run, trial, {}, {}); };
  json summary = {{"command", "generic"},
                  {"config", to_json(config)},
                  {"initial", {{"objective", initial.objective}, {"feasibility", initial.feasibility}}}};
  const double tol = config.run.tol;
  // converged_at: first t (0 is the start) after which ||Kq|| <= tol and the
  // objective moves by at most tol, for every later iteration of trial 0.
  auto converged = [&](json& s, const std::vector<ResultRow>& rows) {
    json conv = json::object();
    std::map<std::string, std::vector<const ResultRow*>> by_variant;
    for (const auto& r : rows)
      if (r.trial == 0) by_variant[r.variant].push_back(&r);
    for (const auto& [variant, series] : by_variant) {
      // Point t is the start for t = 0 and row t - 1 otherwise. Walk back over
      // the tail of rows that satisfy both conditions.
      auto feas_at = [&](std::size_t t) { return t == 0 ? initial.feasibility : series[t - 1]->feasibility; };
      std::size_t i = series.size();
      while (i > 0) {
        const ResultRow& r = *series[i - 1];
        const double prev = i >= 2 ? series[i - 2]->objective : initial.objective;
        if (!(r.feasibility <= tol && std::abs(r.objective - prev) <= tol)) break;
        --i;
      }
      std::optional<std::size_t> at;
      if (feas_at(i) <= tol) {
        at = i;
      } else if (i < series.size()) {
        at = i + 1;
      }
      conv[variant] = at ? json(*at) : json(nullptr);
    }
    s["converged_at"] = std::move(conv);
    s["tol"] = tol;
  };
  return finish(run_trials(run.trials, run.jobs, one, log), std::move(summary), run, log, converged);
}

}  // namespace wpmm::cli
