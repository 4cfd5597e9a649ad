// Acceptance suite. Usage: wpmm_acceptance [criterion ...]; no arguments runs
// all eight. Prints one PASS/FAIL line per criterion and exits nonzero if any
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "audits.hpp"
#include "test_oracles.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/harness/cme.hpp"
#include "wpmm/harness/gset.hpp"
#include "wpmm/harness/maxcut.hpp"
#include "wpmm/harness/reference.hpp"
#include "wpmm/harness/toy.hpp"
#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/linalg/projections.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/oracles/matrix_oracles.hpp"
#include "wpmm/oracles/polytope.hpp"
#include "wpmm/solver/certificates.hpp"
#include "wpmm/solver/step_size.hpp"

using namespace wpmm;
namespace wt = wpmm::testing;
using linalg::DenseMatrix;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
  // Lines printed under the verdict; they do not affect it.
  std::vector<std::string> notes;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// --- 1: rank-k matrix oracles against the full prox ---------------------------

Outcome oracle_vs_prox() {
  Rng rng(101);
  const std::size_t rows = 20, cols = 15, trials = 100;
  double worst_dist = 0.0, worst_phi = -INFINITY;
  std::size_t infeasible = 0;
  auto track = [&](const DenseMatrix& v, const DenseMatrix& ref, double rv, double rref,
                   const wt::MatrixWpoInstance& in) {
    worst_dist = std::max(worst_dist, wt::frob_diff(v, ref));
    worst_phi = std::max(worst_phi, wt::phi1(rv, v, in) - wt::phi1(rref, ref, in));
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t k = 1 + rng.index(5);
    {
      const auto in = wt::low_rank_nuclear_reg(rng, rows, cols, k);
      const DenseMatrix v = oracles::wpo_nuclear_reg(in.center, in.p, in.c, in.param, in.k);
      const DenseMatrix ref = wt::reference_nuclear_prox(in);
      track(v, ref, in.param * wt::jacobi_nuclear_norm(v), in.param * wt::jacobi_nuclear_norm(ref), in);
    }
    {
      const auto in = wt::low_rank_nuclear_ball(rng, rows, cols, k);
      const DenseMatrix v = oracles::wpo_nuclear_ball(in.center, in.p, in.c, in.param, in.k);
      const DenseMatrix ref = wt::reference_nuclear_ball(in);
      if (wt::jacobi_nuclear_norm(v) > in.param * (1.0 + 1e-9)) ++infeasible;
      track(v, ref, 0.0, 0.0, in);
    }
    {
      const auto in = wt::low_rank_spectrahedron(rng, rows, k);
      const DenseMatrix v = oracles::wpo_spectrahedron(in.center, in.p, in.c, in.param, in.k);
      const DenseMatrix ref = wt::reference_spectrahedron(in);
      const auto e = wt::jacobi_eigen(v);
      if (e.values.back() < -1e-9 || std::abs(v.trace() - in.param) > 1e-9 * in.param) ++infeasible;
      track(v, ref, 0.0, 0.0, in);
    }
  }
  Outcome o;
  o.passed = worst_dist <= 1e-6 && worst_phi <= 1e-8 && infeasible == 0;
  o.detail = "300 instances (20x15 nuclear/ball, 20x20 spectrahedron): max ||oracle - prox||_F = " + sci(worst_dist) +
             ", max Phi_1 excess = " + sci(worst_phi) + ", infeasible outputs = " + std::to_string(infeasible);
  return o;
}

// --- 2: polytope WPO condition ---------------------------------------------------

Outcome polytope_condition() {
  Rng rng(202);
  struct Case {
    const char* name;
    std::vector<Vec> vertices;
    oracles::Lmo lmo;
  };
  const std::vector<Case> cases = {{"3-D hypercube", oracles::hypercube_vertices(3), oracles::hypercube_lmo(3)},
                                   {"4-D simplex", oracles::simplex_vertices(4), oracles::simplex_lmo(4)}};
  Outcome o;
  o.passed = true;
  std::string parts;
  for (const auto& cs : cases) {
    double worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
      // Random active set with random weights; the center is the point it represents.
      oracles::PolytopeState state;
      for (const Vec& v : cs.vertices)
        if (rng.uniform() < 0.4) {
          state.vertices.push_back(v);
          state.weights.push_back(rng.uniform(0.05, 1.0));
        }
      if (state.empty()) {
        state.vertices.push_back(cs.vertices[rng.index(cs.vertices.size())]);
        state.weights.push_back(1.0);
      }
      double total = 0.0;
      for (double w : state.weights) total += w;
      for (double& w : state.weights) w /= total;
      const Vec center = state.point();
      const Vec p = rng.normal_vector(center.size());
      const double c = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
      const auto out = oracles::wpo_polytope(state, p, center, c, cs.lmo);
      worst = std::max(worst, wt::polytope_required_lambda(out.v, cs.vertices, center, p, c));
    }
    const bool ok = std::isfinite(worst) && worst <= 10.0;
    o.passed = o.passed && ok;
    parts += std::string(parts.empty() ? "" : "; ") + cs.name + " measured lambda = " + fmt("%.4f", worst);
  }
  o.detail = "50 trials each: " + parts + " (bound 10)";
  return o;
}

// --- 3 and 4: toy certificates ----------------------------------------------------

struct Toy {
  harness::ProblemInstance inst = harness::default_toy();
  harness::ReferenceSolution ref;
  solver::RunLog log;
  double alpha_s = 0, beta_s = 0, mu = 0;
};

const Toy& toy() {
  static const Toy t = [] {
    Toy r;
    harness::ReferenceOptions ro;
    ro.tol = 1e-10;
    r.ref = harness::reference_solution(r.inst, ro);
    const double norm_a = r.inst.spec.A.norm_bound;
    r.alpha_s = model::alpha_S_strongly_convex(1.0, 1.0, norm_a);
    r.beta_s = model::beta_S(1.0, 1.0, norm_a);
    r.mu = solver::max_dual_step(r.alpha_s, r.beta_s, 1.0, norm_a);
    solver::SolverConfig c;
    c.rho = 1.0;
    c.mu = r.mu;
    c.iters = 500;
    c.step_policy = solver::StepPolicy::Theoretical;
    r.log = solver::run(r.inst.spec, r.inst.q0, r.inst.w0, c);
    return r;
  }();
  return t;
}

Outcome linear_decay() {
  const Toy& t = toy();
  std::vector<double> al;
  for (const auto& rec : t.log.records) al.push_back(rec.last->al_value);
  const auto cert = solver::check_linear_decay(al, t.ref.l, t.log.constants.base_eta);
  Outcome o;
  o.passed = t.log.ok() && al.size() == 500 && cert.passed;
  o.detail = "500 iterations, mu = " + sci(t.mu) + ", eta = " + sci(t.log.constants.base_eta) +
             ", L* = " + fmt("%.12g", t.ref.l) + ", worst margin = " + sci(cert.worst_margin);
  if (cert.first_failure) o.detail += ", first failure t = " + std::to_string(*cert.first_failure);
  return o;
}

Outcome ergodic_bounds() {
  const Toy& t = toy();
  const double c = 2.0 * linalg::norm2(t.ref.w) + 0.1;
  const double d1 = solver::measured_d1(t.log, t.ref.l);
  const double bound = solver::ergodic_bound(c, linalg::norm2(t.inst.w0), d1, 1.0, 1.0, t.mu, t.inst.spec.A.norm_bound,
                                             t.alpha_s);
  solver::ErgodicCheck check{t.ref.h, bound, c, 1e-8, false};
  const auto cert = solver::check_ergodic_bounds(t.log, check);
  Outcome o;
  o.passed = t.log.ok() && t.log.records.size() == 500 && cert.passed;
  o.detail = "T = 1..500, c = " + sci(c) + ", B = " + sci(bound) + ", worst margin = " + sci(cert.worst_margin);
  check.sharp_feasibility = true;
  const auto sharp = solver::check_ergodic_bounds(t.log, check);
  o.notes.push_back(std::string("feasibility against 2B/(cT) as well: ") + (sharp.passed ? "holds" : "violated") +
                    " (worst margin " + sci(sharp.worst_margin) + ")");
  return o;
}

// --- 5: desk-scale CME -------------------------------------------------------------

struct CmeRun {
  double last_feas = 0, last_obj = 0;
  double mean_feas_tenth = 0, mean_feas_final = 0;
  bool ok = false;
};

CmeRun run_cme(const harness::CmeInstance& ci, std::size_t k_hat, double rho) {
  const auto inst = harness::build_cme_problem(ci.sigma_hat, ci.tau, ci.s, k_hat);
  solver::SolverConfig c;
  c.rho = rho;
  c.mu = 0.2;
  c.iters = 1000;
  c.step_policy = solver::StepPolicy::LineSearch;
  const auto log = solver::run(inst.spec, inst.q0, inst.w0, c);
  CmeRun r;
  r.ok = log.ok() && log.records.size() == c.iters;
  if (!r.ok) return r;
  const auto ml = harness::metrics_cme(log.last.x, ci.sigma, ci.sigma_hat, ci.s);
  r.last_feas = ml.feasibility_distance;
  r.last_obj = ml.normalized_objective;
  r.mean_feas_tenth = log.records[c.iters / 10 - 1].mean->feasibility;
  r.mean_feas_final = log.records.back().mean->feasibility;
  return r;
}

Outcome desk_cme() {
  harness::CmeConfig cfg;
  cfg.d = 60;
  cfg.r = 3;
  cfg.seed = 1;
  const auto ci = harness::gen_cme_instance(cfg);
  const double feas_tol = 1e-3 * ci.sigma_hat.frobenius_norm();

  // Reference optimum: exact oracles, tight tolerance.
  harness::ReferenceOptions ro;
  ro.tol = 1e-7;
  ro.max_iters = 200000;
  ro.config.rho = 5.0;
  ro.config.mu = 5.0;
  const auto ref = harness::reference_solution(harness::build_cme_problem(ci.sigma_hat, ci.tau, ci.s, cfg.d), ro);
  const double ref_obj = harness::metrics_cme(ref.q.x, ci.sigma, ci.sigma_hat, ci.s).normalized_objective;
  const auto eig = linalg::symmetric_eigen(DenseMatrix(cfg.d, cfg.d, ref.q.x));
  std::size_t rank = 0;
  for (double l : eig.lambda)
    if (l > 1e-6 * eig.lambda.front()) ++rank;

  Outcome o;
  bool last_ok = false, mean_ok = false;
  std::string last_rho = "none", mean_rho = "none";
  std::string rows;
  for (double rho : {0.2, 1.0, 5.0}) {
    const CmeRun r = run_cme(ci, rank, rho);
    const bool lo = r.ok && r.last_feas <= feas_tol && std::abs(r.last_obj - ref_obj) <= 1e-3;
    const bool mo = r.ok && r.mean_feas_final <= r.mean_feas_tenth / 3.0;
    if (lo && !last_ok) last_rho = fmt("%g", rho);
    if (mo && !mean_ok) mean_rho = fmt("%g", rho);
    last_ok = last_ok || lo;
    mean_ok = mean_ok || mo;
    o.notes.push_back("k_hat = " + std::to_string(rank) + ", rho = " + fmt("%g", rho) + ": last l1-distance " +
                      sci(r.last_feas) + " (limit " + sci(feas_tol) + "), objective gap " +
                      sci(std::abs(r.last_obj - ref_obj)) + ", mean ||Kq|| at T/10 " + sci(r.mean_feas_tenth) +
                      " -> final " + sci(r.mean_feas_final));
  }
  // Oracle rank equal to the block count, for comparison.
  for (double rho : {0.2, 1.0, 5.0}) {
    const CmeRun r = run_cme(ci, cfg.r, rho);
    o.notes.push_back("k_hat = r = 3, rho = " + fmt("%g", rho) + ": last l1-distance " + sci(r.last_feas) +
                      ", objective gap " + sci(std::abs(r.last_obj - ref_obj)) + " (informational)");
  }
  o.passed = last_ok && mean_ok;
  o.detail = "d = 60, r = 3, T = 1000, reference objective " + fmt("%.10g", ref_obj) + " (numerical rank " +
             std::to_string(rank) + ", " + std::to_string(ref.iterations) + " iterations); k_hat = " +
             std::to_string(rank) + "; last passes at rho = " + last_rho + ", mean passes at rho = " + mean_rho;
  return o;
}

// --- 6: desk-scale Max Cut ---------------------------------------------------------

Outcome desk_maxcut() {
  const auto graph = harness::erdos_renyi(40, 0.2, 1);
  const DenseMatrix c = harness::laplacian(graph);
  auto run_k = [&](std::size_t k) {
    const auto inst = harness::build_maxcut_problem(c, k);
    solver::SolverConfig cfg;
    cfg.rho = 1.0;
    cfg.mu = 0.2;
    cfg.eta = 0.2;
    cfg.iters = 1000;
    cfg.step_policy = solver::StepPolicy::Fixed;
    cfg.variant = solver::Variant::Last;
    const auto log = solver::run(inst.spec, inst.q0, inst.w0, cfg);
    if (!log.ok()) throw std::runtime_error("max cut run failed: " + *log.error);
    return harness::metrics_maxcut(log.last.x, c);
  };
  const auto m10 = run_k(10), m15 = run_k(15);

  harness::ReferenceOptions ro;
  ro.tol = 1e-8;
  ro.max_iters = 200000;
  ro.config.eta = 0.2;
  const auto ref = harness::reference_solution(harness::build_maxcut_problem(c, 40), ro);
  const auto mref = harness::metrics_maxcut(ref.q.x, c);

  const double gap = rel(m10.objective, mref.objective);
  const double over = rel(m15.objective, m10.objective);
  Outcome o;
  o.passed = m10.diag_feasibility <= 1e-2 && gap <= 1e-3 && over <= 1e-3;
  o.detail = "n = 40, p = 0.2, " + std::to_string(graph.edges.size()) + " edges: ||diag(S) - 1|| = " +
             sci(m10.diag_feasibility) + ", objective " + fmt("%.10g", m10.objective) + " vs reference " +
             fmt("%.10g", mref.objective) + " (relative gap " + sci(gap) + "), k_hat = 15 changes it by " + sci(over);
  return o;
}

// --- 7: constant formulas ----------------------------------------------------------

Outcome constants() {
  std::vector<std::pair<std::string, bool>> checks;
  auto near = [&](const std::string& name, double got, double want) {
    checks.emplace_back(name, rel(got, want) <= 1e-12);
  };
  near("beta_S(1,1,1)", model::beta_S(1, 1, 1), 5.0);
  near("beta_S(2.5,0,7)", model::beta_S(2.5, 0, 7), 2.5);
  near("beta_S(2,3,0)", model::beta_S(2, 3, 0), 5.0);
  near("alpha_S(1,1,1)", model::alpha_S_strongly_convex(1, 1, 1), 1.0 / 3.0);
  near("alpha_S(2,1,1)", model::alpha_S_strongly_convex(2, 1, 1), 0.5);
  // normA = 0: the second branch reduces to rho, so alpha/2 whenever rho >= alpha/2.
  near("alpha_S(3,2,0)", model::alpha_S_strongly_convex(3, 2, 0), 1.5);
  const long double as = 1.0L / 3.0L, bs = 5.0L;
  near("theoretical_eta example", solver::theoretical_eta(1.0 / 3.0, 5.0, 1.0, 0.000694, 1.0),
       static_cast<double>(as / (2.0L * (bs + 2.0L * 0.000694L * 4.0L))));
  checks.emplace_back("theoretical_eta example ~ 0.03330",
                      std::abs(solver::theoretical_eta(1.0 / 3.0, 5.0, 1.0, 0.000694, 1.0) - 0.03330) < 5e-6);
  near("theoretical_eta mu -> 0", solver::theoretical_eta(1.0 / 3.0, 5.0, 1.0, 1e-15, 1.0), 1.0 / 30.0);
  near("theoretical_eta lambda homogeneity", solver::theoretical_eta(0.2, 3.0, 2.0, 0.1, 0.7),
       0.5 * solver::theoretical_eta(0.2, 3.0, 1.0, 0.1, 0.7));
  near("max_dual_step example", solver::max_dual_step(1.0 / 3.0, 5.0, 1.0, 1.0),
       static_cast<double>((std::sqrt(as * as + bs * bs) - bs) / 16.0L));
  checks.emplace_back("max_dual_step alpha_S -> 0", solver::max_dual_step(1e-12, 5.0, 1.0, 1.0) < 1e-20);
  near("ergodic_bound example", solver::ergodic_bound(2, 0, 1, 1, 1, 0.5, 1, 1.0 / 3.0), 58.0);
  near("ergodic_bound d1 <= 0", solver::ergodic_bound(2, 1, -3, 1, 1, 0.5, 1, 1.0 / 3.0), 9.0);

  Rng rng(707);
  std::size_t outside = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double alpha = rng.uniform(0.01, 3.0), rho = rng.uniform(0.01, 10.0), norm_a = rng.uniform(0.0, 5.0);
    const double beta = alpha * rng.uniform(1.0, 20.0), lambda = rng.uniform(1.0, 10.0);
    const double a = model::alpha_S_strongly_convex(alpha, rho, norm_a), b = model::beta_S(beta, rho, norm_a);
    const double mu = solver::max_dual_step(a, b, lambda, norm_a) * rng.uniform(1e-9, 1.0);
    const double eta = solver::theoretical_eta(a, b, lambda, mu, norm_a);
    if (!(eta > 0.0 && eta <= 1.0)) ++outside;
  }
  checks.emplace_back("eta in (0,1] for mu <= max_dual_step (10000 draws)", outside == 0);

  Outcome o;
  o.passed = true;
  std::size_t failed = 0;
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      o.notes.push_back("failed: " + name);
      ++failed;
    }
    o.passed = o.passed && ok;
  }
  o.detail = std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks at 1e-12 relative";
  return o;
}

// --- 8: kernels against brute-force oracles ----------------------------------------

Outcome kernels() {
  Rng rng(808);
  const int trials = 1000;
  std::map<std::string, std::size_t> failures;
  double worst_simplex = 0, worst_l1 = 0, worst_svd = 0, worst_eigh = 0;

  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng.index(8);
    const Vec z = rng.uniform_vector(n, -3.0, 3.0);
    const double tau = rng.uniform(0.1, 3.0);
    const double ds = linalg::distance(linalg::project_simplex(z, tau), wt::brute_simplex_projection(z, tau));
    worst_simplex = std::max(worst_simplex, ds);
    if (ds > 1e-10 * (1.0 + tau)) ++failures["simplex"];
    const double dl = linalg::distance(linalg::project_l1_ball(z, tau), wt::brute_l1_projection(z, tau));
    worst_l1 = std::max(worst_l1, dl);
    if (dl > 1e-10 * (1.0 + tau)) ++failures["l1_ball"];
  }

  linalg::LanczosOptions lanczos;
  lanczos.allow_dense = false;
  for (int t = 0; t < trials; ++t) {
    // Alternate the full-rank path and the restarted Lanczos path.
    const bool krylov = t % 2 == 1;
    const std::size_t r = krylov ? 40 + rng.index(20) : 2 + rng.index(12);
    const std::size_t c = krylov ? 30 + rng.index(20) : 2 + rng.index(12);
    const std::size_t k = krylov ? 1 + rng.index(4) : std::min(r, c);
    const DenseMatrix m = wt::random_matrix(rng, r, c);
    const auto ref = wt::jacobi_singular_values(m);
    try {
      const auto f = linalg::truncated_svd(m, k, 1e-10, krylov ? lanczos : linalg::LanczosOptions{});
      double err = 0.0;
      for (std::size_t i = 0; i < k; ++i) err = std::max(err, std::abs(f.sigma[i] - ref[i]) / ref[0]);
      err = std::max({err, wt::orthonormality_error(f.U), wt::orthonormality_error(f.V)});
      worst_svd = std::max(worst_svd, err);
      if (err > 1e-6) ++failures["truncated_svd"];
    } catch (const ConvergenceError&) {
      ++failures["truncated_svd (no convergence)"];
    }

    const std::size_t d = krylov ? 30 + rng.index(30) : 1 + rng.index(12);
    const std::size_t ke = krylov ? 1 + rng.index(4) : d;
    const DenseMatrix s = wt::random_symmetric(rng, d);
    const auto eref = wt::jacobi_eigen(s);
    try {
      const auto e = linalg::truncated_eigh(s, ke, 1e-10, krylov ? lanczos : linalg::LanczosOptions{});
      const double scale = std::max(1.0, std::abs(eref.values.front()));
      double err = 0.0;
      for (std::size_t i = 0; i < ke; ++i) err = std::max(err, std::abs(e.lambda[i] - eref.values[i]) / scale);
      err = std::max(err, wt::orthonormality_error(e.U));
      worst_eigh = std::max(worst_eigh, err);
      if (err > 1e-6) ++failures["truncated_eigh"];
    } catch (const ConvergenceError&) {
      ++failures["truncated_eigh (no convergence)"];
    }
  }

  Outcome o;
  o.passed = failures.empty();
  o.detail = "1000 trials each: simplex " + sci(worst_simplex) + ", l1 ball " + sci(worst_l1) + ", truncated SVD " +
             sci(worst_svd) + ", truncated eigh " + sci(worst_eigh) + " (worst errors)";
  for (const auto& [name, count] : failures) o.notes.push_back(name + ": " + std::to_string(count) + " failures");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "rank-k oracles match the full prox", 10, oracle_vs_prox},
      {2, "polytope weak proximal condition", 10, polytope_condition},
      {3, "linear decay certificate on the toy", 30, linear_decay},
      {4, "ergodic objective and feasibility bounds on the toy", 30, ergodic_bounds},
      {5, "desk-scale covariance estimation", 120, desk_cme},
      {6, "desk-scale Max Cut", 120, desk_maxcut},
      {7, "constant formulas", 5, constants},
      {8, "kernels against brute-force oracles", 30, kernels},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  bool ok = true;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.passed && in_time;
    std::printf("[%s] criterion %d: %s: %s; %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " OVER BUDGET");
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}
