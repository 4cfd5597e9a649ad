#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>

#include "wpmm/cli/commands.hpp"
#include "wpmm/errors.hpp"
#include "wpmm/harness/reference.hpp"
#include "wpmm/harness/toy.hpp"
#include "wpmm/linalg/decompositions.hpp"
#include "wpmm/model/lagrangian.hpp"
#include "wpmm/oracles/components.hpp"
#include "wpmm/rng.hpp"
#include "wpmm/solver/certificates.hpp"
#include "wpmm/solver/step_size.hpp"

namespace wpmm::cli {

using linalg::DenseMatrix;

namespace {

constexpr int kOracleTrials = 25;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct WpoCase {
  Vec center, p;
  double c = 1.0;
};

double phi(const oracles::WpoComponent& r, std::span<const double> u, const WpoCase& w, double lambda) {
  const double d = linalg::distance(u, w.center);
  return r.value(u) + linalg::dot(u, w.p) + 0.5 * lambda * w.c * d * d;
}

// Phi_1(propose) <= Phi_lambda(prox) over random cases drawn by gen.
CertifyRow audit_component(const std::string& name, const oracles::WpoComponent& proto, Rng& rng,
                           const std::function<WpoCase(Rng&)>& gen) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < kOracleTrials; ++trial) {
    const WpoCase w = gen(rng);
    auto r = proto.clone();
    r->reset(w.center);
    const Vec v = r->propose(w.center, w.p, w.c);
    const Vec u = proto.exact_variant()->prox(w.center, w.p, w.c);
    const double lhs = phi(*r, v, w, 1.0), rhs = phi(*r, u, w, r->lambda());
    const double margin = std::isfinite(lhs) ? (lhs - rhs) / (1.0 + std::abs(rhs)) : INFINITY;
    worst = std::max(worst, margin);
  }
  return {"oracles", name, worst <= 1e-8, "worst relative margin " + fmt(worst)};
}

WpoCase vector_case(Rng& rng, std::size_t n) {
  return {rng.normal_vector(n), rng.normal_vector(n), rng.uniform(0.2, 5.0)};
}

// Orthonormal columns from the eigenvectors of a random symmetric matrix.
DenseMatrix orthonormal(Rng& rng, std::size_t n) {
  DenseMatrix g(n, n, rng.normal_vector(n * n));
  g.symmetrize();
  return linalg::symmetric_eigen(g).U;
}

DenseMatrix leading(const DenseMatrix& u, std::size_t k) {
  DenseMatrix out(u.rows(), k);
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = u(i, j);
  return out;
}

// Shifted matrix center - p/c equal to U diag(s) V^T.
WpoCase matrix_case(Rng& rng, const DenseMatrix& u, const Vec& s, const DenseMatrix& v) {
  const DenseMatrix m = linalg::reconstruct(u, s, v);
  WpoCase w;
  w.c = rng.uniform(0.5, 4.0);
  w.center = rng.normal_vector(m.size());
  w.p.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) w.p[i] = w.c * (w.center[i] - m.values()[i]);
  return w;
}

std::vector<CertifyRow> oracle_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CertifyRow> rows;
  const std::size_t rows_m = 8, cols_m = 6, k = 2;

  rows.push_back(audit_component("box", *oracles::make_box(Vec(5, -0.5), Vec(5, 0.5)), rng,
                                 [](Rng& g) { return vector_case(g, 5); }));
  rows.push_back(audit_component("l1_ball", *oracles::make_l1_ball(6, 1.5), rng,
                                 [](Rng& g) { return vector_case(g, 6); }));
  rows.push_back(audit_component("simplex", *oracles::make_simplex(6, 2.0), rng,
                                 [](Rng& g) { return vector_case(g, 6); }));
  rows.push_back(audit_component("diag_ones", *oracles::make_diag_ones(4), rng,
                                 [](Rng& g) { return vector_case(g, 16); }));

  // Matrix blocks: the shifted matrix has k dominant singular values, so the
  // rank-k oracle must match the full prox.
  auto rect = [&](Rng& g, double hi_lo, double hi_hi, double lo_hi) {
    const DenseMatrix u = leading(orthonormal(g, rows_m), cols_m), v = orthonormal(g, cols_m);
    Vec s(cols_m);
    for (std::size_t i = 0; i < cols_m; ++i) s[i] = i < k ? g.uniform(hi_lo, hi_hi) : g.uniform(0.0, lo_hi);
    return matrix_case(g, u, s, v);
  };
  const double nu_scale = 0.8;
  rows.push_back(audit_component(
      "nuclear_norm", *oracles::make_nuclear_norm(rows_m, cols_m, nu_scale, k), rng,
      [&](Rng& g) {
        // Threshold nu / c must sit between the two groups for every c in [0.5, 4].
        WpoCase w = rect(g, 2.0 + nu_scale * 2.0, 6.0, 0.9 * nu_scale / 4.0);
        return w;
      }));
  rows.push_back(audit_component("nuclear_ball", *oracles::make_nuclear_ball(rows_m, cols_m, 1.2 * k, k), rng,
                                 [&](Rng& g) { return rect(g, 3.0, 4.0, 0.5); }));
  rows.push_back(audit_component(
      "spectrahedron", *oracles::make_spectrahedron(cols_m, 1.2 * k, k), rng,
      [&](Rng& g) {
        const DenseMatrix u = orthonormal(g, cols_m);
        Vec l(cols_m);
        for (std::size_t i = 0; i < cols_m; ++i) l[i] = i < k ? g.uniform(3.0, 4.0) : g.uniform(-2.0, 0.5);
        WpoCase w = matrix_case(g, u, l, u);
        DenseMatrix c(cols_m, cols_m, w.center);
        c.symmetrize();
        const DenseMatrix m = linalg::reconstruct(u, l, u);
        w.center = c.values();
        for (std::size_t i = 0; i < m.size(); ++i) w.p[i] = w.c * (w.center[i] - m.values()[i]);
        return w;
      }));

  // Polytopes start from a random interior center.
  auto centered = [](std::size_t n, bool simplex) {
    return [n, simplex](Rng& g) {
      WpoCase w = vector_case(g, n);
      Vec x(n);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = simplex ? std::abs(w.center[i]) + 0.1 : 0.5 + 0.4 * std::tanh(w.center[i]);
        s += x[i];
      }
      if (simplex)
        for (double& a : x) a /= s;
      w.center = x;
      return w;
    };
  };
  rows.push_back(audit_component("polytope_hypercube", *oracles::make_polytope_hypercube(3, 10.0), rng,
                                 centered(3, false)));
  rows.push_back(audit_component("polytope_simplex", *oracles::make_polytope_simplex(4, 10.0), rng,
                                 centered(4, true)));
  return rows;
}

struct ToyRun {
  harness::ProblemInstance inst = harness::default_toy();
  harness::ReferenceSolution ref;
  solver::RunLog log;
  double alpha_s = 0.0;
  double mu = 0.0;
};

ToyRun toy_run() {
  ToyRun r;
  harness::ReferenceOptions ro;
  ro.tol = 1e-10;
  ro.config.step_policy = solver::StepPolicy::LineSearch;
  r.ref = harness::reference_solution(r.inst, ro);
  const double norm_a = r.inst.spec.A.norm_bound;
  r.alpha_s = model::alpha_S_strongly_convex(1.0, 1.0, norm_a);
  const double beta_s = model::beta_S(1.0, 1.0, norm_a);
  r.mu = solver::max_dual_step(r.alpha_s, beta_s, 1.0, norm_a);
  solver::SolverConfig c;
  c.rho = 1.0;
  c.mu = r.mu;
  c.iters = 500;
  c.step_policy = solver::StepPolicy::Theoretical;
  r.log = solver::run(r.inst.spec, r.inst.q0, r.inst.w0, c);
  return r;
}

CertifyRow from_certificate(const std::string& suite, const solver::Certificate& cert) {
  std::string detail = "worst margin " + fmt(cert.worst_margin);
  if (cert.first_failure) detail += ", first failure at t=" + std::to_string(*cert.first_failure);
  if (!cert.applicable) detail = "not applicable: " + cert.message;
  return {suite, cert.name, cert.applicable && cert.passed, detail};
}

std::vector<CertifyRow> decay_suite(const ToyRun& r) {
  std::vector<double> al;
  for (const auto& rec : r.log.records) al.push_back(rec.last->al_value);
  return {from_certificate("decay", solver::check_linear_decay(al, r.ref.l, r.log.constants.base_eta))};
}

std::vector<CertifyRow> ergodic_suite(const ToyRun& r) {
  const double c = 2.0 * linalg::norm2(r.ref.w) + 0.1;
  const double d1 = solver::measured_d1(r.log, r.ref.l);
  const double bound = solver::ergodic_bound(c, linalg::norm2(r.inst.w0), d1, 1.0, 1.0, r.mu,
                                             r.inst.spec.A.norm_bound, r.alpha_s);
  solver::ErgodicCheck check{r.ref.h, bound, c, 1e-8, false};
  std::vector<CertifyRow> rows;
  rows.push_back(from_certificate("ergodic", solver::check_ergodic_bounds(r.log, check)));
  check.sharp_feasibility = true;
  rows.push_back(from_certificate("ergodic", solver::check_ergodic_bounds(r.log, check)));
  return rows;
}

}  // namespace

std::vector<CertifyRow> run_certify(const std::string& suite, std::uint64_t seed) {
  if (suite != "oracles" && suite != "decay" && suite != "ergodic" && suite != "all")
    throw ConfigError("certify: unknown suite '" + suite + "' (oracles, decay, ergodic, all)");
  std::vector<CertifyRow> rows;
  if (suite == "oracles" || suite == "all") rows = oracle_suite(seed);
  if (suite != "oracles") {
    const ToyRun r = toy_run();
    if (!r.log.ok()) throw std::runtime_error("certify: toy run failed: " + *r.log.error);
    if (suite == "decay" || suite == "all")
      for (auto& row : decay_suite(r)) rows.push_back(std::move(row));
    if (suite == "ergodic" || suite == "all")
      for (auto& row : ergodic_suite(r)) rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_certify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const auto rows = run_certify(suite, seed);
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.check.size());
  bool ok = true;
  out << std::left << std::setw(8) << "suite" << "  " << std::setw(static_cast<int>(width)) << "check"
      << "  result  detail\n";
  for (const auto& r : rows) {
    out << std::setw(8) << r.suite << "  " << std::setw(static_cast<int>(width)) << r.check << "  "
        << (r.passed ? "PASS  " : "FAIL  ") << "  " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitCertificate;
}

}  // namespace wpmm::cli
