#include "wpmm/harness/cme.hpp"

#include <cmath>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/kernels.hpp"
#include "wpmm/linalg/projections.hpp"
#include "wpmm/oracles/components.hpp"
#include "wpmm/oracles/matrix_oracles.hpp"
#include "wpmm/rng.hpp"

namespace wpmm::harness {

using linalg::DenseMatrix;

namespace {

constexpr int kMaxBlockAttempts = 100;

Vec thresholded_block(Rng& rng, std::size_t size, double threshold) {
  for (int attempt = 0; attempt < kMaxBlockAttempts; ++attempt) {
    Vec u = rng.uniform_vector(size, -1.0, 1.0);
    bool any = false;
    for (double& x : u) {
      if (std::abs(x) <= threshold) x = 0.0;
      any = any || x != 0.0;
    }
    if (any) return u;
  }
  throw InvalidArgument("gen_cme_instance: every entry of a block of size " + std::to_string(size) +
                        " was thresholded away in " + std::to_string(kMaxBlockAttempts) + " attempts");
}

}  // namespace

void validate(const CmeConfig& cfg) {
  if (cfg.r == 0 || cfg.d < cfg.r) throw InvalidArgument("CmeConfig: need d >= r >= 1");
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
    throw InvalidArgument("CmeConfig: noise_sigma must be finite and nonnegative");
  if (!(cfg.entry_threshold >= 0.0 && cfg.entry_threshold < 1.0))
    throw InvalidArgument("CmeConfig: entry_threshold must lie in [0, 1)");
}

CmeInstance gen_cme_instance(const CmeConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  const std::size_t d = cfg.d;
  CmeInstance out;
  out.sigma = DenseMatrix(d, d);
  const std::size_t base = d / cfg.r;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < cfg.r; ++b) {
    const std::size_t size = b + 1 == cfg.r ? d - offset : base;
    const Vec u = thresholded_block(rng, size, cfg.entry_threshold);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) out.sigma(offset + i, offset + j) = u[i] * u[j];
    offset += size;
  }

  DenseMatrix jittered = out.sigma;
  for (std::size_t i = 0; i < d; ++i) jittered(i, i) += 1e-12;
  const DenseMatrix l = linalg::cholesky(jittered);

  // Column i of z is the i-th sample.
  DenseMatrix g(d, d);
  for (double& x : g.data()) x = rng.normal();
  DenseMatrix z = linalg::kernels::gemm(l, g);
  for (double& x : z.data()) x += cfg.noise_sigma * rng.normal();
  out.sigma_hat = (1.0 / static_cast<double>(d)) * linalg::kernels::gemm_nt(z, z);
  out.sigma_hat.symmetrize();

  out.tau = out.sigma.trace();
  out.s = linalg::norm1(out.sigma.values());
  return out;
}

ProblemInstance build_cme_problem(const DenseMatrix& sigma_hat, double tau, double s, std::size_t k_hat,
                                  const linalg::LanczosOptions& opts) {
  if (sigma_hat.rows() != sigma_hat.cols()) throw DimensionMismatch("build_cme_problem: Sigma_hat must be square");
  if (!(tau > 0.0) || !(s > 0.0)) throw InvalidArgument("build_cme_problem: tau and s must be positive");
  if (k_hat == 0 || k_hat > sigma_hat.rows()) throw InvalidArgument("build_cme_problem: k_hat out of range");
  const std::size_t d = sigma_hat.rows(), n = d * d;
  ProblemInstance inst{{model::SmoothTerm::half_squared_distance(sigma_hat.values()), LinearMap::identity(n),
                        oracles::make_spectrahedron(d, tau, k_hat, opts), oracles::make_l1_ball(n, s), std::nullopt},
                       {},
                       Vec(n, 0.0)};
  inst.spec.f.name = "0.5||S - Sigma_hat||_F^2";
  inst.q0.x = oracles::project_spectrahedron(sigma_hat, tau).values();
  inst.q0.y = linalg::project_l1_ball(sigma_hat.values(), s);
  model::validate(inst.spec);
  return inst;
}

CmeMetrics metrics_cme(std::span<const double> s_matrix, const DenseMatrix& sigma, const DenseMatrix& sigma_hat,
                       double s) {
  const std::span<const double> sh = sigma_hat.values(), sg = sigma.values();
  if (s_matrix.size() != sh.size() || s_matrix.size() != sg.size())
    throw DimensionMismatch("metrics_cme: shapes differ");
  const double nh = linalg::norm2(sh), ns = linalg::norm2(sg);
  if (nh == 0.0 || ns == 0.0) throw InvalidArgument("metrics_cme: Sigma and Sigma_hat must be nonzero");
  CmeMetrics m;
  const double dh = linalg::distance(s_matrix, sh), ds = linalg::distance(s_matrix, sg);
  m.normalized_objective = dh * dh / (2.0 * nh * nh);
  m.recovery_error = ds * ds / (2.0 * ns * ns);
  m.feasibility_distance = linalg::distance(s_matrix, linalg::project_l1_ball(s_matrix, s));
  return m;
}

}  // namespace wpmm::harness
