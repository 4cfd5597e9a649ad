#include "wpmm/oracles/components.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "wpmm/errors.hpp"
#include "wpmm/linalg/projections.hpp"
#include "wpmm/oracles/matrix_oracles.hpp"

namespace wpmm::oracles {

using linalg::DenseMatrix;

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Zero: return "zero";
    case ComponentKind::Box: return "box";
    case ComponentKind::L1Ball: return "l1_ball";
    case ComponentKind::Simplex: return "simplex";
    case ComponentKind::NuclearNorm: return "nuclear_norm";
    case ComponentKind::NuclearBall: return "nuclear_ball";
    case ComponentKind::Spectrahedron: return "spectrahedron";
    case ComponentKind::DiagOnes: return "diag_ones";
    case ComponentKind::Polytope: return "polytope";
    case ComponentKind::Product: return "product";
  }
  return "unknown";
}

bool within_indicator_tolerance(double distance, std::span<const double> point) {
  return distance <= kIndicatorTol * (1.0 + linalg::norm2(point));
}

double WpoComponent::value(std::span<const double> v) const {
  if (v.size() != dim()) throw DimensionMismatch(describe() + ": point has length " + std::to_string(v.size()) +
                                                 ", expected " + std::to_string(dim()));
  if (is_indicator()) {
    return within_indicator_tolerance(domain_distance(v), v) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return finite_value(v);
}

Vec WpoComponent::prox(std::span<const double>, std::span<const double>, double) const {
  throw InvalidArgument(describe() + ": no exact prox routine");
}

namespace {

Vec shifted(std::span<const double> center, std::span<const double> p, double c) {
  if (!(c > 0.0)) throw InvalidArgument("oracle: c must be positive");
  if (center.size() != p.size()) throw DimensionMismatch("oracle: center and p lengths differ");
  Vec m(center.begin(), center.end());
  linalg::axpy(-1.0 / c, p, m);
  return m;
}

DenseMatrix as_matrix(std::span<const double> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("matrix block: wrong length");
  return DenseMatrix(rows, cols, Vec(v.begin(), v.end()));
}

// Blocks whose oracle is the exact prox.
class ProxComponent : public WpoComponent {
 public:
  Vec propose(std::span<const double> center, std::span<const double> p, double c) override {
    return prox(center, p, c);
  }
  bool has_exact_prox() const override { return true; }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    if (center.size() != dim()) throw DimensionMismatch(describe() + ": center has the wrong length");
    return project(shifted(center, p, c));
  }
  double domain_distance(std::span<const double> v) const override {
    if (!is_indicator()) return 0.0;
    return linalg::distance(v, project(Vec(v.begin(), v.end())));
  }

 protected:
  virtual Vec project(Vec m) const = 0;
};

class ZeroComponent final : public ProxComponent {
 public:
  explicit ZeroComponent(std::size_t n) : n_(n) {}
  ComponentKind kind() const override { return ComponentKind::Zero; }
  std::size_t dim() const override { return n_; }
  bool is_indicator() const override { return false; }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<ZeroComponent>(*this); }

 protected:
  Vec project(Vec m) const override { return m; }

 private:
  std::size_t n_;
};

class BoxComponent final : public ProxComponent {
 public:
  BoxComponent(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw DimensionMismatch("box: bound lengths differ");
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (!(lo_[i] <= hi_[i])) throw InvalidArgument("box: lo must not exceed hi");
  }
  ComponentKind kind() const override { return ComponentKind::Box; }
  std::size_t dim() const override { return lo_.size(); }
  bool is_indicator() const override { return true; }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<BoxComponent>(*this); }

 protected:
  Vec project(Vec m) const override { return linalg::project_box(m, lo_, hi_); }

 private:
  Vec lo_, hi_;
};

class L1BallComponent final : public ProxComponent {
 public:
  L1BallComponent(std::size_t n, double s) : n_(n), s_(s) {
    if (!(s > 0.0)) throw InvalidArgument("l1_ball: radius must be positive");
  }
  ComponentKind kind() const override { return ComponentKind::L1Ball; }
  std::size_t dim() const override { return n_; }
  bool is_indicator() const override { return true; }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<L1BallComponent>(*this); }

 protected:
  Vec project(Vec m) const override { return linalg::project_l1_ball(m, s_); }

 private:
  std::size_t n_;
  double s_;
};

class SimplexComponent final : public ProxComponent {
 public:
  SimplexComponent(std::size_t n, double tau) : n_(n), tau_(tau) {
    if (!(tau > 0.0)) throw InvalidArgument("simplex: tau must be positive");
  }
  ComponentKind kind() const override { return ComponentKind::Simplex; }
  std::size_t dim() const override { return n_; }
  bool is_indicator() const override { return true; }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<SimplexComponent>(*this); }

 protected:
  Vec project(Vec m) const override { return linalg::project_simplex(m, tau_); }

 private:
  std::size_t n_;
  double tau_;
};

class DiagOnesComponent final : public ProxComponent {
 public:
  explicit DiagOnesComponent(std::size_t d) : d_(d) {}
  ComponentKind kind() const override { return ComponentKind::DiagOnes; }
  std::size_t dim() const override { return d_ * d_; }
  bool is_indicator() const override { return true; }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<DiagOnesComponent>(*this); }

 protected:
  Vec project(Vec m) const override { return prox_diag_ones(as_matrix(m, d_, d_)).values(); }

 private:
  std::size_t d_;
};

// Low-rank matrix oracles. rank_ == 0 selects the full-rank exact prox.
class MatrixComponent : public WpoComponent {
 public:
  MatrixComponent(std::size_t rows, std::size_t cols, double param, std::size_t rank, linalg::LanczosOptions opts)
      : rows_(rows), cols_(cols), param_(param), rank_(rank), opts_(opts) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix block: empty shape");
    if (!(param > 0.0)) throw InvalidArgument("matrix block: parameter must be positive");
    if (rank > std::min(rows, cols)) throw InvalidArgument("matrix block: rank exceeds min(rows, cols)");
  }
  std::size_t dim() const override { return rows_ * cols_; }
  bool has_exact_prox() const override { return true; }
  std::size_t rank() const { return rank_ ? rank_ : std::min(rows_, cols_); }

  Vec propose(std::span<const double> center, std::span<const double> p, double c) override {
    if (rank_ == 0) return prox(center, p, c);
    return low_rank(as_matrix(center, rows_, cols_), as_matrix(p, rows_, cols_), c).values();
  }

  std::string describe() const override {
    return to_string(kind()) + "(" + std::to_string(rows_) + "x" + std::to_string(cols_) +
           ", rank " + (rank_ ? std::to_string(rank_) : std::string("full")) + ")";
  }

 protected:
  virtual DenseMatrix low_rank(const DenseMatrix& center, const DenseMatrix& p, double c) const = 0;

  std::size_t rows_, cols_;
  double param_;
  std::size_t rank_;
  linalg::LanczosOptions opts_;
};

class NuclearNormComponent final : public MatrixComponent {
 public:
  using MatrixComponent::MatrixComponent;
  ComponentKind kind() const override { return ComponentKind::NuclearNorm; }
  bool is_indicator() const override { return false; }
  double domain_distance(std::span<const double>) const override { return 0.0; }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    return prox_nuclear_norm(as_matrix(shifted(center, p, c), rows_, cols_), param_ / c).values();
  }
  std::unique_ptr<WpoComponent> exact_variant() const override {
    auto e = std::make_unique<NuclearNormComponent>(*this);
    e->rank_ = 0;
    return e;
  }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<NuclearNormComponent>(*this); }

 protected:
  double finite_value(std::span<const double> v) const override {
    return param_ * linalg::nuclear_norm(as_matrix(v, rows_, cols_));
  }
  DenseMatrix low_rank(const DenseMatrix& center, const DenseMatrix& p, double c) const override {
    return wpo_nuclear_reg(center, p, c, param_, rank_, opts_);
  }
};

class NuclearBallComponent final : public MatrixComponent {
 public:
  using MatrixComponent::MatrixComponent;
  ComponentKind kind() const override { return ComponentKind::NuclearBall; }
  bool is_indicator() const override { return true; }
  double domain_distance(std::span<const double> v) const override {
    const Vec s = linalg::singular_values(as_matrix(v, rows_, cols_));
    return linalg::distance(s, linalg::project_l1_ball(s, param_));
  }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    return project_nuclear_ball(as_matrix(shifted(center, p, c), rows_, cols_), param_).values();
  }
  std::unique_ptr<WpoComponent> exact_variant() const override {
    auto e = std::make_unique<NuclearBallComponent>(*this);
    e->rank_ = 0;
    return e;
  }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<NuclearBallComponent>(*this); }

 protected:
  DenseMatrix low_rank(const DenseMatrix& center, const DenseMatrix& p, double c) const override {
    return wpo_nuclear_ball(center, p, c, param_, rank_, opts_);
  }
};

class SpectrahedronComponent final : public MatrixComponent {
 public:
  using MatrixComponent::MatrixComponent;
  ComponentKind kind() const override { return ComponentKind::Spectrahedron; }
  bool is_indicator() const override { return true; }
  // Exact distance via a full eigendecomposition.
  double domain_distance(std::span<const double> v) const override {
    const DenseMatrix m = as_matrix(v, rows_, cols_);
    return linalg::distance(v, project_spectrahedron(m, param_).values());
  }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    return project_spectrahedron(as_matrix(shifted(center, p, c), rows_, cols_), param_).values();
  }
  std::unique_ptr<WpoComponent> exact_variant() const override {
    auto e = std::make_unique<SpectrahedronComponent>(*this);
    e->rank_ = 0;
    return e;
  }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<SpectrahedronComponent>(*this); }

 protected:
  DenseMatrix low_rank(const DenseMatrix& center, const DenseMatrix& p, double c) const override {
    return wpo_spectrahedron(center, p, c, param_, rank_, opts_);
  }
};

class PolytopeComponent final : public WpoComponent {
 public:
  PolytopeComponent(std::size_t n, Lmo lmo, PolytopeOptions opts) : n_(n), lmo_(std::move(lmo)), opts_(std::move(opts)) {
    if (!lmo_) throw InvalidArgument("polytope: no linear minimization oracle");
    if (opts_.lambda && !(*opts_.lambda >= 1.0)) throw InvalidArgument("polytope: lambda must be at least 1");
  }
  ComponentKind kind() const override { return ComponentKind::Polytope; }
  std::size_t dim() const override { return n_; }
  double lambda() const override { return exact_ ? 1.0 : opts_.lambda.value_or(1.0); }
  bool is_indicator() const override { return true; }
  double domain_distance(std::span<const double> v) const override {
    return opts_.distance ? opts_.distance(v) : 0.0;
  }
  bool has_exact_prox() const override { return static_cast<bool>(opts_.projection); }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    if (!opts_.projection) return WpoComponent::prox(center, p, c);
    return opts_.projection(shifted(center, p, c));
  }

  Vec propose(std::span<const double> center, std::span<const double> p, double c) override {
    if (exact_) return prox(center, p, c);
    if (state_.empty()) reset(center);
    pending_ = wpo_polytope(state_, p, center, c, lmo_, opts_.qp);
    return pending_->v;
  }

  void advance(double eta) override {
    if (exact_ || !pending_) return;
    state_ = combine_states(state_, pending_->state, eta);
    pending_.reset();
  }

  // Keeps an explicit state that already represents start; otherwise start
  // becomes the single atom of the representation.
  void reset(std::span<const double> start) override {
    pending_.reset();
    if (!state_.empty() && linalg::distance(state_.point(), start) <= 1e-9 * (1.0 + linalg::norm2(start))) return;
    state_ = PolytopeState{{Vec(start.begin(), start.end())}, {1.0}};
  }

  std::unique_ptr<WpoComponent> exact_variant() const override {
    if (!opts_.projection) return clone();
    auto e = std::make_unique<PolytopeComponent>(*this);
    e->exact_ = true;
    return e;
  }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<PolytopeComponent>(*this); }
  std::string describe() const override {
    return "polytope(n=" + std::to_string(n_) + ", lambda " + std::to_string(lambda()) + ")";
  }

  void set_state(PolytopeState s) {
    if (s.empty() || s.vertices.size() != s.weights.size()) throw InvalidArgument("polytope: malformed state");
    for (const Vec& v : s.vertices)
      if (v.size() != n_) throw DimensionMismatch("polytope: state vertex has the wrong length");
    state_ = std::move(s);
    pending_.reset();
  }
  const PolytopeState& state() const { return state_; }

 private:
  std::size_t n_;
  Lmo lmo_;
  PolytopeOptions opts_;
  PolytopeState state_;
  std::optional<PolytopeProposal> pending_;
  bool exact_ = false;
};

class ProductComponent final : public WpoComponent {
 public:
  explicit ProductComponent(std::vector<std::shared_ptr<const WpoComponent>> blocks) {
    if (blocks.empty()) throw InvalidArgument("product: no blocks");
    for (const auto& b : blocks) {
      if (!b) throw InvalidArgument("product: null block");
      offsets_.push_back(dim_);
      dim_ += b->dim();
      blocks_.push_back(b->clone());
    }
  }
  ProductComponent(const ProductComponent& other) : WpoComponent(other), dim_(other.dim_), offsets_(other.offsets_) {
    for (const auto& b : other.blocks_) blocks_.push_back(b->clone());
  }

  ComponentKind kind() const override { return ComponentKind::Product; }
  std::size_t dim() const override { return dim_; }
  double lambda() const override {
    double l = 1.0;
    for (const auto& b : blocks_) l = std::max(l, b->lambda());
    return l;
  }
  bool is_indicator() const override {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b->is_indicator(); });
  }
  double value(std::span<const double> v) const override {
    if (v.size() != dim_) throw DimensionMismatch("product: point has the wrong length");
    double total = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) total += blocks_[i]->value(slice(v, i));
    return total;
  }
  double domain_distance(std::span<const double> v) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const double d = blocks_[i]->domain_distance(slice(v, i));
      s += d * d;
    }
    return std::sqrt(s);
  }
  Vec propose(std::span<const double> center, std::span<const double> p, double c) override {
    Vec out;
    out.reserve(dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Vec v = blocks_[i]->propose(slice(center, i), slice(p, i), c);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }
  void advance(double eta) override {
    for (auto& b : blocks_) b->advance(eta);
  }
  void reset(std::span<const double> start) override {
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i]->reset(slice(start, i));
  }
  bool has_exact_prox() const override {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b->has_exact_prox(); });
  }
  Vec prox(std::span<const double> center, std::span<const double> p, double c) const override {
    Vec out;
    out.reserve(dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Vec v = blocks_[i]->prox(slice(center, i), slice(p, i), c);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }
  std::unique_ptr<WpoComponent> exact_variant() const override {
    auto e = std::make_unique<ProductComponent>(*this);
    for (auto& b : e->blocks_) b = b->exact_variant();
    return e;
  }
  std::unique_ptr<WpoComponent> clone() const override { return std::make_unique<ProductComponent>(*this); }
  std::string describe() const override {
    std::string s = "product(";
    for (std::size_t i = 0; i < blocks_.size(); ++i) s += (i ? ", " : "") + blocks_[i]->describe();
    return s + ")";
  }

 private:
  std::span<const double> slice(std::span<const double> v, std::size_t i) const {
    if (v.size() != dim_) throw DimensionMismatch("product: vector has the wrong length");
    return v.subspan(offsets_[i], blocks_[i]->dim());
  }

  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::unique_ptr<WpoComponent>> blocks_;
};

double hypercube_distance(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    const double d = x - std::clamp(x, 0.0, 1.0);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

std::shared_ptr<WpoComponent> make_zero(std::size_t n) { return std::make_shared<ZeroComponent>(n); }

std::shared_ptr<WpoComponent> make_box(Vec lo, Vec hi) {
  return std::make_shared<BoxComponent>(std::move(lo), std::move(hi));
}

std::shared_ptr<WpoComponent> make_l1_ball(std::size_t n, double s) { return std::make_shared<L1BallComponent>(n, s); }

std::shared_ptr<WpoComponent> make_simplex(std::size_t n, double tau) {
  return std::make_shared<SimplexComponent>(n, tau);
}

std::shared_ptr<WpoComponent> make_nuclear_norm(std::size_t rows, std::size_t cols, double nu, std::size_t rank,
                                                const linalg::LanczosOptions& opts) {
  return std::make_shared<NuclearNormComponent>(rows, cols, nu, rank, opts);
}

std::shared_ptr<WpoComponent> make_nuclear_ball(std::size_t rows, std::size_t cols, double tau, std::size_t rank,
                                                const linalg::LanczosOptions& opts) {
  return std::make_shared<NuclearBallComponent>(rows, cols, tau, rank, opts);
}

std::shared_ptr<WpoComponent> make_spectrahedron(std::size_t d, double tau, std::size_t rank,
                                                 const linalg::LanczosOptions& opts) {
  return std::make_shared<SpectrahedronComponent>(d, d, tau, rank, opts);
}

std::shared_ptr<WpoComponent> make_diag_ones(std::size_t d) { return std::make_shared<DiagOnesComponent>(d); }

std::shared_ptr<WpoComponent> make_polytope(std::size_t n, Lmo lmo, PolytopeOptions opts) {
  if (!opts.lambda) {
    std::cerr << "warning: polytope oracle built without a configured lambda; using lambda = 1, which the "
                 "step-size theory may not justify for this polytope\n";
  }
  return std::make_shared<PolytopeComponent>(n, std::move(lmo), std::move(opts));
}

std::shared_ptr<WpoComponent> make_polytope_hypercube(std::size_t n, std::optional<double> lambda) {
  PolytopeOptions opts;
  opts.lambda = lambda;
  opts.distance = hypercube_distance;
  opts.projection = [n](std::span<const double> z) {
    return linalg::project_box(z, Vec(n, 0.0), Vec(n, 1.0));
  };
  return make_polytope(n, hypercube_lmo(n), std::move(opts));
}

std::shared_ptr<WpoComponent> make_polytope_simplex(std::size_t n, std::optional<double> lambda) {
  PolytopeOptions opts;
  opts.lambda = lambda;
  opts.distance = [](std::span<const double> v) { return linalg::distance(v, linalg::project_simplex(v, 1.0)); };
  opts.projection = [](std::span<const double> z) { return linalg::project_simplex(z, 1.0); };
  return make_polytope(n, simplex_lmo(n), std::move(opts));
}

std::shared_ptr<WpoComponent> make_product(std::vector<std::shared_ptr<const WpoComponent>> blocks) {
  return std::make_shared<ProductComponent>(std::move(blocks));
}

void set_polytope_state(WpoComponent& component, PolytopeState state) {
  auto* poly = dynamic_cast<PolytopeComponent*>(&component);
  if (!poly) throw InvalidArgument("set_polytope_state: component is not a polytope");
  poly->set_state(std::move(state));
}

const PolytopeState* polytope_state(const WpoComponent& component) {
  const auto* poly = dynamic_cast<const PolytopeComponent*>(&component);
  return poly ? &poly->state() : nullptr;
}

}  // namespace wpmm::oracles
