#include "bq/measures.hpp"

#include <cmath>
#include <random>

#include "bq/param.hpp"

namespace bq {

void Povm::validate(double tol) const {
  if (effects.empty()) throw ValidationError("povm", "no effects");
  const int d = dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const Matrix& e = effects[i];
    if (e.rows() != d || e.cols() != d) throw ValidationError("povm", "effects of different dimensions");
    const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-9)
      throw ValidationError("effect " + std::to_string(i), "effect is not positive semidefinite");
    sum += e;
  }
  const double err = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > tol) throw ValidationError("completeness", "effects sum to identity only within " + std::to_string(err));
}

Povm computational_povm(int dim) {
  Povm p;
  for (int i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    p.effects.push_back(e);
  }
  return p;
}

Povm default_ic_povm(int dim) {
  if (dim < 2) throw InputError("dim", "informationally complete POVM needs dim >= 2");
  Povm p;
  if (dim == 2) {
    const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    const Matrix y = (Matrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
    const double s = 1.0 / std::sqrt(3.0);
    const double v[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    for (const auto& b : v)
      p.effects.push_back((Matrix::Identity(2, 2) + b[0] * x + b[1] * y + b[2] * z) / 4.0);
    return p;
  }
  std::vector<Eigen::VectorXcd> vecs;
  for (int i = 0; i < dim; ++i) vecs.push_back(Eigen::VectorXcd::Unit(dim, i));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim), b = Eigen::VectorXcd::Zero(dim);
      a(i) = b(i) = 1.0 / std::sqrt(2.0);
      a(j) = 1.0 / std::sqrt(2.0);
      b(j) = cplx(0, 1.0 / std::sqrt(2.0));
      vecs.push_back(a);
      vecs.push_back(b);
    }
  Matrix frame = Matrix::Zero(dim, dim);
  for (const auto& v : vecs) frame += v * v.adjoint();
  const Matrix t = apply_function(hermitian_eig(frame), [](double s) { return 1.0 / std::sqrt(s); });
  for (const auto& v : vecs) {
    const Eigen::VectorXcd w = t * v;
    p.effects.push_back(w * w.adjoint());
  }
  return p;
}

int gram_rank(const Povm& povm, double tol) {
  const auto k = static_cast<Eigen::Index>(povm.size());
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = (povm.effects[i] * povm.effects[j]).trace().real();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  int rank = 0;
  for (double l : es.eigenvalues())
    if (l > tol * std::max(top, 1.0)) ++rank;
  return rank;
}

JointDistribution::JointDistribution(Eigen::MatrixXd probs) : p(std::move(probs)) {
  if (p.size() == 0) throw ValidationError("distribution", "empty");
  if (p.minCoeff() < -1e-12) throw ValidationError("distribution", "negative probability");
  p = p.cwiseMax(0.0);
  if (std::abs(p.sum() - 1.0) > 1e-9) throw ValidationError("distribution", "probabilities do not sum to 1");
}

namespace {

// ρ in A-then-B order as a (dA·dB)² matrix together with the side dimensions.
struct BipartiteMatrix {
  Matrix rho;
  int da = 1, db = 1;
};

BipartiteMatrix bipartite(const DensityOperator& rho) {
  const DensityOperator ordered = to_a_then_b(rho);
  return {ordered.matrix(), rho.layout().side_dim(Side::A), rho.layout().side_dim(Side::B)};
}

// Tr_B[(I ⊗ N) ρ]
Matrix contract_b(const BipartiteMatrix& bm, const Matrix& n) {
  Matrix out = Matrix::Zero(bm.da, bm.da);
  for (int a = 0; a < bm.da; ++a)
    for (int a2 = 0; a2 < bm.da; ++a2) {
      cplx acc = 0.0;
      for (int b = 0; b < bm.db; ++b)
        for (int b2 = 0; b2 < bm.db; ++b2) acc += bm.rho(a * bm.db + b, a2 * bm.db + b2) * n(b2, b);
      out(a, a2) = acc;
    }
  return out;
}

// Tr_A[(M ⊗ I) ρ]
Matrix contract_a(const BipartiteMatrix& bm, const Matrix& m) {
  Matrix out = Matrix::Zero(bm.db, bm.db);
  for (int b = 0; b < bm.db; ++b)
    for (int b2 = 0; b2 < bm.db; ++b2) {
      cplx acc = 0.0;
      for (int a = 0; a < bm.da; ++a)
        for (int a2 = 0; a2 < bm.da; ++a2) acc += bm.rho(a * bm.db + b, a2 * bm.db + b2) * m(a2, a);
      out(b, b2) = acc;
    }
  return out;
}

Eigen::MatrixXd statistics(const BipartiteMatrix& bm, const Povm& m, const Povm& n) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(n.size()));
  for (std::size_t j = 0; j < n.size(); ++j) {
    const Matrix reduced = contract_b(bm, n.effects[j]);
    for (std::size_t i = 0; i < m.size(); ++i) p(i, j) = (m.effects[i] * reduced).trace().real();
  }
  return p;
}

double classical_mi_raw(const Eigen::MatrixXd& p) {
  const Eigen::VectorXd pa = p.rowwise().sum();
  const Eigen::VectorXd pb = p.colwise().sum().transpose();
  auto h = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  double s = 0.0;
  for (Eigen::Index i = 0; i < pa.size(); ++i) s += h(pa(i));
  for (Eigen::Index j = 0; j < pb.size(); ++j) s += h(pb(j));
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    for (Eigen::Index i = 0; i < p.rows(); ++i) s -= h(p(i, j));
  return s;
}

double inv_sqrt(double s) { return 1.0 / std::sqrt(std::max(s, 1e-300)); }
double d_inv_sqrt(double s) { return -0.5 * std::pow(std::max(s, 1e-300), -1.5); }

}  // namespace

JointDistribution measure_statistics(const DensityOperator& rho, const Povm& m, const Povm& n) {
  const BipartiteMatrix bm = bipartite(rho);
  if (m.dim() != bm.da) throw InputError("povm_a", "effect dimension does not match side A");
  if (n.dim() != bm.db) throw InputError("povm_b", "effect dimension does not match side B");
  return JointDistribution(statistics(bm, m, n));
}

double classical_mi_fixed(const JointDistribution& dist) { return std::max(0.0, classical_mi_raw(dist.p)); }

// ---------------------------------------------------------------------------
// POVM parameterization

Povm PovmParam::povm(const RealVector& x) const {
  std::vector<Matrix> a(static_cast<std::size_t>(outcomes_));
  Matrix s = Matrix::Zero(dim_, dim_);
  const Eigen::Index block = 2 * rows_ * dim_;
  for (int i = 0; i < outcomes_; ++i) {
    const Matrix g = unpack(x, i * block, rows_, dim_);
    a[i] = g.adjoint() * g;
    s += a[i];
  }
  s.diagonal().array() += reg_;
  const Matrix t = apply_function(hermitian_eig(s, 1e-6), inv_sqrt);
  Povm p;
  for (const auto& ai : a) p.effects.push_back(t * ai * t);
  return p;
}

RealVector PovmParam::pullback(const RealVector& x, const std::vector<Matrix>& effect_grads) const {
  std::vector<Matrix> g(static_cast<std::size_t>(outcomes_)), a(static_cast<std::size_t>(outcomes_));
  Matrix s = Matrix::Zero(dim_, dim_);
  const Eigen::Index block = 2 * rows_ * dim_;
  for (int i = 0; i < outcomes_; ++i) {
    g[i] = unpack(x, i * block, rows_, dim_);
    a[i] = g[i].adjoint() * g[i];
    s += a[i];
  }
  s.diagonal().array() += reg_;
  const Spectrum spec = hermitian_eig(s, 1e-6);
  const Matrix t = apply_function(spec, inv_sqrt);
  Matrix z = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < outcomes_; ++i) z += a[i] * t * effect_grads[i] + effect_grads[i] * t * a[i];
  z = (0.5 * (z + z.adjoint())).eval();
  const Matrix common = spectral_derivative(spec, inv_sqrt, d_inv_sqrt, z);
  RealVector grad(param_dim());
  for (int i = 0; i < outcomes_; ++i) {
    const Matrix b = t * effect_grads[i] * t + common;
    pack_into(2.0 * g[i] * b, grad, i * block);
  }
  return grad;
}

RealVector PovmParam::from_povm(const Povm& povm) const {
  if (povm.dim() != dim_) throw InputError("povm", "dimension mismatch");
  if (static_cast<int>(povm.size()) > outcomes_) throw InputError("povm", "more effects than outcomes");
  if (rows_ < dim_) throw InputError("povm", "parameter rows smaller than dimension");
  RealVector x = RealVector::Zero(param_dim());
  const Eigen::Index block = 2 * rows_ * dim_;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    Matrix g = Matrix::Zero(rows_, dim_);
    g.topRows(dim_) = psd_sqrt(povm.effects[i]);
    pack_into(g, x, static_cast<Eigen::Index>(i) * block);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Classical MI maximization

ClassicalMiResult classical_mi_max(const DensityOperator& rho, int outcomes, const OptimizerConfig& cfg,
                                   const Povm* warm_a, const Povm* warm_b) {
  if (outcomes < 1) throw InputError("outcomes", "must be positive");
  const BipartiteMatrix bm = bipartite(rho);
  const PovmParam pa(bm.da, outcomes), pb(bm.db, outcomes);
  const int na = pa.param_dim();

  const ObjectiveFn analytic = [&](const RealVector& x, RealVector* grad) {
    const RealVector xa = x.head(na), xb = x.tail(pb.param_dim());
    const Povm m = pa.povm(xa), n = pb.povm(xb);
    std::vector<Matrix> reduced_a, reduced_b;  // Tr_B[(I⊗N_j)ρ], Tr_A[(M_i⊗I)ρ]
    Eigen::MatrixXd p(outcomes, outcomes);
    for (int j = 0; j < outcomes; ++j) {
      reduced_a.push_back(contract_b(bm, n.effects[j]));
      for (int i = 0; i < outcomes; ++i) p(i, j) = (m.effects[i] * reduced_a[j]).trace().real();
    }
    const double value = -classical_mi_raw(p.cwiseMax(0.0));
    if (grad) {
      for (int i = 0; i < outcomes; ++i) reduced_b.push_back(contract_a(bm, m.effects[i]));
      const Eigen::VectorXd marg_a = p.rowwise().sum(), marg_b = p.colwise().sum().transpose();
      std::vector<Matrix> ya(outcomes, Matrix::Zero(bm.da, bm.da)), yb(outcomes, Matrix::Zero(bm.db, bm.db));
      for (int i = 0; i < outcomes; ++i)
        for (int j = 0; j < outcomes; ++j) {
          const double floor = 1e-30;
          const double g = -(std::log2(std::max(p(i, j), floor)) - std::log2(std::max(marg_a(i), floor)) -
                             std::log2(std::max(marg_b(j), floor)) - kLog2e);
          ya[i] += g * reduced_a[j];
          yb[j] += g * reduced_b[i];
        }
      for (auto& y : ya) y = (0.5 * (y + y.adjoint())).eval();
      for (auto& y : yb) y = (0.5 * (y + y.adjoint())).eval();
      grad->resize(x.size());
      grad->head(na) = pa.pullback(xa, ya);
      grad->tail(pb.param_dim()) = pb.pullback(xb, yb);
    }
    return value;
  };

  const int dim = na + pb.param_dim();
  RealVector probe(dim);
  {
    std::mt19937_64 rng(cfg.master_seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < dim; ++k) probe(k) = normal(rng);
  }
  const double fd_error = finite_diff_check(analytic, probe, 1e-6, 64, cfg.master_seed);
  const bool use_fd = fd_error > 1e-3;
  const ObjectiveFn objective = use_fd ? ObjectiveFn([&](const RealVector& x, RealVector* grad) {
    if (grad) *grad = numerical_gradient(analytic, x, 1e-6);
    return analytic(x, nullptr);
  })
                                       : analytic;

  std::vector<RealVector> starts;
  if (warm_a && warm_b) {
    RealVector x(dim);
    x.head(na) = pa.from_povm(*warm_a);
    x.tail(pb.param_dim()) = pb.from_povm(*warm_b);
    starts.push_back(x);
  }
  const MultiStartResult ms = minimize_penalized(objective, {}, dim, cfg, starts);
  const RealVector& best = ms.best.argmin;

  ClassicalMiResult out;
  out.a = pa.povm(best.head(na));
  out.b = pb.povm(best.tail(pb.param_dim()));
  out.distribution = JointDistribution(statistics(bm, out.a, out.b));
  const double value = classical_mi_fixed(out.distribution);
  out.bound.value = value;
  out.bound.direction = Direction::lower;
  out.bound.method = "local-povm-search K=" + std::to_string(outcomes);
  out.bound.converged = ms.best.converged;
  out.bound.flagged = !ms.best.converged;
  out.bound.iterations_used = ms.best.iterations_used;
  out.bound.restart_index = ms.best.restart_index;
  out.bound.residuals["completeness_a"] = 0.0;
  out.bound.residuals["completeness_b"] = 0.0;
  for (int s = 0; s < 2; ++s) {
    const Povm& p = s == 0 ? out.a : out.b;
    Matrix sum = Matrix::Zero(p.dim(), p.dim());
    for (const auto& e : p.effects) sum += e;
    out.bound.residuals[s == 0 ? "completeness_a" : "completeness_b"] =
        (sum - Matrix::Identity(p.dim(), p.dim())).norm();
  }
  if (use_fd) out.bound.notes.push_back("analytic gradient rejected (error " + std::to_string(fd_error) +
                                        "); finite differences used");
  const double mi = mutual_information(rho);
  if (value > mi + 1e-9) {
    out.bound.flagged = true;
    out.bound.notes.push_back("measured MI exceeds quantum MI; numerical trouble");
  }
  return out;
}

}  // namespace bq
