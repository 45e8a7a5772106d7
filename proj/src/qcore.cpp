#include "bq/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "bq/entropic.hpp"

namespace bq {

namespace {

std::vector<int> digits_of(int index, std::span<const int> dims) {
  std::vector<int> digits(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = index % dims[i];
    index /= dims[i];
  }
  return digits;
}

void check_positions(std::span<const int> dims, std::span<const std::size_t> positions) {
  std::set<std::size_t> seen;
  for (std::size_t p : positions) {
    if (p >= dims.size()) throw InputError("factor", "position " + std::to_string(p) + " out of range");
    if (!seen.insert(p).second) throw InputError("factor", "position " + std::to_string(p) + " repeated");
  }
}

}  // namespace

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

FactorSplit::FactorSplit(std::span<const int> dims, std::span<const std::size_t> keep) {
  check_positions(dims, keep);
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t p : keep) kept[p] = true;
  Positions traced;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!kept[i]) traced.push_back(i);
  for (std::size_t p : keep) kept_dim_ *= dims[p];
  for (std::size_t p : traced) traced_dim_ *= dims[p];

  const int n = product(dims);
  table_.assign(static_cast<std::size_t>(n), 0);
  for (int f = 0; f < n; ++f) {
    const auto digits = digits_of(f, dims);
    int k = 0, t = 0;
    for (std::size_t p : keep) k = k * dims[p] + digits[p];
    for (std::size_t p : traced) t = t * dims[p] + digits[p];
    table_[static_cast<std::size_t>(k) * traced_dim_ + t] = f;
  }
}

std::vector<int> permutation_table(std::span<const int> dims, std::span<const std::size_t> order) {
  if (order.size() != dims.size()) throw InputError("order", "permutation length mismatch");
  check_positions(dims, order);
  const int n = product(dims);
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) {
    const auto digits = digits_of(f, dims);
    int g = 0;
    for (std::size_t j = 0; j < order.size(); ++j) g = g * dims[order[j]] + digits[order[j]];
    map[static_cast<std::size_t>(f)] = g;
  }
  return map;
}

TransposeTable partial_transpose_table(std::span<const int> dims,
                                       std::span<const std::size_t> positions) {
  check_positions(dims, positions);
  const int n = product(dims);
  std::vector<bool> flip(dims.size(), false);
  for (std::size_t p : positions) flip[p] = true;

  std::vector<std::vector<int>> digits(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) digits[static_cast<std::size_t>(f)] = digits_of(f, dims);

  TransposeTable table;
  table.row.resize(static_cast<std::size_t>(n) * n);
  table.col.resize(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const auto& dr = digits[static_cast<std::size_t>(r)];
      const auto& dc = digits[static_cast<std::size_t>(c)];
      int rr = 0, cc = 0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        rr = rr * dims[i] + (flip[i] ? dc[i] : dr[i]);
        cc = cc * dims[i] + (flip[i] ? dr[i] : dc[i]);
      }
      const std::size_t flat = static_cast<std::size_t>(r) * n + c;
      table.row[flat] = rr;
      table.col[flat] = cc;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// SubsystemLayout

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> labels;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw InputError(f.label, "dimension must be positive");
    if (f.label.empty()) throw InputError("label", "factor labels must be nonempty");
    if (!labels.insert(f.label).second) throw InputError(f.label, "duplicate factor label");
  }
}

SubsystemLayout SubsystemLayout::bipartite(int dim_a, int dim_b) {
  return SubsystemLayout({{"A", dim_a, Side::A}, {"B", dim_b, Side::B}});
}

Dims SubsystemLayout::dims() const {
  Dims d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

int SubsystemLayout::total_dim() const {
  int n = 1;
  for (const auto& f : factors_) n *= f.dim;
  return n;
}

int SubsystemLayout::side_dim(Side side) const {
  int n = 1;
  for (const auto& f : factors_)
    if (f.side == side) n *= f.dim;
  return n;
}

Positions SubsystemLayout::side_positions(Side side) const {
  Positions out;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].side == side) out.push_back(i);
  return out;
}

std::size_t SubsystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw InputError(std::string(label), "unknown subsystem label");
}

Positions SubsystemLayout::positions_of(std::span<const std::string> labels) const {
  Positions out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

SubsystemLayout SubsystemLayout::subset(std::span<const std::size_t> positions) const {
  std::vector<Factor> out;
  for (std::size_t p : positions) {
    if (p >= factors_.size()) throw InputError("factor", "position out of range");
    out.push_back(factors_[p]);
  }
  return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Factor> out = factors_;
  out.insert(out.end(), other.factors_.begin(), other.factors_.end());
  return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::suffixed(std::string_view suffix) const {
  std::vector<Factor> out = factors_;
  for (auto& f : out) f.label += suffix;
  return SubsystemLayout(std::move(out));
}

// ---------------------------------------------------------------------------
// DensityOperator

void validate_density(const Matrix& m, int expected_dim, const StateTolerance& tol) {
  if (m.rows() != m.cols()) throw ValidationError("shape", "matrix is not square");
  if (m.rows() != expected_dim)
    throw ValidationError("shape", "matrix dimension " + std::to_string(m.rows()) +
                                       " does not match layout dimension " +
                                       std::to_string(expected_dim));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol.hermiticity) {
        std::ostringstream os;
        os << "entry (" << r << "," << c << ") is not the conjugate of (" << c << "," << r << ")";
        throw ValidationError("hermiticity", os.str());
      }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw ValidationError("trace", "trace is " + std::to_string(tr) + ", expected 1");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().size() > 0 && es.eigenvalues()(0) < tol.min_eigenvalue)
    throw ValidationError("eigenvalue",
                          "minimum eigenvalue " + std::to_string(es.eigenvalues()(0)) +
                              " is negative");
}

DensityOperator::DensityOperator(SubsystemLayout layout, Matrix matrix, const StateTolerance& tol)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  validate_density(matrix_, layout_.total_dim(), tol);
  // exact Hermitian representative; validation already bounded the asymmetry
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

DensityOperator DensityOperator::pure(SubsystemLayout layout, const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw InputError("psi", "zero vector");
  const Eigen::VectorXcd v = psi / norm;
  return DensityOperator(std::move(layout), v * v.adjoint());
}

// ---------------------------------------------------------------------------
// Spectra

Spectrum hermitian_eig(const Matrix& h, double tol) {
  if (h.rows() != h.cols()) throw InputError("matrix", "not square");
  const double err = hermiticity_error(h);
  if (err > tol) throw InputError("matrix", "not Hermitian (deviation " + std::to_string(err) + ")");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw SolverError("eigensolver", "did not converge");
  const Eigen::Index n = h.rows();
  Spectrum out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Matrix apply_function(const Spectrum& spec, const std::function<double(double)>& f) {
  RealVector fv = spec.eigenvalues.unaryExpr(f);
  return spec.eigenvectors * fv.cast<cplx>().asDiagonal() * spec.eigenvectors.adjoint();
}

Matrix psd_sqrt(const Matrix& h) {
  return apply_function(hermitian_eig(h), [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

Matrix spectral_derivative(const Spectrum& spec, const std::function<double(double)>& f,
                           const std::function<double(double)>& df, const Matrix& y) {
  const Eigen::Index n = spec.eigenvalues.size();
  const RealVector& s = spec.eigenvalues;
  const RealVector fs = s.unaryExpr(f);
  Matrix inner = spec.eigenvectors.adjoint() * y * spec.eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double gap = s(i) - s(j);
      const double scale = std::max({1.0, std::abs(s(i)), std::abs(s(j))});
      const double g = std::abs(gap) > 1e-10 * scale ? (fs(i) - fs(j)) / gap : df(0.5 * (s(i) + s(j)));
      inner(i, j) *= g;
    }
  }
  return spec.eigenvectors * inner * spec.eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Information quantities

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.layout().concat(b.layout()), tensor(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep) {
  if (keep.empty()) throw InputError("keep", "at least one subsystem must be kept");
  const Positions pos = rho.layout().positions_of(keep);
  const Dims dims = rho.layout().dims();
  Matrix reduced = partial_trace(rho.matrix(), dims, pos);
  return DensityOperator(rho.layout().subset(pos), std::move(reduced));
}

Matrix partial_transpose(const DensityOperator& rho, Side side) {
  const Dims dims = rho.layout().dims();
  return partial_transpose(rho.matrix(), dims, rho.layout().side_positions(side));
}

DensityOperator to_a_then_b(const DensityOperator& rho) {
  Positions order = rho.layout().side_positions(Side::A);
  const Positions b = rho.layout().side_positions(Side::B);
  order.insert(order.end(), b.begin(), b.end());
  const Dims dims = rho.layout().dims();
  return DensityOperator(rho.layout().subset(order), permute_factors(rho.matrix(), dims, order));
}

double entropy_of_eigenvalues(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -1e-9)
      throw ValidationError("eigenvalue", "negative eigenvalue " + std::to_string(l) + " in entropy");
    if (l >= 1e-12) s -= l * std::log2(l);
  }
  return s;
}

double entropy_bits(const Matrix& rho) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(es.eigenvalues());
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_bits(rho.matrix()); }

double mutual_information(const Matrix& rho, std::span<const int> dims,
                          std::span<const std::size_t> a, std::span<const std::size_t> b) {
  Positions ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  const double s_ab = ab.size() == dims.size() ? entropy_bits(rho)
                                                : entropy_bits(partial_trace(rho, dims, ab));
  return entropy_bits(partial_trace(rho, dims, a)) + entropy_bits(partial_trace(rho, dims, b)) - s_ab;
}

double mutual_information(const DensityOperator& rho) {
  const auto& layout = rho.layout();
  const Positions a = layout.side_positions(Side::A);
  const Positions b = layout.side_positions(Side::B);
  if (a.empty() || b.empty()) throw InputError("layout", "mutual information needs both sides");
  const Dims dims = layout.dims();
  return mutual_information(rho.matrix(), dims, a, b);
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("length", "distributions have different lengths");
  auto check = [](std::span<const double> d, const char* name) {
    double total = 0.0;
    for (double x : d) {
      if (x < -1e-12) throw ValidationError(name, "negative probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError(name, "does not sum to 1");
  };
  check(p, "p");
  check(q, "q");
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 1e-15) {
      if (p[k] > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    d += p[k] * std::log2(p[k] / q[k]);
  }
  return std::max(d, 0.0);
}

double trace_norm(const Matrix& h) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw InputError("dimension", "trace distance between states of different dimension");
  return trace_norm(rho.matrix() - sigma.matrix());
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("x", "binary entropy argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

// ---------------------------------------------------------------------------
// Entropic combinations

namespace {

struct MarginalEntropy {
  double f = 0.0;  // -Tr X log2 X
  Matrix log_term;  // log2 X + log2 e, on the marginal
};

MarginalEntropy marginal_entropy(const Matrix& x, bool with_gradient) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (x + x.adjoint()), with_gradient ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  MarginalEntropy out;
  const RealVector& l = es.eigenvalues();
  for (double v : l)
    if (v > 0.0) out.f -= v * std::log2(v);
  if (with_gradient) {
    const RealVector lg = l.unaryExpr([](double v) { return std::log2(std::max(v, kLogFloor)) + kLog2e; });
    out.log_term = es.eigenvectors() * lg.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  }
  return out;
}

}  // namespace

EntropicEval entropic_combination(const Matrix& x, std::span<const int> dims,
                                  std::span<const EntropyTerm> terms, bool with_gradient) {
  const int n = static_cast<int>(x.rows());
  const double p = x.trace().real();
  const double plogp = p > 0.0 ? p * std::log2(p) : 0.0;
  EntropicEval out;
  if (with_gradient) out.gradient = Matrix::Zero(n, n);
  double coeff_sum = 0.0;
  for (const auto& term : terms) {
    coeff_sum += term.coeff;
    if (term.factors.empty()) continue;  // S of the trivial system: f(p) + p log p = 0
    const bool whole = term.factors.size() == dims.size();
    const MarginalEntropy me =
        marginal_entropy(whole ? x : partial_trace(x, dims, term.factors), with_gradient);
    out.value += term.coeff * (me.f + plogp);
    if (with_gradient) {
      if (whole)
        out.gradient -= term.coeff * me.log_term;
      else
        out.gradient -= term.coeff * embed(me.log_term, dims, term.factors);
    }
  }
  if (with_gradient && p > 0.0) {
    const double g = coeff_sum * (std::log2(p) + kLog2e);
    out.gradient.diagonal().array() += g;
    // empty-factor terms: their f(p) = -p log p cancels p log p, gradient too
    double empty_coeff = 0.0;
    for (const auto& term : terms)
      if (term.factors.empty()) empty_coeff += term.coeff;
    out.gradient.diagonal().array() -= empty_coeff * (std::log2(p) + kLog2e);
  }
  return out;
}

std::vector<EntropyTerm> mutual_information_terms(const Positions& a, const Positions& b) {
  Positions ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return {{1.0, a}, {1.0, b}, {-1.0, ab}};
}

}  // namespace bq
