#pragma once

// Dense complex linear algebra and quantum-information primitives.
//
// Structural operations (tensor, partial trace/transpose, factor embedding
// and permutation) are templates over any Eigen dense expression, so they
// work for real and complex scalars alike. Everything that needs a spectrum
// is fixed to complex double.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "bq/errors.hpp"

namespace bq {

using cplx = std::complex<double>;
template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;
using Positions = std::vector<std::size_t>;

inline constexpr double kLog2e = 1.4426950408889634;

// ---------------------------------------------------------------------------
// Index bookkeeping

/// Splits a tensor-product basis index into the part living on `keep`
/// (in original factor order) and the part living on the complement.
class FactorSplit {
 public:
  FactorSplit(std::span<const int> dims, std::span<const std::size_t> keep);

  int kept_dim() const noexcept { return kept_dim_; }
  int traced_dim() const noexcept { return traced_dim_; }
  int full_index(int kept, int traced) const noexcept {
    return table_[static_cast<std::size_t>(kept) * traced_dim_ + traced];
  }

 private:
  int kept_dim_ = 1;
  int traced_dim_ = 1;
  std::vector<int> table_;
};

/// Maps every full basis index to its image under a factor permutation:
/// new factor i is old factor order[i].
std::vector<int> permutation_table(std::span<const int> dims,
                                   std::span<const std::size_t> order);

/// Maps every full basis (row, col) pair to its partner after transposing the
/// factors in `positions`. Returned as two tables over row-major flat indices.
struct TransposeTable {
  std::vector<int> row, col;
};
TransposeTable partial_transpose_table(std::span<const int> dims,
                                       std::span<const std::size_t> positions);

int product(std::span<const int> dims);

// ---------------------------------------------------------------------------
// Structural operations

template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> tensor(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived().eval(), b.derived().eval()).eval();
}

/// Trace out every factor not listed in `keep`.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                                    std::span<const int> dims,
                                                    std::span<const std::size_t> keep) {
  const FactorSplit split(dims, keep);
  const int dk = split.kept_dim();
  const int dt = split.traced_dim();
  DenseMatrix<typename Derived::Scalar> out(dk, dk);
  for (int c = 0; c < dk; ++c) {
    for (int r = 0; r < dk; ++r) {
      typename Derived::Scalar acc(0);
      for (int t = 0; t < dt; ++t) acc += m(split.full_index(r, t), split.full_index(c, t));
      out(r, c) = acc;
    }
  }
  return out;
}

/// Adjoint of partial_trace: x on the `keep` factors tensored with identity on
/// the rest, laid out in the original factor order.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived>& x,
                                            std::span<const int> dims,
                                            std::span<const std::size_t> keep) {
  const FactorSplit split(dims, keep);
  const int n = product(dims);
  DenseMatrix<typename Derived::Scalar> out = DenseMatrix<typename Derived::Scalar>::Zero(n, n);
  for (int t = 0; t < split.traced_dim(); ++t)
    for (int c = 0; c < split.kept_dim(); ++c)
      for (int r = 0; r < split.kept_dim(); ++r)
        out(split.full_index(r, t), split.full_index(c, t)) = x(r, c);
  return out;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> partial_transpose(const Eigen::MatrixBase<Derived>& m,
                                                        std::span<const int> dims,
                                                        std::span<const std::size_t> positions) {
  const TransposeTable table = partial_transpose_table(dims, positions);
  const int n = static_cast<int>(m.rows());
  DenseMatrix<typename Derived::Scalar> out(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const std::size_t flat = static_cast<std::size_t>(r) * n + c;
      out(table.row[flat], table.col[flat]) = m(r, c);
    }
  return out;
}

/// Reorder tensor factors so that new factor i is old factor order[i].
template <typename Derived>
DenseMatrix<typename Derived::Scalar> permute_factors(const Eigen::MatrixBase<Derived>& m,
                                                      std::span<const int> dims,
                                                      std::span<const std::size_t> order) {
  const std::vector<int> map = permutation_table(dims, order);
  const int n = static_cast<int>(m.rows());
  DenseMatrix<typename Derived::Scalar> out(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) out(map[r], map[c]) = m(r, c);
  return out;
}

template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Layouts and states

enum class Side { A, B };

struct Factor {
  std::string label;
  int dim = 1;
  Side side = Side::A;

  bool operator==(const Factor&) const = default;
};

/// Ordered tensor factors plus the A-vs-B assignment of each.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Factor> factors);

  /// Standard two-party layout with factors "A" and "B".
  static SubsystemLayout bipartite(int dim_a, int dim_b);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  Dims dims() const;
  int total_dim() const;
  int side_dim(Side side) const;
  Positions side_positions(Side side) const;

  std::size_t index_of(std::string_view label) const;
  Positions positions_of(std::span<const std::string> labels) const;
  SubsystemLayout subset(std::span<const std::size_t> positions) const;
  /// Factors of this layout followed by those of `other`; labels must not clash.
  SubsystemLayout concat(const SubsystemLayout& other) const;
  /// Same factors with `suffix` appended to every label.
  SubsystemLayout suffixed(std::string_view suffix) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Validation tolerances for DensityOperator.
struct StateTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double min_eigenvalue = -1e-9;
};

/// Hermitian, PSD, unit-trace matrix on a SubsystemLayout. Construction
/// validates; a DensityOperator that exists is always valid.
class DensityOperator {
 public:
  DensityOperator(SubsystemLayout layout, Matrix matrix, const StateTolerance& tol = {});

  static DensityOperator pure(SubsystemLayout layout, const Eigen::VectorXcd& psi);

  const SubsystemLayout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  SubsystemLayout layout_;
  Matrix matrix_;
};

/// Throws ValidationError naming the violated invariant.
void validate_density(const Matrix& m, int expected_dim, const StateTolerance& tol = {});

// ---------------------------------------------------------------------------
// Spectra and matrix functions

struct Spectrum {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns
};

/// Throws InputError if `h` is not Hermitian to `tol`.
Spectrum hermitian_eig(const Matrix& h, double tol = 1e-8);

/// V f(diag) V†.
Matrix apply_function(const Spectrum& spec, const std::function<double(double)>& f);

/// Hermitian square root after clipping negative eigenvalues.
Matrix psd_sqrt(const Matrix& h);

/// Adjoint of the Fréchet derivative of a spectral function f at
/// H = V diag(s) V†, applied to Y. `f` and `df` give f and f'.
/// The map is self-adjoint, so this is also the forward derivative.
Matrix spectral_derivative(const Spectrum& spec, const std::function<double(double)>& f,
                           const std::function<double(double)>& df, const Matrix& y);

// ---------------------------------------------------------------------------
// Information quantities (bits)

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep);
Matrix partial_transpose(const DensityOperator& rho, Side side);
/// Same state with factors reordered so every A-side factor precedes every
/// B-side factor (relative order preserved).
DensityOperator to_a_then_b(const DensityOperator& rho);

/// Entropy of eigenvalues with the 0·log0 convention: values in
/// [-1e-9, 1e-12) contribute nothing, anything below -1e-9 is rejected.
double entropy_of_eigenvalues(const RealVector& eigenvalues);
double entropy_bits(const Matrix& rho);
double von_neumann_entropy(const DensityOperator& rho);
double mutual_information(const DensityOperator& rho);
/// I(A:B) for a raw matrix with A = `a` factors and B = `b` factors.
double mutual_information(const Matrix& rho, std::span<const int> dims,
                          std::span<const std::size_t> a, std::span<const std::size_t> b);

double shannon_entropy(std::span<const double> p);
/// Returns +infinity when p_k > 1e-12 where q_k <= 1e-15.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double trace_norm(const Matrix& h);
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double binary_entropy(double x);

}  // namespace bq
