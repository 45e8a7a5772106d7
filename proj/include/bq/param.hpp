#pragma once

// Unconstrained real parameterizations of the matrix sets the solvers search
// over. Each maps a real vector x to a matrix and pulls a matrix gradient back
// to ∇x. Gradients use the complex convention Γ = ∂f/∂Re Z + i ∂f/∂Im Z, so
// that df = Re Tr[Γ† dZ]; for Hermitian-matrix arguments the gradient W is
// Hermitian with df = Re Tr[W dX].

#include "bq/qcore.hpp"

namespace bq {

/// Real vector (all real parts, then all imaginary parts, column-major) of a
/// complex rows×cols matrix.
RealVector pack(const Matrix& z);
Matrix unpack(const RealVector& x, Eigen::Index offset, int rows, int cols);
void pack_into(const Matrix& z, RealVector& x, Eigen::Index offset);

/// σ(G) = (GG† + εI) / Tr(GG† + εI) for square complex G.
class DensityParam {
 public:
  explicit DensityParam(int dim, double eps = 1e-9) : dim_(dim), eps_(eps) {}

  int dim() const noexcept { return dim_; }
  int param_dim() const noexcept { return 2 * dim_ * dim_; }
  Matrix state(const RealVector& x) const;
  /// ∇x of f(σ(x)) given W = ∂f/∂σ.
  RealVector pullback(const RealVector& x, const Matrix& w) const;
  /// A parameter vector whose state is (numerically) σ.
  RealVector from_state(const Matrix& sigma) const;

 private:
  int dim_;
  double eps_;
};

/// U(G) = G (G†G)^(-1/2): an isometry from C^cols into C^rows.
class IsometryParam {
 public:
  IsometryParam(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int param_dim() const noexcept { return 2 * rows_ * cols_; }
  Matrix isometry(const RealVector& x) const;
  /// ∇x of f(U(x)) given the complex gradient Γ_U.
  RealVector pullback(const RealVector& x, const Matrix& grad_u) const;
  RealVector from_isometry(const Matrix& u) const { return pack(u); }

 private:
  int rows_, cols_;
};

}  // namespace bq
