#pragma once

// Local measurements: POVMs, joint outcome statistics, classical mutual
// information of those statistics, and its maximization over local POVMs.

#include <vector>

#include "bq/optim.hpp"
#include "bq/qcore.hpp"

namespace bq {

/// PSD effects on one subsystem summing to the identity.
struct Povm {
  std::vector<Matrix> effects;

  int dim() const { return effects.empty() ? 0 : static_cast<int>(effects.front().rows()); }
  std::size_t size() const noexcept { return effects.size(); }
  /// Throws ValidationError when an effect is not PSD to -1e-9 or the sum
  /// differs from the identity by more than `tol` (max entry).
  void validate(double tol = 1e-9) const;
};

/// Computational-basis projective measurement.
Povm computational_povm(int dim);

/// Informationally complete POVM. dim 2: tetrahedral SIC with effects
/// (I + v·σ)/4; higher dims: d² rank-one effects built from basis and
/// two-element superposition vectors, symmetrically renormalized.
Povm default_ic_povm(int dim);

/// Rank of the Gram matrix Tr(E_i E_j); d² iff informationally complete.
int gram_rank(const Povm& povm, double tol = 1e-10);

struct JointDistribution {
  Eigen::MatrixXd p;  // p(i, j)

  /// Throws ValidationError when an entry is below -1e-12 or the total is
  /// off by more than 1e-9. Tiny negatives are clamped to 0 on construction.
  explicit JointDistribution(Eigen::MatrixXd probs);
};

/// p_ij = Tr[(M_i ⊗ N_j) ρ] with M on the A side, N on the B side.
JointDistribution measure_statistics(const DensityOperator& rho, const Povm& m, const Povm& n);

/// I({p_ij}) = S(p^A) + S(p^B) - S(p^AB), bits.
double classical_mi_fixed(const JointDistribution& dist);

/// K unconstrained complex rows×dim matrices G_i mapped to effects
/// E_i = S^{-1/2} G_i†G_i S^{-1/2}, S = Σ G_i†G_i + δI.
class PovmParam {
 public:
  PovmParam(int dim, int outcomes, int rows = 0, double reg = 1e-12)
      : dim_(dim), outcomes_(outcomes), rows_(rows > 0 ? rows : dim), reg_(reg) {}

  int dim() const noexcept { return dim_; }
  int outcomes() const noexcept { return outcomes_; }
  int param_dim() const noexcept { return 2 * outcomes_ * rows_ * dim_; }
  Povm povm(const RealVector& x) const;
  /// ∇x given Y_i = ∂f/∂E_i (Hermitian).
  RealVector pullback(const RealVector& x, const std::vector<Matrix>& effect_grads) const;
  /// Parameters reproducing `povm` exactly (G_i = √E_i, zero-padded when the
  /// POVM has fewer effects than outcomes()).
  RealVector from_povm(const Povm& povm) const;

 private:
  int dim_, outcomes_, rows_;
  double reg_;
};

struct ClassicalMiResult {
  BoundedValue bound;  // lower bound on I_C
  Povm a, b;
  JointDistribution distribution{Eigen::MatrixXd::Ones(1, 1)};
};

/// Local-search maximization of the classical mutual information over
/// K-outcome POVMs on each side. Reported as a lower bound on I_C.
/// `warm_a`/`warm_b`, when both given, seed restart 0.
ClassicalMiResult classical_mi_max(const DensityOperator& rho, int outcomes, const OptimizerConfig& cfg,
                                   const Povm* warm_a = nullptr, const Povm* warm_b = nullptr);

}  // namespace bq
