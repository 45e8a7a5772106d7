#pragma once

// n-copy broadcast states and the minimal mutual information across the
// A^n : B^n cut over them.
//
// A feasible n-copy state has every single-copy marginal equal to ρ, which
// forces its support into supp(ρ)^⊗n. The solvers therefore work in reduced
// coordinates τ on (C^r)^⊗n, r = rank ρ, with σ = V^⊗n τ V^†⊗n where V is
// the isometry onto supp ρ. The marginal constraints become Tr_{¬k} τ = Λ
// (Λ = V†ρV, full rank), which has a strictly feasible point Λ^⊗n, so the
// final Dykstra projection converges linearly. For pure ρ the feasible set is
// the single point ρ^⊗n and the reduced problem is trivial.

#include <optional>
#include <string>
#include <vector>

#include "bq/optim.hpp"
#include "bq/param.hpp"
#include "bq/states.hpp"

namespace bq {

/// Default hard cap on (d_A·d_B)^n; BQ_MAX_DIM overrides it in the CLI.
inline constexpr int kDefaultMaxDim = 256;

struct BroadcastState {
  int n = 1;
  DensityOperator base;
  DensityOperator joint;  // on copies_layout(base.layout(), n)
  std::vector<double> marginal_residuals;
};

/// ‖Tr_{others}(joint) − base‖_F for copy k (0-based).
double marginal_residual(const DensityOperator& joint, const DensityOperator& base, int k);

/// The objective I(A^n : B^n) over reduced coordinates, exposed for gradient
/// validation and custom drivers. Parameters are the DensityParam factor of τ.
class BroadcastProblem {
 public:
  BroadcastProblem(const DensityOperator& rho, int n, bool symmetric = false, int max_dim = kDefaultMaxDim);

  int n() const noexcept { return n_; }
  int rank() const noexcept { return rank_; }
  int reduced_dim() const noexcept { return reduced_dim_; }
  int param_dim() const noexcept { return param_.param_dim(); }
  bool symmetric() const noexcept { return symmetric_; }
  const DensityOperator& base() const noexcept { return rho_; }

  /// τ(x), twirled when symmetric.
  Matrix reduced_state(const RealVector& x) const;
  /// σ = W τ W† on the full copy space.
  Matrix lift(const Matrix& tau) const;
  /// τ = W† σ W plus the weight of σ outside supp(ρ)^⊗n.
  Matrix reduce(const Matrix& sigma, double* leakage = nullptr) const;

  double mutual_information_reduced(const Matrix& tau) const;
  ObjectiveFn objective() const;
  /// Σ_k ‖Tr_{¬k} τ − Λ‖²_F
  ObjectiveFn marginal_penalty() const;
  RealVector params_for(const Matrix& tau) const { return param_.from_state(tau); }

  /// Dykstra projection of τ onto {PSD, trace one, fixed marginals}.
  ProjectionResult project(const Matrix& tau, double tol) const;
  Matrix twirl(const Matrix& tau) const;
  /// Λ^⊗n, the reduced form of ρ^⊗n.
  Matrix product_point() const;

  SubsystemLayout joint_layout() const { return copies_layout(rho_.layout(), n_); }

 private:
  DensityOperator rho_;
  int n_;
  bool symmetric_;
  int rank_ = 1;
  int reduced_dim_ = 1;
  Matrix support_;   // V, d×r
  Matrix lambda_;    // V†ρV
  Matrix lift_;      // W = V^⊗n
  Dims full_dims_;
  Positions a_positions_, b_positions_;
  Dims reduced_dims_;
  std::vector<std::vector<int>> copy_permutations_;
  DensityParam param_;
};

struct BroadcastResult {
  BoundedValue bound;
  BroadcastState state;
  double pre_projection_value = 0.0;
  std::vector<DensityOperator> feasible_candidates;  // every projected candidate considered
};

struct BroadcastOptions {
  int max_dim = kDefaultMaxDim;
  bool keep_candidates = false;
};

/// Upper bound on (I_b)_n: the lowest I(A^n:B^n) over projected candidates
/// from penalized multi-start optimization, ρ^⊗n, and any warm starts.
BroadcastResult broadcast_mi_upper(const DensityOperator& rho, int n, const OptimizerConfig& cfg,
                                   const std::vector<DensityOperator>& warm_starts = {},
                                   const BroadcastOptions& options = {});

/// Same, restricted to permutation-invariant broadcast states (every
/// candidate twirled over copy permutations).
BroadcastResult broadcast_mi_symmetric(const DensityOperator& rho, int n, const OptimizerConfig& cfg,
                                       const std::vector<DensityOperator>& warm_starts = {},
                                       const BroadcastOptions& options = {});

struct DeFinettiBound {
  double mutual_information = 0.0;  // I(Σ p_k ρ_k^⊗n)
  double analytic_cap = 0.0;        // n Σ p_k I(ρ_k) + S({p_k})
};

/// Throws InputError when the ensemble average differs from ρ by > 1e-8.
DeFinettiBound definetti_upper(const DensityOperator& rho, const Ensemble& ens, int n);

// ---------------------------------------------------------------------------
// Growth curves

enum class GrowthClass { constant, bounded, linear_certified, inconclusive };
std::string to_string(GrowthClass c);

struct GrowthPoint {
  int n = 1;
  BoundedValue upper;
  BoundedValue lower;
  double residual_max = 0.0;
};

struct GrowthCurve {
  std::vector<GrowthPoint> per_n;
  GrowthClass classification = GrowthClass::inconclusive;
  std::optional<double> certificate;  // E_IC lower bound
  double definetti_cap = 0.0;         // cap at n_max from the best ensemble found
  double best_per_copy_upper = 0.0;   // min_n upper/n, an upper bound on the regularization
  std::vector<std::string> notes;
};

struct GrowthOptions {
  int max_dim = kDefaultMaxDim;
  int ensemble_size = 0;  // 0: rank²
  std::vector<Ensemble> ensembles;  // extra de Finetti candidates
  bool certify = true;
};

/// Estimates (I_b)_n for n = 1..n_max with warm starts carried across n
/// (optimum_n ⊗ ρ, de Finetti states of the best ensembles) and classifies
/// the growth.
GrowthCurve growth_curve(const DensityOperator& rho, int n_max, const OptimizerConfig& cfg,
                         const GrowthOptions& options = {});

/// Header "n,upper_bits,lower_bits,residual_max,classification".
std::string growth_curve_csv(const GrowthCurve& curve);

// ---------------------------------------------------------------------------
// Structural property checks

struct PropertyCheck {
  std::string name;
  double lhs = 0.0;  // estimate that should be small
  double rhs = 0.0;  // bound it should not exceed (tolerance excluded)
  double tol = 0.0;
  bool passed = false;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
};

/// Monotonicity under local channels: est_n((Λ_A⊗Λ_B)ρ) warm-started from
/// the channel image of ρ's optimum ≤ est_n(ρ) + tol.
PropertyCheck check_monotonicity(const DensityOperator& rho, const Channel& channel_a, const Channel& channel_b,
                                 int n, const OptimizerConfig& cfg, double tol = 1e-3);

/// est_n(Σ p_i ρ_i) warm-started with Σ p_i ρ_i^(n) ≤ Σ p_i est_n(ρ_i) + S({p_i}) + tol.
PropertyCheck check_convexity(const std::vector<double>& weights, const std::vector<DensityOperator>& states,
                              int n, const OptimizerConfig& cfg, double tol = 1e-3);

/// est_n(ρ⊗σ) warm-started with ρ^(n)⊗σ^(n) ≤ est_n(ρ) + est_n(σ) + tol.
PropertyCheck check_subadditivity(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                  const OptimizerConfig& cfg, double tol = 1e-3);

/// Runs the three checks on (ρ, σ) with local depolarizing noise `p_noise`.
PropertyReport property_checks(const DensityOperator& rho, const DensityOperator& sigma, double p_noise, int n,
                               const OptimizerConfig& cfg, double tol = 1e-3);

/// ρ⊗σ relabeled so the A factors of both form side A (labels get suffixes
/// "" and "'" respectively).
DensityOperator tensor_states(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace bq
