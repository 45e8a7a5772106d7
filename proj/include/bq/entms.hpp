#pragma once

// Entanglement-measure solvers. Every value here is a BoundedValue whose
// direction says what it certifies:
//   ecsq_upper  upper on the classical squashed entanglement (ensemble form)
//   esq_upper   upper on the squashed entanglement (bounded-dimension E)
//   cemi_upper  upper on the conditional entanglement of mutual information
//   eic_lower   lower on the IC-measured relative entropy of separability,
//               through the PPT relaxation
// and chain_report checks the orderings between them that can be verified.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/measures.hpp"
#include "bq/optim.hpp"
#include "bq/states.hpp"

namespace bq {

struct EnsembleResult {
  BoundedValue bound;  // ½ Σ p_k I(ρ_k)
  Ensemble ensemble;
  double average_residual = 0.0;  // max-abs ‖Σ p_k ρ_k − ρ‖
};

/// Ensembles come from a K-outcome POVM on the purifying system, so every
/// candidate averages to ρ by construction. K = 0 selects rank².
EnsembleResult ecsq_upper(const DensityOperator& rho, int ensemble_size, const OptimizerConfig& cfg,
                          const std::vector<Ensemble>& warm_starts = {});

enum class ExtensionKind { squashed, cemi };

/// squashed: dims = {dim E}; cemi: dims = {dim A', dim B'}.
/// channel_env_dim 0 selects d·(product of dims), d the purification rank.
struct ExtensionSpec {
  ExtensionKind kind = ExtensionKind::squashed;
  Dims dims{2};
  int channel_env_dim = 0;

  static ExtensionSpec squashed(int dim_e, int env_dim = 0);
  static ExtensionSpec cemi(int dim_a, int dim_b, int env_dim = 0);
  /// Throws InputError on a non-positive dimension or a dims/kind mismatch.
  void validate() const;
  int extension_dim() const;
};

struct ExtensionResult {
  BoundedValue bound;
  DensityOperator extension;  // AB followed by E (or A', B'); E and B' on side B
  double marginal_residual = 0.0;
};

/// ½ inf [I(A:BE) − I(A:E)] over extensions reachable through a Stinespring
/// isometry R → E⊗F on the purification. The trivial extension and any warm
/// starts (full extensions on AB⊗E) are evaluated directly as candidates.
ExtensionResult esq_upper(const DensityOperator& rho, const ExtensionSpec& spec, const OptimizerConfig& cfg,
                          const std::vector<DensityOperator>& warm_starts = {});

/// ½ inf [I(AA':BB') − I(A':B')], same parameterization with R → A'B'F.
ExtensionResult cemi_upper(const DensityOperator& rho, const ExtensionSpec& spec, const OptimizerConfig& cfg,
                           const std::vector<DensityOperator>& warm_starts = {});

/// Σ p_k ρ_k ⊗ |k⟩⟨k|_E (squashed) or Σ p_k ρ_k ⊗ |k⟩⟨k|_A' ⊗ |k⟩⟨k|_B' (cemi).
DensityOperator flag_extension(const Ensemble& ens, ExtensionKind kind);

struct EicResult {
  BoundedValue bound;
  Matrix sigma;                    // final PPT iterate
  double objective = 0.0;          // KL at sigma before the safety margin
  double gradient_mapping = 0.0;   // ‖σ − Proj(σ − t∇)‖/t at the end
  std::vector<double> trace;       // objective per accepted step
  bool informationally_complete = true;
};

/// min over PPT states σ of KL(p(ρ) ‖ p(σ)) for the product measurement
/// {M_i ⊗ N_j}, by projected gradient with Dykstra projections onto
/// {PSD, PPT, trace one}. Reported value: objective − 10·gradient mapping,
/// floored at 0.
EicResult eic_lower(const DensityOperator& rho, const Povm& m, const Povm& n, const OptimizerConfig& cfg);

// ---------------------------------------------------------------------------
// Chain report

enum class Verdict { consistent, violation };
std::string to_string(Verdict v);

struct ChainCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

struct ChainReport {
  std::string state;
  std::map<std::string, BoundedValue> entries;
  std::vector<ChainCheck> checks;
  Verdict verdict = Verdict::consistent;
  std::vector<std::string> notes;
  double ensemble_entropy = 0.0;  // S({p̄_k}) of the reporting ensemble
};

struct ChainOptions {
  int n_max = 2;
  int ensemble_size = 0;
  double tol = 2e-3;
  int max_dim = 256;
  std::string state_name;
};

/// Entries: "2ecsq" (upper), "ib_n/n" per n (upper), "2cemi" and "2esq"
/// (upper), "eic" (lower). Checks:
///   eic ≤ min_n est_n / n + tol
///   est_n ≤ 2n·ecsq + S(p̄) + tol
///   n·eic ≤ est_n + tol
///   eic ≤ 2·ecsq + tol
ChainReport chain_report(const DensityOperator& rho, const OptimizerConfig& cfg, const ChainOptions& options = {});

}  // namespace bq
