#pragma once

// State families, ensembles, purification, de Finetti broadcast states,
// local channels, and the JSON state file format ("bq-state-v1").

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/qcore.hpp"

namespace bq {

/// Mixed-state decomposition {(p_k, ρ_k)}. Members share one layout.
class Ensemble {
 public:
  Ensemble(std::vector<double> probabilities, std::vector<DensityOperator> members);

  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  const std::vector<DensityOperator>& members() const noexcept { return members_; }
  const SubsystemLayout& layout() const { return members_.front().layout(); }

  DensityOperator average() const;
  /// S({p_k}) in bits.
  double shannon_entropy() const;
  /// Σ p_k I(ρ_k).
  double average_mutual_information() const;

 private:
  std::vector<double> probs_;
  std::vector<DensityOperator> members_;
};

/// Family name plus parameters. Families: bell, cc, product-mix, werner,
/// isotropic, random, file.
///   cc:          p00 p01 p10 p11           (default ½,0,0,½)
///   product-mix: q  → q|00⟩⟨00| + (1-q)|++⟩⟨++|  (default ½)
///   werner:      p  → p|Ψ⁻⟩⟨Ψ⁻| + (1-p) I/4
///   isotropic:   p  → p|Φ⁺⟩⟨Φ⁺| + (1-p) I/4
///   random:      dA dB rank (defaults 2 2 dA·dB), seed
///   file:        path
struct StateSpec {
  std::string family;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  std::string path;

  double param(const std::string& name, double fallback) const;
};

DensityOperator make_state(const StateSpec& spec);

/// Product-state (or basis-projector) ensemble for families that are
/// separable by construction; InputError otherwise.
Ensemble canonical_ensembles(const StateSpec& spec);

/// Pure state on layout ⊗ R (factor "R", side B, dimension rank(ρ)) whose
/// R-marginal complement is ρ. A rank-one input yields a trivial R of dim 1.
DensityOperator purify(const DensityOperator& rho);

/// Σ_k p_k ρ_k^⊗n on the copy layout (factors suffixed 1..n).
DensityOperator definetti_broadcast(const Ensemble& ens, int n);

/// Layout of n copies: every base factor repeated per copy with the copy
/// number appended to its label; copies are contiguous.
SubsystemLayout copies_layout(const SubsystemLayout& base, int n);

/// Ginibre-style random state G G† / Tr with G dim×rank complex Gaussian.
DensityOperator random_density(const SubsystemLayout& layout, int rank, std::uint64_t seed);
DensityOperator random_density(int dim, int rank, std::uint64_t seed);

/// Pure two-qubit state √λ²|00⟩ + √(1-λ²)|11⟩ given the squared Schmidt
/// coefficient.
DensityOperator schmidt_state(double lambda_sq);

DensityOperator bell_state();
DensityOperator werner_state(double p);

// ---------------------------------------------------------------------------
// Channels

/// A CPTP map in Kraus form acting on one subsystem (dim_in -> dim_out).
struct Channel {
  std::vector<Matrix> kraus;

  int dim_in() const { return static_cast<int>(kraus.front().cols()); }
  int dim_out() const { return static_cast<int>(kraus.front().rows()); }
  Matrix apply(const Matrix& rho) const;
  /// Throws InputError unless Σ K†K = I to 1e-9.
  void validate() const;
};

Channel depolarizing(int dim, double p);  // ρ ↦ (1-p)ρ + p·Tr(ρ) I/d
Channel identity_channel(int dim);

/// Applies `channel` to the factor at `position` (output dimension may differ).
DensityOperator apply_channel(const DensityOperator& rho, const Channel& channel, std::size_t position);

// ---------------------------------------------------------------------------
// Files

void save_state(const std::filesystem::path& path, const DensityOperator& rho);
DensityOperator load_state(const std::filesystem::path& path);
std::string state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const std::string& text);

}  // namespace bq
