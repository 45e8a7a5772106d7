#pragma once

// Linear combinations of marginal entropies, with gradients. Every objective
// in the optimizers (mutual informations, conditional informations, ensemble
// averages) is one of these evaluated on an unnormalized PSD matrix.

#include <span>
#include <vector>

#include "bq/qcore.hpp"

namespace bq {

/// coeff · S(X_factors). An empty factor list is the trivial system.
struct EntropyTerm {
  double coeff = 1.0;
  Positions factors;
};

struct EntropicEval {
  double value = 0.0;
  Matrix gradient;  // Hermitian W with d(value) = Re Tr[W dX]
};

/// For unnormalized PSD X with p = Tr X evaluates
///   Σ_t c_t · p · S(X_t / p)   (bits).
/// For p = 1 this is the plain entropy combination. Scaling by p makes the
/// ensemble average Σ_k p_k I(ρ_k) a sum of such terms over X_k = p_k ρ_k.
EntropicEval entropic_combination(const Matrix& x, std::span<const int> dims,
                                  std::span<const EntropyTerm> terms, bool with_gradient = true);

/// Terms for I(A:B) = S(A) + S(B) - S(AB) over the given factor groups.
std::vector<EntropyTerm> mutual_information_terms(const Positions& a, const Positions& b);

/// Gradient-side logarithm floor; eigenvalues below it are treated as equal
/// to it when forming log X.
inline constexpr double kLogFloor = 1e-30;

}  // namespace bq
