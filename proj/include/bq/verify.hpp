#pragma once

// Built-in verification suites used by `bq verify`:
//   thm1   growth classification of a cc state, Bell and a separable
//          non-classical mixture
//   thm2   monotonicity, convexity-style and subadditivity bounds on five
//          seeded instances
//   chain  bound ordering on a 20-state corpus

#include <cstdint>
#include <string>
#include <vector>

#include "bq/broadcast.hpp"
#include "bq/optim.hpp"

namespace bq {

struct SuiteCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  bool all_passed() const;
  int passed_count() const;
  /// One line per check plus a summary line.
  std::string table() const;
};

struct NamedState {
  std::string name;
  DensityOperator state;
};

/// Bell, cc, Werner 0.2/0.5/0.9 and 15 random full-rank two-qubit states
/// drawn from seeds seed..seed+14.
std::vector<NamedState> chain_corpus(std::uint64_t seed);

/// (ρ, σ, noise) triples for the property suite.
struct PropertyInstance {
  std::string name;
  DensityOperator rho;
  DensityOperator sigma;
  double noise = 0.2;
};
std::vector<PropertyInstance> property_instances(std::uint64_t seed);

SuiteReport verify_thm1(const OptimizerConfig& cfg, int max_dim = kDefaultMaxDim);
SuiteReport verify_thm2(const OptimizerConfig& cfg, double tol = 1e-3);
SuiteReport verify_chain(const OptimizerConfig& cfg, double tol = 2e-3);

/// "thm1", "thm2", "chain" or "all"; InputError otherwise.
SuiteReport verify_suite(const std::string& suite, const OptimizerConfig& cfg, int max_dim = kDefaultMaxDim);

}  // namespace bq
