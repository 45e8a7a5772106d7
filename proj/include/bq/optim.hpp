#pragma once

// Optimization engines shared by every solver: a multi-start, staged-penalty
// quasi-Newton minimizer with Armijo backtracking, a central-difference
// gradient checker, and Dykstra's alternating projections onto intersections
// of the convex sets that appear in the problems (PSD cone, PPT cone, unit
// trace, fixed marginals).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/qcore.hpp"

namespace bq {

struct OptimizerConfig {
  int max_iters = 400;  // per penalty stage
  int restarts = 8;
  std::uint64_t master_seed = 0;
  double step_init = 1.0;
  std::vector<double> penalty_schedule{10.0, 100.0, 1000.0, 10000.0};
  double tol_objective = 1e-11;
  double tol_residual = 1e-9;
  int jobs = 1;            // concurrent restarts
  int lbfgs_memory = 12;

  /// Throws InputError when a field is out of range.
  void validate() const;
};

struct OptimResult {
  double value = 0.0;  // objective (without penalties) at argmin
  RealVector argmin;
  std::map<std::string, double> residuals;  // per declared constraint
  bool converged = false;
  bool aborted = false;  // NaN encountered; result is the last finite point
  int iterations_used = 0;
  int restart_index = 0;
  double penalized_value = 0.0;  // objective + final-stage penalties
  std::vector<double> trace;     // best objective per iteration, all stages
  std::vector<std::size_t> stage_starts;  // index into trace where each stage begins
  std::vector<std::map<std::string, double>> stage_residuals;
};

struct MultiStartResult {
  OptimResult best;
  std::vector<OptimResult> runs;  // one per restart, in restart order
};

enum class Direction { upper, lower, exact };
std::string to_string(Direction d);

/// A computed number together with what it certifies about the true quantity.
/// `upper` means value >= truth (a feasible-point minimization); `lower`
/// means value <= truth; both up to the recorded residuals.
struct BoundedValue {
  double value = 0.0;
  Direction direction = Direction::exact;
  std::string method;
  std::map<std::string, double> residuals;
  bool converged = true;
  bool flagged = false;  // solver trouble; value is still the best found
  int iterations_used = 0;
  int restart_index = 0;
  std::vector<std::string> notes;
};

/// f(x); writes ∇f into *grad when grad is non-null.
using ObjectiveFn = std::function<double(const RealVector& x, RealVector* grad)>;

/// A soft constraint: `fn` returns the squared residual norm (>= 0).
struct Penalty {
  std::string name;
  ObjectiveFn fn;
};

/// Draws an initial point for restart `index` from `rng`.
using InitFn = std::function<RealVector(std::uint64_t seed, int index)>;

/// Minimizes objective + w·Σ penalties for each w in cfg.penalty_schedule,
/// warm-starting each stage from the previous one. Restart i starts from
/// initial_points[i] when present, otherwise from init(master_seed + i, i)
/// (standard normal if `init` is empty). The best run (lowest final-stage
/// penalized value, ties to the lower index) is reported.
MultiStartResult minimize_penalized(const ObjectiveFn& objective, const std::vector<Penalty>& penalties,
                                    int param_dim, const OptimizerConfig& cfg,
                                    const std::vector<RealVector>& initial_points = {},
                                    const InitFn& init = {});

/// Max-norm relative discrepancy between the analytic gradient and central
/// differences with step h, over all coordinates or (if more than
/// `max_coords`) a seeded random subsample of them.
double finite_diff_check(const ObjectiveFn& fn, const RealVector& point, double h,
                         int max_coords = 64, std::uint64_t seed = 0);

/// Central-difference gradient of fn at x.
RealVector numerical_gradient(const ObjectiveFn& fn, const RealVector& x, double h);

// ---------------------------------------------------------------------------
// Convex sets and Dykstra projection

class ConvexSet {
 public:
  using Projector = std::function<Matrix(const Matrix&)>;

  ConvexSet(std::string name, Projector project, bool affine)
      : name_(std::move(name)), project_(std::move(project)), affine_(affine) {}

  const std::string& name() const noexcept { return name_; }
  bool affine() const noexcept { return affine_; }
  Matrix project(const Matrix& x) const { return project_(x); }
  double distance(const Matrix& x) const { return (x - project_(x)).norm(); }

  static ConvexSet psd();
  /// PSD after transposing the factors in `positions`.
  static ConvexSet ppt(Dims dims, Positions positions);
  static ConvexSet trace_one();
  /// Tr_{not group k}(X) = targets[k] for disjoint factor groups. The targets
  /// must share one trace, which the set then also fixes.
  static ConvexSet fixed_marginals(Dims dims, std::vector<Positions> groups, std::vector<Matrix> targets);

 private:
  std::string name_;
  Projector project_;
  bool affine_;
};

struct ProjectionResult {
  Matrix point;
  std::map<std::string, double> residuals;  // Frobenius distance to each set
  int sweeps = 0;
};

/// Dykstra's algorithm for the Frobenius-nearest point of the intersection.
/// The returned point is the iterate after projecting onto the last set, so
/// that set holds exactly. Throws SolverError with the final residuals if
/// every distance is not below tol within max_sweeps.
ProjectionResult dykstra_project(const Matrix& x, const std::vector<ConvexSet>& sets, double tol,
                                 int max_sweeps = 20000);

}  // namespace bq
