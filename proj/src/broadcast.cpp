#include "bq/broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "bq/entms.hpp"
#include "bq/entropic.hpp"
#include "bq/measures.hpp"

namespace bq {
namespace {

constexpr double kRankTol = 1e-11;

long long joint_dim(const DensityOperator& rho, int n) {
  long long d = 1;
  for (int k = 0; k < n; ++k) {
    d *= rho.dim();
    if (d > (1LL << 40)) break;
  }
  return d;
}

void check_cap(const DensityOperator& rho, int n, int max_dim) {
  if (n < 1) throw InputError("n", "copy count must be >= 1");
  const long long d = joint_dim(rho, n);
  if (d > max_dim)
    throw CapError("max_dim", "joint dimension " + std::to_string(d) + " exceeds cap " + std::to_string(max_dim));
}

Matrix kron_power(const Matrix& m, int n) {
  Matrix out = m;
  for (int k = 1; k < n; ++k) out = tensor(out, m);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double min_eigenvalue(const Matrix& m) { return hermitian_eig(m, 1e-6).eigenvalues.minCoeff(); }

}  // namespace

double marginal_residual(const DensityOperator& joint, const DensityOperator& base, int k) {
  const std::size_t f = base.layout().size();
  if (f == 0 || joint.layout().size() % f != 0)
    throw InputError("layout", "joint layout is not a whole number of copies of the base layout");
  const int n = static_cast<int>(joint.layout().size() / f);
  if (k < 0 || k >= n) throw InputError("k", "copy index out of range");
  if (joint.layout() != copies_layout(base.layout(), n))
    throw InputError("layout", "joint layout does not match copies of the base layout");
  Positions keep(f);
  std::iota(keep.begin(), keep.end(), static_cast<std::size_t>(k) * f);
  const Dims dims = joint.layout().dims();
  return (partial_trace(joint.matrix(), dims, keep) - base.matrix()).norm();
}

// ---------------------------------------------------------------------------
// BroadcastProblem

BroadcastProblem::BroadcastProblem(const DensityOperator& rho, int n, bool symmetric, int max_dim)
    : rho_(rho), n_(n), symmetric_(symmetric), param_(1) {
  check_cap(rho, n, max_dim);
  const Spectrum spec = hermitian_eig(rho.matrix());
  rank_ = 0;
  while (rank_ < static_cast<int>(spec.eigenvalues.size()) && spec.eigenvalues(rank_) > kRankTol) ++rank_;
  rank_ = std::max(rank_, 1);
  if (rank_ < rho.dim()) {
    support_ = spec.eigenvectors.leftCols(rank_);
    RealVector lam = spec.eigenvalues.head(rank_).cwiseMax(0.0);
    lam /= lam.sum();
    lambda_ = lam.cast<cplx>().asDiagonal();
  } else {
    // Full rank: reduced coordinates are the original ones.
    support_ = Matrix::Identity(rho.dim(), rho.dim());
    lambda_ = rho.matrix();
  }
  reduced_dims_.assign(static_cast<std::size_t>(n), rank_);
  reduced_dim_ = product(reduced_dims_);
  if (rank_ < rho.dim()) lift_ = kron_power(support_, n);
  const SubsystemLayout layout = copies_layout(rho.layout(), n);
  full_dims_ = layout.dims();
  a_positions_ = layout.side_positions(Side::A);
  b_positions_ = layout.side_positions(Side::B);
  param_ = DensityParam(reduced_dim_);
  if (symmetric_) {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      copy_permutations_.push_back(permutation_table(reduced_dims_, order));
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

Matrix BroadcastProblem::twirl(const Matrix& tau) const {
  if (copy_permutations_.size() <= 1) return tau;
  const Eigen::Index d = tau.rows();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& map : copy_permutations_)
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r) out(map[r], map[c]) += tau(r, c);
  return out / static_cast<double>(copy_permutations_.size());
}

Matrix BroadcastProblem::reduced_state(const RealVector& x) const {
  Matrix tau = param_.state(x);
  return symmetric_ ? twirl(tau) : tau;
}

Matrix BroadcastProblem::lift(const Matrix& tau) const {
  if (lift_.size() == 0) return tau;
  return lift_ * tau * lift_.adjoint();
}

Matrix BroadcastProblem::reduce(const Matrix& sigma, double* leakage) const {
  Matrix tau = lift_.size() == 0 ? sigma : Matrix(lift_.adjoint() * sigma * lift_);
  tau = ((tau + tau.adjoint()) * 0.5).eval();
  if (leakage) *leakage = std::abs(sigma.trace().real() - tau.trace().real());
  return tau;
}

Matrix BroadcastProblem::product_point() const { return kron_power(lambda_, n_); }

double BroadcastProblem::mutual_information_reduced(const Matrix& tau) const {
  const Matrix sigma = lift(tau);
  const std::vector<EntropyTerm> marg{{1.0, a_positions_}, {1.0, b_positions_}};
  const std::vector<EntropyTerm> whole{{-1.0, Positions{0}}};
  const Dims rd{reduced_dim_};
  return entropic_combination(sigma, full_dims_, marg, false).value +
         entropic_combination(tau, rd, whole, false).value;
}

ObjectiveFn BroadcastProblem::objective() const {
  return [this](const RealVector& x, RealVector* grad) {
    const Matrix tau = reduced_state(x);
    const Matrix sigma = lift(tau);
    const std::vector<EntropyTerm> marg{{1.0, a_positions_}, {1.0, b_positions_}};
    const std::vector<EntropyTerm> whole{{-1.0, Positions{0}}};
    const Dims rd{reduced_dim_};
    const EntropicEval e1 = entropic_combination(sigma, full_dims_, marg, grad != nullptr);
    const EntropicEval e2 = entropic_combination(tau, rd, whole, grad != nullptr);
    if (grad) {
      Matrix g = lift_.size() == 0 ? e1.gradient : Matrix(lift_.adjoint() * e1.gradient * lift_);
      g += e2.gradient;
      if (symmetric_) g = twirl(g);
      *grad = param_.pullback(x, g);
    }
    return e1.value + e2.value;
  };
}

ObjectiveFn BroadcastProblem::marginal_penalty() const {
  return [this](const RealVector& x, RealVector* grad) {
    const Matrix tau = reduced_state(x);
    double value = 0.0;
    Matrix g;
    if (grad) g = Matrix::Zero(reduced_dim_, reduced_dim_);
    for (int k = 0; k < n_; ++k) {
      const Positions keep{static_cast<std::size_t>(k)};
      const Matrix dev = partial_trace(tau, reduced_dims_, keep) - lambda_;
      value += dev.squaredNorm();
      if (grad) g += 2.0 * embed(dev, reduced_dims_, keep);
    }
    if (grad) {
      if (symmetric_) g = twirl(g);
      *grad = param_.pullback(x, g);
    }
    return value;
  };
}

ProjectionResult BroadcastProblem::project(const Matrix& tau, double tol) const {
  std::vector<Positions> groups;
  std::vector<Matrix> targets;
  for (int k = 0; k < n_; ++k) {
    groups.push_back({static_cast<std::size_t>(k)});
    targets.push_back(lambda_);
  }
  const std::vector<ConvexSet> sets{ConvexSet::psd(), ConvexSet::trace_one(),
                                    ConvexSet::fixed_marginals(reduced_dims_, groups, targets)};
  return dykstra_project(tau, sets, tol);
}

// ---------------------------------------------------------------------------
// Solvers

namespace {

struct Candidate {
  Matrix tau;
  std::string origin;
  bool converged = true;
  int iterations = 0;
  int restart = 0;
};

BroadcastResult solve(const DensityOperator& rho, int n, const OptimizerConfig& cfg,
                      const std::vector<DensityOperator>& warm_starts, const BroadcastOptions& options,
                      bool symmetric) {
  cfg.validate();
  const BroadcastProblem problem(rho, n, symmetric, options.max_dim);
  const SubsystemLayout layout = problem.joint_layout();
  const double single = mutual_information(rho);

  std::vector<Candidate> candidates;
  candidates.push_back({problem.product_point(), "product state", true, 0, 0});
  std::vector<RealVector> initial;
  for (std::size_t i = 0; i < warm_starts.size(); ++i) {
    if (warm_starts[i].layout() != layout)
      throw InputError("warm_starts", "warm start " + std::to_string(i) + " has the wrong layout");
    double leak = 0.0;
    Matrix tau = problem.reduce(warm_starts[i].matrix(), &leak);
    if (symmetric) tau = problem.twirl(tau);
    tau /= tau.trace().real();
    candidates.push_back({tau, "warm start " + std::to_string(i), true, 0, 0});
    initial.push_back(problem.params_for(tau));
  }

  if (problem.reduced_dim() > 1) {
    OptimizerConfig run_cfg = cfg;
    run_cfg.restarts = cfg.restarts + static_cast<int>(initial.size());
    const std::vector<Penalty> penalties{{"marginals", problem.marginal_penalty()}};
    const MultiStartResult ms =
        minimize_penalized(problem.objective(), penalties, problem.param_dim(), run_cfg, initial);
    for (const auto& run : ms.runs)
      candidates.push_back({problem.reduced_state(run.argmin), "restart " + std::to_string(run.restart_index),
                            run.converged, run.iterations_used, run.restart_index});
  }

  const double tol = 0.1 * cfg.tol_residual;
  BroadcastResult out{.bound = {},
                      .state = {n, rho, DensityOperator(layout, kron_power(rho.matrix(), n)), {}},
                      .pre_projection_value = 0.0,
                      .feasible_candidates = {}};
  double best = std::numeric_limits<double>::infinity();
  const Candidate* winner = nullptr;
  Matrix best_tau;
  std::vector<std::string> failures;
  for (const auto& cand : candidates) {
    Matrix tau;
    try {
      tau = problem.project(cand.tau, tol).point;
    } catch (const SolverError& e) {
      failures.push_back(cand.origin + ": " + e.what());
      continue;
    }
    if (symmetric) tau = problem.twirl(tau);
    const double value = problem.mutual_information_reduced(tau);
    if (options.keep_candidates) out.feasible_candidates.emplace_back(layout, problem.lift(tau));
    if (value < best) {
      best = value;
      winner = &cand;
      best_tau = tau;
    }
  }
  if (!winner) {
    std::string detail = "no candidate could be projected onto the broadcast set";
    for (const auto& f : failures) detail += "; " + f;
    throw SolverError("projection", detail);
  }

  out.state.joint = DensityOperator(layout, problem.lift(best_tau));
  double residual = 0.0;
  for (int k = 0; k < n; ++k) {
    out.state.marginal_residuals.push_back(marginal_residual(out.state.joint, rho, k));
    residual = std::max(residual, out.state.marginal_residuals.back());
  }
  out.pre_projection_value = problem.mutual_information_reduced(winner->tau / winner->tau.trace().real());

  BoundedValue& b = out.bound;
  b.value = best;
  b.direction = Direction::upper;
  b.method = symmetric ? "symmetric broadcast: penalty L-BFGS + Dykstra" : "broadcast: penalty L-BFGS + Dykstra";
  b.residuals["marginal_max"] = residual;
  b.residuals["psd"] = std::max(0.0, -min_eigenvalue(best_tau));
  b.residuals["trace"] = std::abs(best_tau.trace().real() - 1.0);
  b.converged = winner->converged;
  b.iterations_used = winner->iterations;
  b.restart_index = winner->restart;
  b.notes.push_back("best candidate: " + winner->origin);
  if (problem.reduced_dim() == 1) b.notes.push_back("pure state: the product state is the only broadcast state");
  for (const auto& f : failures) b.notes.push_back("skipped " + f);
  if (best < single - 1e-6 || best > n * single + 1e-6) {
    b.flagged = true;
    b.notes.push_back("value outside [I(rho), n I(rho)]");
  }
  if (residual > cfg.tol_residual) {
    b.flagged = true;
    b.notes.push_back("marginal residual " + fmt(residual) + " above tolerance");
  }
  return out;
}

}  // namespace

BroadcastResult broadcast_mi_upper(const DensityOperator& rho, int n, const OptimizerConfig& cfg,
                                   const std::vector<DensityOperator>& warm_starts,
                                   const BroadcastOptions& options) {
  return solve(rho, n, cfg, warm_starts, options, false);
}

BroadcastResult broadcast_mi_symmetric(const DensityOperator& rho, int n, const OptimizerConfig& cfg,
                                       const std::vector<DensityOperator>& warm_starts,
                                       const BroadcastOptions& options) {
  return solve(rho, n, cfg, warm_starts, options, true);
}

DeFinettiBound definetti_upper(const DensityOperator& rho, const Ensemble& ens, int n) {
  if (ens.layout() != rho.layout()) throw InputError("ensemble", "ensemble layout differs from the state");
  const double mismatch = (ens.average().matrix() - rho.matrix()).cwiseAbs().maxCoeff();
  if (mismatch > 1e-8) throw InputError("ensemble", "ensemble average differs from the state by " + fmt(mismatch));
  DeFinettiBound out;
  out.mutual_information = mutual_information(definetti_broadcast(ens, n));
  out.analytic_cap = n * ens.average_mutual_information() + ens.shannon_entropy();
  return out;
}

// ---------------------------------------------------------------------------
// Growth curves

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::constant: return "constant";
    case GrowthClass::bounded: return "bounded";
    case GrowthClass::linear_certified: return "linear-certified";
    case GrowthClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

Ensemble spectral_ensemble(const DensityOperator& rho) {
  const Spectrum spec = hermitian_eig(rho.matrix());
  std::vector<double> probs;
  std::vector<DensityOperator> members;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues(i) <= kRankTol) continue;
    probs.push_back(spec.eigenvalues(i));
    members.push_back(DensityOperator::pure(rho.layout(), spec.eigenvectors.col(i)));
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return Ensemble(probs, members);
}

DensityOperator drop_last_copy(const DensityOperator& joint, std::size_t factors_per_copy) {
  const std::size_t keep_count = joint.layout().size() - factors_per_copy;
  Positions keep(keep_count);
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  const Dims dims = joint.layout().dims();
  return DensityOperator(joint.layout().subset(keep), partial_trace(joint.matrix(), dims, keep));
}

}  // namespace

GrowthCurve growth_curve(const DensityOperator& rho, int n_max, const OptimizerConfig& cfg,
                         const GrowthOptions& options) {
  if (n_max < 2) throw InputError("n_max", "growth curves need at least two copies");
  check_cap(rho, n_max, options.max_dim);
  cfg.validate();
  GrowthCurve curve;
  const double single = mutual_information(rho);

  std::vector<Ensemble> ensembles = options.ensembles;
  for (const auto& e : ensembles)
    if ((e.average().matrix() - rho.matrix()).cwiseAbs().maxCoeff() > 1e-8)
      throw InputError("ensembles", "ensemble average differs from the state");
  ensembles.push_back(spectral_ensemble(rho));
  ensembles.push_back(ecsq_upper(rho, options.ensemble_size, cfg).ensemble);

  // The reference ensemble has the smallest per-copy slope Σ p_k I(ρ_k).
  const Ensemble* reference = &ensembles.front();
  for (const auto& e : ensembles)
    if (e.average_mutual_information() < reference->average_mutual_information()) reference = &e;
  const double slope = reference->average_mutual_information();
  curve.definetti_cap = n_max * slope + reference->shannon_entropy();

  std::vector<DensityOperator> joints;
  const BroadcastOptions bopts{.max_dim = options.max_dim, .keep_candidates = false};
  for (int n = 1; n <= n_max; ++n) {
    GrowthPoint pt;
    pt.n = n;
    if (n == 1) {
      pt.upper.value = single;
      pt.upper.direction = Direction::exact;
      pt.upper.method = "single copy";
      pt.upper.residuals["marginal_max"] = 0.0;
      joints.emplace_back(copies_layout(rho.layout(), 1), rho.matrix());
    } else {
      std::vector<DensityOperator> warm;
      warm.emplace_back(copies_layout(rho.layout(), n), tensor(joints.back().matrix(), rho.matrix()));
      for (const auto& e : ensembles) warm.push_back(definetti_broadcast(e, n));
      BroadcastResult r = broadcast_mi_upper(rho, n, cfg, warm, bopts);
      pt.upper = r.bound;
      pt.residual_max = r.bound.residuals["marginal_max"];
      joints.push_back(r.state.joint);
    }
    curve.per_n.push_back(pt);
  }

  // Discarding a copy is local, so est_{n+1} restricted to n copies bounds est_n.
  const std::size_t f = rho.layout().size();
  for (int n = n_max - 1; n >= 2; --n) {
    DensityOperator reduced = drop_last_copy(joints[n], f);
    const double v = mutual_information(reduced);
    GrowthPoint& pt = curve.per_n[n - 1];
    if (v < pt.upper.value) {
      pt.upper.notes.push_back("improved by discarding a copy of the n=" + std::to_string(n + 1) + " optimum");
      pt.upper.value = v;
      double residual = 0.0;
      for (int k = 0; k < n; ++k) residual = std::max(residual, marginal_residual(reduced, rho, k));
      pt.upper.residuals["marginal_max"] = residual;
      pt.residual_max = residual;
      joints[n - 1] = std::move(reduced);
    }
  }

  double cert = 0.0;
  if (options.certify) {
    const int da = rho.layout().side_dim(Side::A);
    const int db = rho.layout().side_dim(Side::B);
    const EicResult eic = eic_lower(rho, default_ic_povm(da), default_ic_povm(db), cfg);
    cert = eic.bound.value;
    curve.certificate = cert;
  }
  curve.best_per_copy_upper = std::numeric_limits<double>::infinity();
  for (auto& pt : curve.per_n) {
    const double by_cert = pt.n * cert;
    pt.lower.direction = Direction::lower;
    if (by_cert > single) {
      pt.lower.value = by_cert;
      pt.lower.method = "n x E_IC certificate";
    } else {
      pt.lower.value = single;
      pt.lower.method = "single-copy mutual information";
    }
    curve.best_per_copy_upper = std::min(curve.best_per_copy_upper, pt.upper.value / pt.n);
  }

  const double first = curve.per_n.front().upper.value;
  const double last = curve.per_n.back().upper.value;
  if (last - first < 5e-3) {
    curve.classification = GrowthClass::constant;
  } else if (cert > 1e-4) {
    curve.classification = GrowthClass::linear_certified;
    curve.notes.push_back("slope estimate " + fmt((last - first) / (n_max - 1)) + ", certified slope >= " + fmt(cert));
  } else if (slope < 1e-3 && last <= curve.definetti_cap + 5e-3) {
    curve.classification = GrowthClass::bounded;
  } else {
    curve.classification = GrowthClass::inconclusive;
  }
  curve.notes.push_back("reference ensemble: " + std::to_string(reference->size()) + " members, slope " + fmt(slope) +
                        ", entropy " + fmt(reference->shannon_entropy()));
  return curve;
}

std::string growth_curve_csv(const GrowthCurve& curve) {
  std::string out = "n,upper_bits,lower_bits,residual_max,classification\n";
  char buf[160];
  for (const auto& pt : curve.per_n) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.3g,%s\n", pt.n, pt.upper.value, pt.lower.value,
                  pt.residual_max, to_string(curve.classification).c_str());
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Property checks

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

namespace {

PropertyCheck finish(std::string name, double lhs, double rhs, double tol, std::string detail) {
  PropertyCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.tol = tol;
  c.passed = lhs <= rhs + tol;
  c.detail = std::move(detail);
  return c;
}

DensityOperator apply_local(const DensityOperator& rho, const Channel& a, const Channel& b) {
  DensityOperator out = rho;
  for (std::size_t i = 0; i < rho.layout().size(); ++i)
    out = apply_channel(out, rho.layout().factors()[i].side == Side::A ? a : b, i);
  return out;
}

}  // namespace

PropertyCheck check_monotonicity(const DensityOperator& rho, const Channel& channel_a, const Channel& channel_b,
                                 int n, const OptimizerConfig& cfg, double tol) {
  const BroadcastResult before = broadcast_mi_upper(rho, n, cfg);
  const DensityOperator image = apply_local(rho, channel_a, channel_b);
  const DensityOperator witness = apply_local(before.state.joint, channel_a, channel_b);
  const BroadcastResult after = broadcast_mi_upper(image, n, cfg, {witness});
  return finish("monotonicity", after.bound.value, before.bound.value, tol,
                "witness MI " + fmt(mutual_information(witness)));
}

PropertyCheck check_convexity(const std::vector<double>& weights, const std::vector<DensityOperator>& states, int n,
                              const OptimizerConfig& cfg, double tol) {
  if (weights.size() != states.size() || states.empty())
    throw InputError("weights", "one weight per state required");
  Matrix mix = Matrix::Zero(states[0].dim(), states[0].dim());
  Matrix witness;
  double rhs = shannon_entropy(weights);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].layout() != states[0].layout()) throw InputError("states", "states must share one layout");
    const BroadcastResult r = broadcast_mi_upper(states[i], n, cfg);
    mix += weights[i] * states[i].matrix();
    witness = i == 0 ? Matrix(weights[i] * r.state.joint.matrix()) : Matrix(witness + weights[i] * r.state.joint.matrix());
    rhs += weights[i] * r.bound.value;
  }
  const DensityOperator rho(states[0].layout(), mix);
  const DensityOperator w(copies_layout(rho.layout(), n), witness);
  const BroadcastResult r = broadcast_mi_upper(rho, n, cfg, {w});
  return finish("convexity", r.bound.value, rhs, tol, "witness MI " + fmt(mutual_information(w)));
}

DensityOperator tensor_states(const DensityOperator& rho, const DensityOperator& sigma) {
  return DensityOperator(rho.layout().concat(sigma.layout().suffixed("'")), tensor(rho.matrix(), sigma.matrix()));
}

PropertyCheck check_subadditivity(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                  const OptimizerConfig& cfg, double tol) {
  const BroadcastResult rr = broadcast_mi_upper(rho, n, cfg);
  const BroadcastResult rs = broadcast_mi_upper(sigma, n, cfg);
  const DensityOperator both = tensor_states(rho, sigma);
  const std::size_t fr = rho.layout().size();
  const std::size_t fs = sigma.layout().size();
  Dims dims = rr.state.joint.layout().dims();
  const Dims ds = rs.state.joint.layout().dims();
  dims.insert(dims.end(), ds.begin(), ds.end());
  Positions order;
  for (int k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < fr; ++j) order.push_back(k * fr + j);
    for (std::size_t j = 0; j < fs; ++j) order.push_back(n * fr + k * fs + j);
  }
  const Matrix joined = tensor(rr.state.joint.matrix(), rs.state.joint.matrix());
  const DensityOperator witness(copies_layout(both.layout(), n), permute_factors(joined, dims, order));
  const BroadcastResult r = broadcast_mi_upper(both, n, cfg, {witness});
  return finish("subadditivity", r.bound.value, rr.bound.value + rs.bound.value, tol,
                "witness MI " + fmt(mutual_information(witness)));
}

PropertyReport property_checks(const DensityOperator& rho, const DensityOperator& sigma, double p_noise, int n,
                               const OptimizerConfig& cfg, double tol) {
  PropertyReport report;
  const Channel ca = depolarizing(rho.layout().side_dim(Side::A), p_noise);
  const Channel cb = depolarizing(rho.layout().side_dim(Side::B), p_noise);
  report.checks.push_back(check_monotonicity(rho, ca, cb, n, cfg, tol));
  report.checks.push_back(check_convexity({0.5, 0.5}, {rho, sigma}, n, cfg, tol));
  report.checks.push_back(check_subadditivity(rho, sigma, n, cfg, tol));
  return report;
}

}  // namespace bq
