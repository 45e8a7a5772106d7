#include "bq/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <numeric>
#include <random>

namespace bq {

std::string to_string(Direction d) {
  switch (d) {
    case Direction::upper: return "upper";
    case Direction::lower: return "lower";
    case Direction::exact: return "exact";
  }
  return "exact";
}

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw InputError("max_iters", "must be positive");
  if (restarts < 1) throw InputError("restarts", "must be positive");
  if (!(step_init > 0)) throw InputError("step_init", "must be positive");
  if (!(tol_objective > 0)) throw InputError("tol_objective", "must be positive");
  if (!(tol_residual > 0)) throw InputError("tol_residual", "must be positive");
  if (jobs < 1) throw InputError("jobs", "must be positive");
  if (lbfgs_memory < 1) throw InputError("lbfgs_memory", "must be positive");
  if (penalty_schedule.empty()) throw InputError("penalty_schedule", "must be nonempty");
  for (std::size_t i = 0; i < penalty_schedule.size(); ++i) {
    if (!(penalty_schedule[i] > 0)) throw InputError("penalty_schedule", "weights must be positive");
    if (i > 0 && penalty_schedule[i] < penalty_schedule[i - 1])
      throw InputError("penalty_schedule", "weights must be non-decreasing");
  }
}

namespace {

struct StageEval {
  double objective = 0.0;
  double penalized = 0.0;
  RealVector grad;
};

class PenalizedProblem {
 public:
  PenalizedProblem(const ObjectiveFn& f, const std::vector<Penalty>& penalties, double weight)
      : f_(f), penalties_(penalties), weight_(weight) {}

  StageEval eval(const RealVector& x, bool with_grad) const {
    StageEval e;
    RealVector g;
    e.objective = f_(x, with_grad ? &e.grad : nullptr);
    e.penalized = e.objective;
    for (const auto& p : penalties_) {
      const double v = p.fn(x, with_grad ? &g : nullptr);
      e.penalized += weight_ * v;
      if (with_grad) e.grad += weight_ * g;
    }
    return e;
  }

  std::map<std::string, double> residuals(const RealVector& x) const {
    std::map<std::string, double> out;
    for (const auto& p : penalties_) out[p.name] = std::sqrt(std::max(0.0, p.fn(x, nullptr)));
    return out;
  }

 private:
  const ObjectiveFn& f_;
  const std::vector<Penalty>& penalties_;
  double weight_;
};

struct StageOutcome {
  bool converged = false;
  bool aborted = false;
  int iterations = 0;
};

// L-BFGS directions with Armijo backtracking. The accepted-objective trace is
// non-increasing by construction.
StageOutcome run_stage(const PenalizedProblem& prob, RealVector& x, const OptimizerConfig& cfg,
                       std::vector<double>& trace) {
  constexpr double kArmijo = 1e-4;
  StageOutcome out;
  StageEval cur = prob.eval(x, true);
  if (!std::isfinite(cur.penalized) || !cur.grad.allFinite()) {
    out.aborted = true;
    return out;
  }
  std::deque<std::pair<RealVector, RealVector>> memory;
  int small_steps = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    out.iterations = it + 1;
    if (cur.grad.lpNorm<Eigen::Infinity>() < 1e-13) {
      out.converged = true;
      break;
    }
    // two-loop recursion
    RealVector q = cur.grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    double step = 1.0;
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    } else {
      step = cfg.step_init / std::max(1.0, cur.grad.lpNorm<Eigen::Infinity>());
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    RealVector dir = -q;
    double slope = cur.grad.dot(dir);
    if (!(slope < 0)) {
      memory.clear();
      dir = -cur.grad;
      slope = cur.grad.dot(dir);
      step = cfg.step_init / std::max(1.0, cur.grad.lpNorm<Eigen::Infinity>());
    }

    StageEval next;
    RealVector xn;
    bool accepted = false;
    while (step > 1e-20) {
      xn = x + step * dir;
      next = prob.eval(xn, false);
      if (std::isnan(next.penalized)) {
        out.aborted = true;
        return out;
      }
      if (next.penalized <= cur.penalized + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      out.converged = true;  // no descent possible at working precision
      break;
    }
    next = prob.eval(xn, true);
    if (!std::isfinite(next.penalized) || !next.grad.allFinite()) {
      out.aborted = true;
      return out;
    }
    RealVector s = xn - x;
    RealVector y = next.grad - cur.grad;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(memory.size()) > cfg.lbfgs_memory) memory.pop_front();
    }
    const double drop = cur.penalized - next.penalized;
    x = std::move(xn);
    cur = std::move(next);
    trace.push_back(cur.penalized);
    if (drop <= cfg.tol_objective * std::max(1.0, std::abs(cur.penalized))) {
      if (++small_steps >= 3) {
        out.converged = true;
        break;
      }
    } else {
      small_steps = 0;
    }
  }
  return out;
}

OptimResult run_restart(const ObjectiveFn& objective, const std::vector<Penalty>& penalties,
                        RealVector x, const OptimizerConfig& cfg, int index) {
  OptimResult r;
  r.restart_index = index;
  bool converged = true;
  RealVector last_good = x;
  const std::vector<double> single{1.0};
  const auto& schedule = penalties.empty() ? single : cfg.penalty_schedule;
  double weight = schedule.back();
  for (double w : schedule) {
    weight = w;
    PenalizedProblem prob(objective, penalties, w);
    r.stage_starts.push_back(r.trace.size());
    const StageOutcome so = run_stage(prob, x, cfg, r.trace);
    r.iterations_used += so.iterations;
    if (so.aborted) {
      r.aborted = true;
      x = last_good;
      break;
    }
    last_good = x;
    converged = converged && so.converged;
    r.stage_residuals.push_back(prob.residuals(x));
  }
  PenalizedProblem final_prob(objective, penalties, weight);
  const StageEval e = final_prob.eval(x, false);
  r.value = e.objective;
  r.penalized_value = r.aborted ? std::numeric_limits<double>::infinity() : e.penalized;
  r.residuals = final_prob.residuals(x);
  r.argmin = std::move(x);
  r.converged = converged && !r.aborted;
  return r;
}

}  // namespace

MultiStartResult minimize_penalized(const ObjectiveFn& objective, const std::vector<Penalty>& penalties,
                                    int param_dim, const OptimizerConfig& cfg,
                                    const std::vector<RealVector>& initial_points, const InitFn& init) {
  cfg.validate();
  const int total = std::max<int>(cfg.restarts, static_cast<int>(initial_points.size()));
  std::vector<RealVector> starts(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    if (i < static_cast<int>(initial_points.size())) {
      if (initial_points[i].size() != param_dim) throw InputError("initial_points", "wrong dimension");
      starts[i] = initial_points[i];
    } else if (init) {
      starts[i] = init(cfg.master_seed + static_cast<std::uint64_t>(i), i);
    } else {
      std::mt19937_64 rng(cfg.master_seed + static_cast<std::uint64_t>(i));
      std::normal_distribution<double> normal;
      starts[i] = RealVector(param_dim);
      for (int k = 0; k < param_dim; ++k) starts[i](k) = normal(rng);
    }
  }

  MultiStartResult out;
  out.runs.resize(static_cast<std::size_t>(total));
  const int jobs = std::max(1, cfg.jobs);
  for (int begin = 0; begin < total; begin += jobs) {
    const int end = std::min(total, begin + jobs);
    if (jobs == 1) {
      out.runs[begin] = run_restart(objective, penalties, starts[begin], cfg, begin);
      continue;
    }
    std::vector<std::future<OptimResult>> futures;
    for (int i = begin; i < end; ++i)
      futures.push_back(std::async(std::launch::async, run_restart, std::cref(objective),
                                   std::cref(penalties), starts[i], std::cref(cfg), i));
    for (int i = begin; i < end; ++i) out.runs[i] = futures[i - begin].get();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.runs.size(); ++i)
    if (out.runs[i].penalized_value < out.runs[best].penalized_value) best = i;
  out.best = out.runs[best];
  return out;
}

RealVector numerical_gradient(const ObjectiveFn& fn, const RealVector& x, double h) {
  RealVector g(x.size());
  RealVector y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y(i) = x(i) + h;
    const double fp = fn(y, nullptr);
    y(i) = x(i) - h;
    const double fm = fn(y, nullptr);
    y(i) = x(i);
    g(i) = (fp - fm) / (2 * h);
  }
  return g;
}

double finite_diff_check(const ObjectiveFn& fn, const RealVector& point, double h, int max_coords,
                         std::uint64_t seed) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw InputError("h", "finite-difference step outside [1e-7, 1e-3]");
  RealVector grad;
  fn(point, &grad);
  std::vector<Eigen::Index> coords(static_cast<std::size_t>(point.size()));
  std::iota(coords.begin(), coords.end(), 0);
  if (static_cast<int>(coords.size()) > max_coords) {
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<std::size_t>(max_coords));
  }
  RealVector y = point;
  double max_err = 0.0, max_fd = 0.0;
  for (Eigen::Index i : coords) {
    y(i) = point(i) + h;
    const double fp = fn(y, nullptr);
    y(i) = point(i) - h;
    const double fm = fn(y, nullptr);
    y(i) = point(i);
    const double fd = (fp - fm) / (2 * h);
    max_err = std::max(max_err, std::abs(fd - grad(i)));
    max_fd = std::max({max_fd, std::abs(fd), std::abs(grad(i))});
  }
  return max_err / std::max(max_fd, 1e-12);
}

// ---------------------------------------------------------------------------
// Convex sets

namespace {

Matrix hermitian_part(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

Matrix clip_psd(const Matrix& x) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x));
  const RealVector l = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * l.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ConvexSet ConvexSet::psd() { return ConvexSet("psd", clip_psd, false); }

ConvexSet ConvexSet::ppt(Dims dims, Positions positions) {
  auto table = std::make_shared<TransposeTable>(partial_transpose_table(dims, positions));
  auto apply = [table](const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    Matrix out(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        const std::size_t flat = static_cast<std::size_t>(r) * n + c;
        out(table->row[flat], table->col[flat]) = m(r, c);
      }
    return out;
  };
  return ConvexSet("ppt", [apply](const Matrix& x) { return apply(clip_psd(apply(hermitian_part(x)))); },
                   false);
}

ConvexSet ConvexSet::trace_one() {
  return ConvexSet(
      "trace_one",
      [](const Matrix& x) {
        Matrix y = hermitian_part(x);
        const double shift = (y.trace().real() - 1.0) / static_cast<double>(y.rows());
        y.diagonal().array() -= shift;
        return y;
      },
      true);
}

ConvexSet ConvexSet::fixed_marginals(Dims dims, std::vector<Positions> groups, std::vector<Matrix> targets) {
  if (groups.size() != targets.size()) throw InputError("targets", "one target per group required");
  if (groups.empty()) throw InputError("groups", "at least one group required");
  std::vector<bool> used(dims.size(), false);
  std::vector<int> group_dims;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    int d = 1;
    for (std::size_t p : groups[k]) {
      if (p >= dims.size() || used[p]) throw InputError("groups", "groups must be disjoint factor sets");
      used[p] = true;
      d *= dims[p];
    }
    if (targets[k].rows() != d || targets[k].cols() != d)
      throw InputError("targets", "target " + std::to_string(k) + " has wrong dimension");
    group_dims.push_back(d);
  }
  const double target_trace = targets[0].trace().real();
  for (const auto& t : targets)
    if (std::abs(t.trace().real() - target_trace) > 1e-9)
      throw InputError("targets", "marginal targets must share one trace");
  const int n = product(dims);
  auto project = [dims, groups, targets, group_dims, target_trace, n](const Matrix& x) {
    Matrix y = hermitian_part(x);
    const double excess = y.trace().real() - target_trace;
    Matrix correction = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < groups.size(); ++k) {
      Matrix dev = partial_trace(y, dims, groups[k]) - targets[k];
      dev.diagonal().array() -= excess / group_dims[k];  // traceless part
      correction += embed(dev, dims, groups[k]) * (static_cast<double>(group_dims[k]) / n);
    }
    y -= correction;
    y.diagonal().array() -= excess / n;
    return y;
  };
  return ConvexSet("fixed_marginals", project, true);
}

ProjectionResult dykstra_project(const Matrix& x0, const std::vector<ConvexSet>& sets, double tol,
                                 int max_sweeps) {
  if (sets.empty()) throw InputError("sets", "no sets given");
  const Eigen::Index n = x0.rows();
  Matrix x = hermitian_part(x0);
  std::vector<Matrix> increments(sets.size(), Matrix::Zero(n, n));
  ProjectionResult out;
  auto measure = [&](const Matrix& point) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const double d = i + 1 == sets.size() ? 0.0 : sets[i].distance(point);
      out.residuals[sets[i].name()] = d;
      worst = std::max(worst, d);
    }
    return worst;
  };
  if (measure(sets.back().project(x)) < tol && sets.back().distance(x) < tol) {
    out.point = sets.back().project(x);
    return out;
  }
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Matrix before = x;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].affine()) {
        x = sets[i].project(x);  // increments vanish for affine sets
      } else {
        const Matrix y = x + increments[i];
        x = sets[i].project(y);
        increments[i] = y - x;
      }
    }
    out.sweeps = sweep;
    // A feasible iterate is not yet the nearest point while the increments
    // still move it, so stationarity is required as well.
    const bool check = sweep <= 20 || sweep % 5 == 0;
    if (check && (x - before).norm() < tol && measure(x) < tol) {
      out.point = x;
      return out;
    }
  }
  measure(x);
  std::string detail;
  for (const auto& [name, r] : out.residuals) detail += " " + name + "=" + std::to_string(r);
  throw SolverError("dykstra", "no convergence after " + std::to_string(max_sweeps) + " sweeps;" + detail);
}

}  // namespace bq
