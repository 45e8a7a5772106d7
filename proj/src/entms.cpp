#include "bq/entms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "bq/broadcast.hpp"
#include "bq/entropic.hpp"
#include "bq/param.hpp"

namespace bq {
namespace {

constexpr double kRankTol = 1e-11;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// ψ = Σ √λ_i |v_i⟩|i⟩_R as the d×r matrix Ψ (ρ = ΨΨ†) and its left inverse.
struct Purification {
  Matrix psi;
  Matrix left_inverse;
  int rank = 1;
};

Purification purification(const DensityOperator& rho) {
  const Spectrum spec = hermitian_eig(rho.matrix());
  Purification p;
  p.rank = 0;
  while (p.rank < static_cast<int>(spec.eigenvalues.size()) && spec.eigenvalues(p.rank) > kRankTol) ++p.rank;
  p.rank = std::max(p.rank, 1);
  const Matrix v = spec.eigenvectors.leftCols(p.rank);
  RealVector lam = spec.eigenvalues.head(p.rank).cwiseMax(kRankTol);
  lam /= lam.sum();
  p.psi = v * lam.cwiseSqrt().cast<cplx>().asDiagonal();
  p.left_inverse = lam.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * v.adjoint();
  return p;
}

Matrix hermitian(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------
// Classical squashed entanglement

EnsembleResult ecsq_upper(const DensityOperator& rho, int ensemble_size, const OptimizerConfig& cfg,
                          const std::vector<Ensemble>& warm_starts) {
  cfg.validate();
  if (ensemble_size < 0) throw InputError("ensemble_size", "must be non-negative");
  const Purification pur = purification(rho);
  const int r = pur.rank;
  const int k_size = ensemble_size > 0 ? ensemble_size : r * r;
  const Dims dims = rho.layout().dims();
  const std::vector<EntropyTerm> terms =
      mutual_information_terms(rho.layout().side_positions(Side::A), rho.layout().side_positions(Side::B));
  const PovmParam param(r, k_size);

  // X_k = Ψ E_kᵀ Ψ† sums to ρ for any POVM {E_k} on R.
  const auto pieces = [&](const Povm& povm) {
    std::vector<Matrix> xs;
    for (const auto& e : povm.effects) xs.push_back(hermitian(pur.psi * e.transpose() * pur.psi.adjoint()));
    return xs;
  };
  const ObjectiveFn objective = [&](const RealVector& x, RealVector* grad) {
    const Povm povm = param.povm(x);
    const std::vector<Matrix> xs = pieces(povm);
    double value = 0.0;
    std::vector<Matrix> ys;
    for (const auto& xk : xs) {
      const EntropicEval ev = entropic_combination(xk, dims, terms, grad != nullptr);
      value += 0.5 * ev.value;
      if (grad) ys.push_back(hermitian(Matrix((pur.psi.adjoint() * (0.5 * ev.gradient) * pur.psi).conjugate())));
    }
    if (grad) *grad = param.pullback(x, ys);
    return value;
  };

  const auto to_ensemble = [&](const Povm& povm) {
    Matrix total = Matrix::Zero(r, r);
    for (const auto& e : povm.effects) total += e;
    const Matrix fix = apply_function(hermitian_eig(hermitian(total), 1e-6),
                                      [](double s) { return 1.0 / std::sqrt(std::max(s, 1e-300)); });
    Povm exact;
    for (const auto& e : povm.effects) exact.effects.push_back(hermitian(fix * e * fix));
    std::vector<double> probs;
    std::vector<DensityOperator> members;
    for (const auto& xk : pieces(exact)) {
      const double p = xk.trace().real();
      if (p <= 1e-14) continue;
      probs.push_back(p);
      members.emplace_back(rho.layout(), xk / p);
    }
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double& p : probs) p /= sum;
    return Ensemble(probs, members);
  };

  EnsembleResult best{.bound = {}, .ensemble = Ensemble({1.0}, {rho}), .average_residual = 0.0};
  double best_value = 0.5 * mutual_information(rho);
  std::string origin = "trivial ensemble";
  bool converged = true;
  int iterations = 0, restart = 0;

  std::vector<RealVector> initial;
  for (std::size_t i = 0; i < warm_starts.size(); ++i) {
    const Ensemble& ens = warm_starts[i];
    if (ens.layout() != rho.layout()) throw InputError("warm_starts", "ensemble layout differs from the state");
    if ((ens.average().matrix() - rho.matrix()).cwiseAbs().maxCoeff() > 1e-8)
      throw InputError("warm_starts", "ensemble " + std::to_string(i) + " does not average to the state");
    const double v = 0.5 * ens.average_mutual_information();
    if (v < best_value) {
      best_value = v;
      best.ensemble = ens;
      origin = "warm start " + std::to_string(i);
    }
    if (static_cast<int>(ens.size()) <= k_size) {
      Povm povm;
      for (std::size_t k = 0; k < ens.size(); ++k)
        povm.effects.push_back(hermitian(
            Matrix((pur.left_inverse * (ens.probabilities()[k] * ens.members()[k].matrix()) *
                    pur.left_inverse.adjoint()).transpose())));
      initial.push_back(param.from_povm(povm));
    }
  }

  if (r > 1) {
    OptimizerConfig run_cfg = cfg;
    run_cfg.restarts = cfg.restarts + static_cast<int>(initial.size());
    const MultiStartResult ms = minimize_penalized(objective, {}, param.param_dim(), run_cfg, initial);
    for (const auto& run : ms.runs) {
      if (run.aborted) continue;
      const Ensemble ens = to_ensemble(param.povm(run.argmin));
      const double v = 0.5 * ens.average_mutual_information();
      if (v < best_value) {
        best_value = v;
        best.ensemble = ens;
        origin = "restart " + std::to_string(run.restart_index);
        converged = run.converged;
        iterations = run.iterations_used;
        restart = run.restart_index;
      }
    }
  }

  best.average_residual = (best.ensemble.average().matrix() - rho.matrix()).cwiseAbs().maxCoeff();
  BoundedValue& b = best.bound;
  b.value = std::max(0.0, best_value);  // rounding can leave -1e-16
  b.direction = Direction::upper;
  b.method = "ensemble via purification + POVM (K=" + std::to_string(k_size) + ")";
  b.residuals["ensemble_average"] = best.average_residual;
  b.converged = converged;
  b.iterations_used = iterations;
  b.restart_index = restart;
  b.notes.push_back("best candidate: " + origin);
  if (best.average_residual > 1e-8) {
    b.flagged = true;
    b.notes.push_back("ensemble average residual above 1e-8");
  }
  return best;
}

// ---------------------------------------------------------------------------
// Extensions

ExtensionSpec ExtensionSpec::squashed(int dim_e, int env_dim) {
  ExtensionSpec s{ExtensionKind::squashed, {dim_e}, env_dim};
  s.validate();
  return s;
}

ExtensionSpec ExtensionSpec::cemi(int dim_a, int dim_b, int env_dim) {
  ExtensionSpec s{ExtensionKind::cemi, {dim_a, dim_b}, env_dim};
  s.validate();
  return s;
}

void ExtensionSpec::validate() const {
  const std::size_t expected = kind == ExtensionKind::squashed ? 1 : 2;
  if (dims.size() != expected) throw InputError("dims", "wrong number of extension dimensions for this kind");
  for (int d : dims)
    if (d < 1) throw InputError("dims", "extension dimensions must be >= 1");
  if (channel_env_dim < 0) throw InputError("channel_env_dim", "must be non-negative");
}

int ExtensionSpec::extension_dim() const { return product(dims); }

namespace {

SubsystemLayout extension_layout(const SubsystemLayout& base, const ExtensionSpec& spec) {
  if (spec.kind == ExtensionKind::squashed)
    return base.concat(SubsystemLayout({{"E", spec.dims[0], Side::B}}));
  return base.concat(SubsystemLayout({{"A'", spec.dims[0], Side::A}, {"B'", spec.dims[1], Side::B}}));
}

/// ½[I(A:BE) − I(A:E)] = ½[S(AE) + S(BE) − S(ABE) − S(E)], or
/// ½[I(AA':BB') − I(A':B')] = ½[S(AA') + S(BB') − S(ABA'B') − S(A') − S(B') + S(A'B')].
std::vector<EntropyTerm> extension_terms(const SubsystemLayout& base, const ExtensionSpec& spec) {
  const Positions a = base.side_positions(Side::A);
  const Positions b = base.side_positions(Side::B);
  const std::size_t f = base.size();
  auto join = [](Positions x, const Positions& y) {
    x.insert(x.end(), y.begin(), y.end());
    std::sort(x.begin(), x.end());
    return x;
  };
  Positions all(f + spec.dims.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (spec.kind == ExtensionKind::squashed) {
    const Positions e{f};
    return {{0.5, join(a, e)}, {0.5, join(b, e)}, {-0.5, all}, {-0.5, e}};
  }
  const Positions ap{f}, bp{f + 1};
  return {{0.5, join(a, ap)}, {0.5, join(b, bp)}, {-0.5, all},
          {-0.5, ap},         {-0.5, bp},         {0.5, join(ap, bp)}};
}

ExtensionResult extension_upper(const DensityOperator& rho, const ExtensionSpec& spec, const OptimizerConfig& cfg,
                                const std::vector<DensityOperator>& warm_starts) {
  cfg.validate();
  spec.validate();
  const Purification pur = purification(rho);
  const int r = pur.rank;
  const int d = rho.dim();
  const int de = spec.extension_dim();
  const int df = spec.channel_env_dim > 0 ? spec.channel_env_dim : r * de;
  if (de * df < r) throw InputError("channel_env_dim", "isometry target smaller than the purifying system");
  const SubsystemLayout layout = extension_layout(rho.layout(), spec);
  const Dims dims = layout.dims();
  const std::vector<EntropyTerm> terms = extension_terms(rho.layout(), spec);
  const IsometryParam param(de * df, r);

  // Φ = Ψ Uᵀ is the purification on AB ⊗ (ext ⊗ F); regroup it to M with
  // rows (AB, ext) and columns F so that ρ_ext = M M†.
  const auto regroup = [&](const Matrix& phi) {
    Matrix m(d * de, df);
    for (int i = 0; i < d; ++i)
      for (int e = 0; e < de; ++e)
        for (int f = 0; f < df; ++f) m(i * de + e, f) = phi(i, e * df + f);
    return m;
  };
  const auto ungroup = [&](const Matrix& m) {
    Matrix phi(d, de * df);
    for (int i = 0; i < d; ++i)
      for (int e = 0; e < de; ++e)
        for (int f = 0; f < df; ++f) phi(i, e * df + f) = m(i * de + e, f);
    return phi;
  };
  const auto extension_of = [&](const Matrix& u) {
    const Matrix m = regroup(pur.psi * u.transpose());
    return hermitian(m * m.adjoint());
  };
  const ObjectiveFn objective = [&](const RealVector& x, RealVector* grad) {
    const Matrix u = param.isometry(x);
    const Matrix m = regroup(pur.psi * u.transpose());
    const Matrix ext = hermitian(m * m.adjoint());
    const EntropicEval ev = entropic_combination(ext, dims, terms, grad != nullptr);
    if (grad) {
      const Matrix gamma_phi = ungroup(2.0 * ev.gradient * m);
      *grad = param.pullback(x, Matrix((pur.psi.adjoint() * gamma_phi).transpose()));
    }
    return ev.value;
  };
  const auto value_of = [&](const Matrix& ext) { return entropic_combination(ext, dims, terms, false).value; };
  const auto ab_residual = [&](const Matrix& ext) {
    Positions keep(rho.layout().size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    return (partial_trace(ext, dims, keep) - rho.matrix()).norm();
  };

  // Trivial extension: R ↦ |0⟩_ext ⊗ R inside F.
  Matrix trivial = Matrix::Zero(de * df, r);
  for (int j = 0; j < r; ++j) trivial(j, j) = 1.0;
  Matrix best_ext = extension_of(trivial);
  double best_value = value_of(best_ext);
  std::string origin = "trivial extension";
  bool converged = true;
  int iterations = 0, restart = 0;

  std::vector<RealVector> initial{param.from_isometry(trivial)};
  for (std::size_t i = 0; i < warm_starts.size(); ++i) {
    const DensityOperator& w = warm_starts[i];
    if (w.layout().dims() != dims) throw InputError("warm_starts", "extension " + std::to_string(i) + " has wrong dimensions");
    const double res = ab_residual(w.matrix());
    if (res > 1e-8) throw InputError("warm_starts", "extension " + std::to_string(i) + " does not extend the state");
    const double v = value_of(w.matrix());
    if (v < best_value) {
      best_value = v;
      best_ext = w.matrix();
      origin = "warm start " + std::to_string(i);
    }
    // Purify the extension on F and read off the isometry from R.
    const Spectrum s = hermitian_eig(w.matrix());
    int rank = 0;
    while (rank < static_cast<int>(s.eigenvalues.size()) && s.eigenvalues(rank) > kRankTol) ++rank;
    if (rank > df) continue;
    Matrix m = Matrix::Zero(d * de, df);
    for (int k = 0; k < rank; ++k) m.col(k) = std::sqrt(s.eigenvalues(k)) * s.eigenvectors.col(k);
    const Matrix u = (pur.left_inverse * ungroup(m)).transpose();
    initial.push_back(param.from_isometry(u));
  }

  OptimizerConfig run_cfg = cfg;
  run_cfg.restarts = cfg.restarts + static_cast<int>(initial.size());
  const MultiStartResult ms = minimize_penalized(objective, {}, param.param_dim(), run_cfg, initial);
  for (const auto& run : ms.runs) {
    if (run.aborted) continue;
    const Matrix ext = extension_of(param.isometry(run.argmin));
    const double v = value_of(ext);
    if (v < best_value) {
      best_value = v;
      best_ext = ext;
      origin = "restart " + std::to_string(run.restart_index);
      converged = run.converged;
      iterations = run.iterations_used;
      restart = run.restart_index;
    }
  }

  ExtensionResult out{.bound = {}, .extension = DensityOperator(layout, best_ext), .marginal_residual = 0.0};
  out.marginal_residual = ab_residual(best_ext);
  BoundedValue& b = out.bound;
  b.value = std::max(0.0, best_value);  // rounding can leave -1e-16
  b.direction = Direction::upper;
  std::string dim_label;
  for (int x : spec.dims) dim_label += (dim_label.empty() ? "" : "x") + std::to_string(x);
  b.method = std::string(spec.kind == ExtensionKind::squashed ? "squashed" : "cemi") +
             " extension via Stinespring isometry (ext " + dim_label + ", env " + std::to_string(df) + ")";
  b.residuals["ab_marginal"] = out.marginal_residual;
  b.converged = converged;
  b.iterations_used = iterations;
  b.restart_index = restart;
  b.notes.push_back("best candidate: " + origin);
  if (out.marginal_residual > 1e-8) {
    b.flagged = true;
    b.notes.push_back("AB marginal residual above 1e-8");
  }
  return out;
}

}  // namespace

ExtensionResult esq_upper(const DensityOperator& rho, const ExtensionSpec& spec, const OptimizerConfig& cfg,
                          const std::vector<DensityOperator>& warm_starts) {
  if (spec.kind != ExtensionKind::squashed) throw InputError("spec", "squashed extension spec required");
  return extension_upper(rho, spec, cfg, warm_starts);
}

ExtensionResult cemi_upper(const DensityOperator& rho, const ExtensionSpec& spec, const OptimizerConfig& cfg,
                           const std::vector<DensityOperator>& warm_starts) {
  if (spec.kind != ExtensionKind::cemi) throw InputError("spec", "cemi extension spec required");
  return extension_upper(rho, spec, cfg, warm_starts);
}

DensityOperator flag_extension(const Ensemble& ens, ExtensionKind kind) {
  const int k = static_cast<int>(ens.size());
  const ExtensionSpec spec = kind == ExtensionKind::squashed ? ExtensionSpec::squashed(k) : ExtensionSpec::cemi(k, k);
  const SubsystemLayout layout = extension_layout(ens.layout(), spec);
  Matrix out = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (int i = 0; i < k; ++i) {
    Matrix flag = Matrix::Zero(k, k);
    flag(i, i) = 1.0;
    if (kind == ExtensionKind::cemi) flag = tensor(flag, flag);
    out += ens.probabilities()[i] * tensor(ens.members()[i].matrix(), flag);
  }
  return DensityOperator(layout, out);
}

// ---------------------------------------------------------------------------
// PPT-relaxed E_IC lower bound

EicResult eic_lower(const DensityOperator& rho, const Povm& m, const Povm& n, const OptimizerConfig& cfg) {
  cfg.validate();
  m.validate();
  n.validate();
  const DensityOperator ordered = to_a_then_b(rho);
  const int da = ordered.layout().side_dim(Side::A);
  const int db = ordered.layout().side_dim(Side::B);
  if (m.dim() != da || n.dim() != db) throw InputError("povm", "POVM dimensions do not match the state");
  const int d = da * db;
  const Dims dims{da, db};

  std::vector<Matrix> effects;
  std::vector<double> p;
  for (const auto& mi : m.effects)
    for (const auto& nj : n.effects) {
      effects.push_back(tensor(mi, nj));
      p.push_back(std::max(0.0, (effects.back() * ordered.matrix()).trace().real()));
    }
  const double p_total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= p_total;

  EicResult out;
  out.informationally_complete = gram_rank(m) == da * da && gram_rank(n) == db * db;

  const auto kl = [&](const Matrix& sigma) {
    double v = 0.0;
    for (std::size_t k = 0; k < effects.size(); ++k) {
      if (p[k] <= 0.0) continue;
      const double q = (effects[k] * sigma).trace().real();
      if (q <= 0.0) return std::numeric_limits<double>::infinity();
      v += p[k] * std::log2(p[k] / q);
    }
    return v;
  };
  const auto gradient = [&](const Matrix& sigma) {
    Matrix g = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < effects.size(); ++k) {
      if (p[k] <= 0.0) continue;
      const double q = (effects[k] * sigma).trace().real();
      g -= (kLog2e * p[k] / q) * effects[k];
    }
    return hermitian(g);
  };
  const std::vector<ConvexSet> sets{ConvexSet::psd(), ConvexSet::ppt(dims, {1}), ConvexSet::trace_one()};
  const double proj_tol = 1e-13;
  const auto project = [&](const Matrix& x) { return dykstra_project(x, sets, proj_tol, 200000).point; };

  Matrix sigma = Matrix::Identity(d, d) / static_cast<double>(d);
  double f = kl(sigma);
  double step = cfg.step_init;
  double mapping = std::numeric_limits<double>::infinity();
  out.trace.push_back(f);
  const int max_iters = cfg.max_iters * static_cast<int>(std::max<std::size_t>(1, cfg.penalty_schedule.size())) * 5;
  bool converged = false;
  int it = 0;
  for (; it < max_iters; ++it) {
    const Matrix g = gradient(sigma);
    Matrix next;
    double fn = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = project(sigma - step * g);
      fn = kl(next);
      const Matrix diff = next - sigma;
      const double model = f + (g.adjoint() * diff).trace().real() + diff.squaredNorm() / (2.0 * step);
      if (std::isfinite(fn) && fn <= model + 1e-15) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    mapping = (next - sigma).norm() / step;
    const double drop = f - fn;
    sigma = next;
    f = fn;
    out.trace.push_back(f);
    if (mapping < 1e-9 || (drop >= 0 && drop < 1e-16 && mapping < 1e-6)) {
      converged = true;
      ++it;
      break;
    }
    step = std::min(step * 2.0, 1e3);
  }
  // Gradient mapping at the final point with a unit step as convergence evidence.
  {
    const Matrix g = gradient(sigma);
    const double t = std::min(step, 1.0);
    mapping = (sigma - project(sigma - t * g)).norm() / t;
  }
  out.sigma = sigma;
  out.objective = f;
  out.gradient_mapping = mapping;
  BoundedValue& b = out.bound;
  b.value = std::max(0.0, f - 10.0 * mapping);
  b.direction = Direction::lower;
  b.method = "PPT relaxation, projected gradient + Dykstra";
  b.residuals["gradient_mapping"] = mapping;
  b.residuals["psd"] = std::max(0.0, -hermitian_eig(sigma, 1e-6).eigenvalues.minCoeff());
  b.residuals["ppt"] = std::max(0.0, -hermitian_eig(hermitian(partial_transpose(sigma, dims, Positions{1})), 1e-6)
                                          .eigenvalues.minCoeff());
  b.converged = converged;
  b.iterations_used = it;
  b.notes.push_back(da * db <= 6 ? "PPT set equals the separable set for this dimension"
                                 : "PPT set strictly contains the separable set; still a valid lower bound");
  if (!out.informationally_complete) {
    b.notes.push_back("POVMs are not informationally complete; zero does not imply separability");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain report

std::string to_string(Verdict v) { return v == Verdict::consistent ? "consistent" : "violation"; }

ChainReport chain_report(const DensityOperator& rho, const OptimizerConfig& cfg, const ChainOptions& options) {
  if (options.n_max < 1) throw InputError("n_max", "must be >= 1");
  ChainReport report;
  report.state = options.state_name;
  const int da = rho.layout().side_dim(Side::A);
  const int db = rho.layout().side_dim(Side::B);

  const EnsembleResult ecsq = ecsq_upper(rho, options.ensemble_size, cfg);
  BoundedValue twice = ecsq.bound;
  twice.value *= 2.0;
  report.entries["2ecsq"] = twice;
  report.ensemble_entropy = ecsq.ensemble.shannon_entropy();

  std::vector<double> est;
  DensityOperator prev(copies_layout(rho.layout(), 1), rho.matrix());
  const BroadcastOptions bopts{.max_dim = options.max_dim, .keep_candidates = false};
  for (int n = 1; n <= options.n_max; ++n) {
    BoundedValue v;
    if (n == 1) {
      v.value = mutual_information(rho);
      v.direction = Direction::upper;
      v.method = "single copy";
    } else {
      std::vector<DensityOperator> warm;
      warm.emplace_back(copies_layout(rho.layout(), n), tensor(prev.matrix(), rho.matrix()));
      warm.push_back(definetti_broadcast(ecsq.ensemble, n));
      const BroadcastResult r = broadcast_mi_upper(rho, n, cfg, warm, bopts);
      v = r.bound;
      prev = r.state.joint;
    }
    est.push_back(v.value);
    v.value /= n;
    report.entries["ib_" + std::to_string(n) + "/" + std::to_string(n)] = v;
  }

  // Flag extensions of the reporting ensemble are warm starts when their size fits.
  const int k_members = static_cast<int>(ecsq.ensemble.size());
  const ExtensionSpec cemi_spec = ExtensionSpec::cemi(da, db);
  const ExtensionSpec esq_spec = ExtensionSpec::squashed(rho.dim());
  std::vector<DensityOperator> cemi_warm, esq_warm;
  if (da == k_members && db == k_members) cemi_warm.push_back(flag_extension(ecsq.ensemble, ExtensionKind::cemi));
  if (rho.dim() == k_members) esq_warm.push_back(flag_extension(ecsq.ensemble, ExtensionKind::squashed));
  BoundedValue cemi = cemi_upper(rho, cemi_spec, cfg, cemi_warm).bound;
  cemi.value *= 2.0;
  report.entries["2cemi"] = cemi;
  BoundedValue esq = esq_upper(rho, esq_spec, cfg, esq_warm).bound;
  esq.value *= 2.0;
  report.entries["2esq"] = esq;

  const EicResult eic = eic_lower(rho, default_ic_povm(da), default_ic_povm(db), cfg);
  report.entries["eic"] = eic.bound;
  const double e = eic.bound.value;
  const double tol = options.tol;

  double per_copy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < est.size(); ++i) per_copy = std::min(per_copy, est[i] / static_cast<double>(i + 1));
  auto add = [&](std::string name, double lhs, double rhs) {
    report.checks.push_back({std::move(name), lhs, rhs, lhs <= rhs + tol});
  };
  add("eic <= min_n ib_n/n", e, per_copy);
  for (std::size_t i = 0; i < est.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    add("ib_" + std::to_string(n) + " <= 2n ecsq + S(p)", est[i], 2.0 * n * ecsq.bound.value + report.ensemble_entropy);
    add(std::to_string(n) + " eic <= ib_" + std::to_string(n), n * e, est[i]);
  }
  add("eic <= 2 ecsq", e, twice.value);

  for (const auto& c : report.checks)
    if (!c.holds) {
      report.verdict = Verdict::violation;
      report.notes.push_back("violated: " + c.name + " (" + fmt(c.lhs) + " > " + fmt(c.rhs) + ")");
    }
  for (const auto& [name, v] : report.entries)
    if (v.flagged) report.notes.push_back(name + " flagged by its solver");
  return report;
}

}  // namespace bq
