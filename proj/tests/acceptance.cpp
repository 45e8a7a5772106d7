// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "bq/broadcast.hpp"
#include "bq/entms.hpp"
#include "bq/report.hpp"
#include "bq/verify.hpp"
#include "support.hpp"

using namespace bq;
using bqtest::family;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

OptimizerConfig config() {
  OptimizerConfig cfg;  // 8 restarts
  cfg.master_seed = 1;
  return cfg;
}

Outcome closed_form() {
  const double tol = 1e-9;
  const double vals[][2] = {{mutual_information(bell_state()), 2.0},
                            {mutual_information(bqtest::basis_pure(2, 2, 0)), 0.0},
                            {mutual_information(family("cc")), 1.0},
                            {entropy_bits(Matrix::Identity(2, 2) * 0.5), 1.0},
                            {binary_entropy(0.5), 1.0},
                            {trace_distance(bqtest::basis_pure(2, 2, 0), bqtest::basis_pure(2, 2, 3)), 2.0}};
  double worst = 0.0;
  for (const auto& v : vals) worst = std::max(worst, std::abs(v[0] - v[1]));
  return {worst <= tol, "max error " + fmt("%.2e", worst)};
}

Outcome pure_rigidity() {
  BroadcastOptions opts;
  opts.keep_candidates = true;
  const BroadcastResult r = broadcast_mi_upper(bell_state(), 2, config(), {}, opts);
  const DensityOperator bb(copies_layout(bell_state().layout(), 2),
                           tensor(bell_state().matrix(), bell_state().matrix()));
  double worst = 0.0;
  for (const auto& c : r.feasible_candidates) worst = std::max(worst, trace_distance(c, bb));
  const bool ok = std::abs(r.bound.value - 4.0) <= 1e-3 && worst <= 1e-6 && !r.feasible_candidates.empty();
  return {ok, "est_2 " + fmt("%.9f", r.bound.value) + ", " + std::to_string(r.feasible_candidates.size()) +
                  " candidates, max trace distance " + fmt("%.2e", worst)};
}

Outcome cc_constant() {
  bool ok = true;
  std::string detail;
  for (int n : {2, 3}) {
    const double v = broadcast_mi_upper(family("cc"), n, config()).bound.value;
    ok = ok && v >= 1.0 - 1e-6 && v <= 1.0 + 1e-3;
    detail += "est_" + std::to_string(n) + " " + fmt("%.9f", v) + " ";
  }
  return {ok, detail};
}

Outcome separable_bounded() {
  const DensityOperator pm = family("product-mix");
  const double i = mutual_information(pm);
  const GrowthCurve curve = growth_curve(pm, 3, config());
  const double e2 = curve.per_n[1].upper.value, e3 = curve.per_n[2].upper.value;
  const bool ok = e2 - i > 0 && e2 <= 1.0 + 1e-3 && e3 <= 1.0 + 1e-3;
  return {ok, "I " + fmt("%.6f", i) + ", est_2 " + fmt("%.6f", e2) + ", est_3 " + fmt("%.6f", e3)};
}

Outcome bell_certificate() {
  const EicResult eic = eic_lower(bell_state(), default_ic_povm(2), default_ic_povm(2), config());
  GrowthOptions opts;
  opts.certify = false;
  const GrowthCurve curve = growth_curve(bell_state(), 3, config(), opts);
  bool ok = eic.bound.value > 1e-3;
  std::string detail = "eic " + fmt("%.9f", eic.bound.value);
  for (const auto& pt : curve.per_n) {
    ok = ok && pt.n * eic.bound.value <= pt.upper.value + 1e-3;
    detail += ", " + std::to_string(pt.n) + "*eic <= " + fmt("%.6f", pt.upper.value);
  }
  return {ok, detail};
}

Outcome ecsq_anchors() {
  const double bell = ecsq_upper(bell_state(), 0, config()).bound.value;
  const double sep = ecsq_upper(family("product-mix"), 0, config()).bound.value;
  const double schmidt = ecsq_upper(schmidt_state(0.8536), 0, config()).bound.value;
  const double h = binary_entropy(0.8536);
  const bool ok = std::abs(bell - 1.0) <= 1e-4 && sep <= 1e-3 && std::abs(schmidt - h) <= 1e-3;
  return {ok, "bell " + fmt("%.9f", bell) + ", product-mix " + fmt("%.2e", sep) + ", schmidt " +
                  fmt("%.6f", schmidt) + " vs h " + fmt("%.6f", h)};
}

Outcome chain_corpus_consistency() {
  const double tol = 2e-3;
  ChainOptions opts;
  opts.n_max = 2;
  opts.tol = tol;
  int consistent = 0, total = 0;
  double worst_a = -std::numeric_limits<double>::infinity(), worst_b = worst_a;
  for (const auto& s : chain_corpus(config().master_seed)) {
    opts.state_name = s.name;
    const ChainReport r = chain_report(s.state, config(), opts);
    ++total;
    double min_per_copy = std::numeric_limits<double>::infinity();
    bool ok = r.verdict == Verdict::consistent;
    for (int n = 1; n <= opts.n_max; ++n) {
      const double per_copy = r.entries.at("ib_" + std::to_string(n) + "/" + std::to_string(n)).value;
      min_per_copy = std::min(min_per_copy, per_copy);
      const double slack_b = n * per_copy - (n * r.entries.at("2ecsq").value + r.ensemble_entropy);
      worst_b = std::max(worst_b, slack_b);
      ok = ok && slack_b <= tol;
    }
    const double slack_a = r.entries.at("eic").value - min_per_copy;
    worst_a = std::max(worst_a, slack_a);
    ok = ok && slack_a <= tol;
    if (ok) ++consistent;
    else std::printf("    violation: %s\n", s.name.c_str());
  }
  return {consistent == total, std::to_string(consistent) + "/" + std::to_string(total) +
                                   " consistent, max slack (a) " + fmt("%.2e", worst_a) + ", (b) " +
                                   fmt("%.2e", worst_b)};
}

Outcome property_suite() {
  const SuiteReport r = verify_thm2(config(), 1e-3);
  for (const auto& c : r.checks)
    if (!c.passed) std::printf("    failed: %s  %s\n", c.name.c_str(), c.detail.c_str());
  return {r.all_passed() && r.checks.size() == 15,
          std::to_string(r.passed_count()) + "/" + std::to_string(r.checks.size()) + " checks"};
}

Outcome separability_oracle() {
  bool ok = true;
  std::string detail;
  for (double p : {0.1, 0.2, 1.0 / 3.0, 0.5, 0.9}) {
    const double v = eic_lower(werner_state(p), default_ic_povm(2), default_ic_povm(2), config()).bound.value;
    const bool ppt = (1.0 - 3.0 * p) / 4.0 >= -1e-15;
    ok = ok && (ppt ? v <= 1e-4 : v > 1e-4);
    detail += fmt("W(%.3g) ", p) + fmt("%.3e ", v);
  }
  return {ok, detail};
}

Outcome hygiene() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 2), 4, 500 + k);
    const BroadcastProblem prob(rho, 2);
    const RealVector x = prob.params_for(random_density(prob.reduced_dim(), prob.reduced_dim(), 900 + k).matrix());
    worst = std::max(worst, finite_diff_check(prob.objective(), x, 1e-5, prob.param_dim(), k));
  }
  const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 2), 3, 77);
  ChainOptions opts;
  opts.state_name = "random(seed 77)";
  OptimizerConfig cfg = config();
  cfg.restarts = 3;
  const std::string a = dump(to_json(chain_report(rho, cfg, opts)));
  const std::string b = dump(to_json(chain_report(rho, cfg, opts)));
  cfg.jobs = 2;
  const std::string c = dump(to_json(chain_report(rho, cfg, opts)));
  const std::string csv1 = growth_curve_csv(growth_curve(family("product-mix"), 2, cfg));
  const std::string csv2 = growth_curve_csv(growth_curve(family("product-mix"), 2, cfg));
  const bool same = a == b && a == c && csv1 == csv2;
  return {worst < 1e-4 && same,
          "max relative FD error " + fmt("%.2e", worst) + ", reports " + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    double budget_s;  // 0: no stated bound
    std::function<Outcome()> run;
  } criteria[] = {
      {1, "closed-form anchors", 1.0, closed_form},
      {2, "pure-state rigidity", 120.0, pure_rigidity},
      {3, "cc broadcast is constant", 600.0, cc_constant},
      {4, "separable non-cc growth is strict and bounded", 0.0, separable_bounded},
      {5, "Bell certified linear growth", 0.0, bell_certificate},
      {6, "ensemble squashed anchors", 0.0, ecsq_anchors},
      {7, "chain consistency on 20-state corpus", 7200.0, chain_corpus_consistency},
      {8, "warm-start properties", 0.0, property_suite},
      {9, "separability oracle agreement", 0.0, separability_oracle},
      {10, "optimisation hygiene", 0.0, hygiene},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.passed = false;
      o.detail += ", over time budget";
    }
    if (!o.passed) ++failed;
    std::printf("%s  criterion %2d  %-46s  %s  (%.1f s)\n", o.passed ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
