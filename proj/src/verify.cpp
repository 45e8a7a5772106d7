#include "bq/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "bq/entms.hpp"

namespace bq {

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

int SuiteReport::passed_count() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; }));
}

std::string SuiteReport::table() const {
  std::string out;
  for (const auto& c : checks)
    out += std::string(c.passed ? "PASS" : "FAIL") + "  " + c.suite + "  " + c.name + "  " + c.detail + "\n";
  out += std::to_string(passed_count()) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

DensityOperator family(const std::string& name, std::map<std::string, double> params = {}) {
  StateSpec spec;
  spec.family = name;
  spec.params = std::move(params);
  return make_state(spec);
}

DensityOperator product_zero() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1.0;
  return DensityOperator::pure(SubsystemLayout::bipartite(2, 2), psi);
}

}  // namespace

std::vector<NamedState> chain_corpus(std::uint64_t seed) {
  std::vector<NamedState> out;
  out.push_back({"bell", bell_state()});
  out.push_back({"cc", family("cc")});
  for (double p : {0.2, 0.5, 0.9}) out.push_back({"werner(" + fmt(p) + ")", werner_state(p)});
  const SubsystemLayout layout = SubsystemLayout::bipartite(2, 2);
  for (std::uint64_t k = 0; k < 15; ++k)
    out.push_back({"random(seed " + std::to_string(seed + k) + ")", random_density(layout, 4, seed + k)});
  return out;
}

std::vector<PropertyInstance> property_instances(std::uint64_t seed) {
  const SubsystemLayout layout = SubsystemLayout::bipartite(2, 2);
  std::vector<PropertyInstance> out;
  out.push_back({"bell / cc", bell_state(), family("cc"), 0.2});
  out.push_back({"bell / product", bell_state(), product_zero(), 0.3});
  out.push_back({"werner(0.9) / product-mix", werner_state(0.9), family("product-mix"), 0.25});
  for (std::uint64_t k = 0; k < 2; ++k)
    out.push_back({"random rank-2 (seed " + std::to_string(seed + k) + ")", random_density(layout, 2, seed + k),
                   random_density(layout, 2, seed + 100 + k), 0.2});
  return out;
}

SuiteReport verify_thm1(const OptimizerConfig& cfg, int max_dim) {
  SuiteReport report;
  const struct {
    const char* name;
    DensityOperator state;
    GrowthClass expected;
  } cases[] = {{"cc", family("cc"), GrowthClass::constant},
               {"bell", bell_state(), GrowthClass::linear_certified},
               {"product-mix", family("product-mix"), GrowthClass::bounded}};
  GrowthOptions opts;
  opts.max_dim = max_dim;
  for (const auto& c : cases) {
    const GrowthCurve curve = growth_curve(c.state, 3, cfg, opts);
    std::string detail = "got " + to_string(curve.classification) + ", upper";
    for (const auto& pt : curve.per_n) detail += " " + fmt(pt.upper.value);
    report.checks.push_back({"thm1", std::string(c.name) + " is " + to_string(c.expected),
                             curve.classification == c.expected, detail});
  }
  return report;
}

SuiteReport verify_thm2(const OptimizerConfig& cfg, double tol) {
  SuiteReport report;
  for (const auto& inst : property_instances(cfg.master_seed)) {
    const PropertyReport pr = property_checks(inst.rho, inst.sigma, inst.noise, 2, cfg, tol);
    for (const auto& c : pr.checks)
      report.checks.push_back({"thm2", c.name + " [" + inst.name + "]", c.passed,
                               fmt(c.lhs) + " <= " + fmt(c.rhs) + " + " + fmt(c.tol)});
  }
  return report;
}

SuiteReport verify_chain(const OptimizerConfig& cfg, double tol) {
  SuiteReport report;
  ChainOptions opts;
  opts.n_max = 2;
  opts.tol = tol;
  for (const auto& s : chain_corpus(cfg.master_seed)) {
    opts.state_name = s.name;
    const ChainReport r = chain_report(s.state, cfg, opts);
    std::string detail = to_string(r.verdict);
    for (const auto& n : r.notes) detail += "; " + n;
    report.checks.push_back({"chain", s.name, r.verdict == Verdict::consistent, detail});
  }
  return report;
}

SuiteReport verify_suite(const std::string& suite, const OptimizerConfig& cfg, int max_dim) {
  if (suite == "thm1") return verify_thm1(cfg, max_dim);
  if (suite == "thm2") return verify_thm2(cfg);
  if (suite == "chain") return verify_chain(cfg);
  if (suite == "all") {
    SuiteReport all = verify_thm1(cfg, max_dim);
    const SuiteReport t2 = verify_thm2(cfg);
    const SuiteReport ch = verify_chain(cfg);
    all.checks.insert(all.checks.end(), t2.checks.begin(), t2.checks.end());
    all.checks.insert(all.checks.end(), ch.checks.begin(), ch.checks.end());
    return all;
  }
  throw InputError("suite", "unknown suite '" + suite + "' (thm1, thm2, chain, all)");
}

}  // namespace bq
