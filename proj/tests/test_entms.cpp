#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bq/entms.hpp"
#include "support.hpp"

using namespace bq;
using bqtest::family;

namespace {

Ensemble product_mix_ensemble() {
  StateSpec s;
  s.family = "product-mix";
  return canonical_ensembles(s);
}

EicResult eic(const DensityOperator& rho, std::uint64_t seed = 1) {
  return eic_lower(rho, default_ic_povm(2), default_ic_povm(2), bqtest::quick_config(seed, 1));
}

}  // namespace

TEST_CASE("ensemble bound anchors") {
  const OptimizerConfig cfg = bqtest::quick_config(7, 4);
  const EnsembleResult bell = ecsq_upper(bell_state(), 0, cfg);
  CHECK(bell.bound.value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell.bound.direction == Direction::upper);
  CHECK(ecsq_upper(family("product-mix"), 0, cfg).bound.value <= 1e-3);
  CHECK(ecsq_upper(family("cc"), 0, cfg).bound.value <= 1e-3);
  for (double l2 : {0.8536, 0.6, 0.95}) {
    const EnsembleResult r = ecsq_upper(schmidt_state(l2), 0, cfg);
    CHECK(r.bound.value == doctest::Approx(binary_entropy(l2)).epsilon(1e-4));
  }
}

TEST_CASE("property: optimised ensembles reproduce the state") {
  const OptimizerConfig cfg = bqtest::quick_config(3, 2);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 2), 2 + seed, 60 + seed);
    const EnsembleResult r = ecsq_upper(rho, 0, cfg);
    CHECK(r.average_residual < 1e-9);
    CHECK((r.ensemble.average().matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    double sum = 0.0;
    for (double p : r.ensemble.probabilities()) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(r.bound.value == doctest::Approx(0.5 * r.ensemble.average_mutual_information()).epsilon(1e-9));
    CHECK(r.bound.value <= 0.5 * mutual_information(rho) + 1e-9);  // the trivial ensemble is a candidate
  }
}

TEST_CASE("extension bounds") {
  const OptimizerConfig cfg = bqtest::quick_config(2, 2);
  const ExtensionResult trivial = esq_upper(bell_state(), ExtensionSpec::squashed(1), cfg);
  CHECK(trivial.bound.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cemi_upper(bell_state(), ExtensionSpec::cemi(1, 1), cfg).bound.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(cemi_upper(bqtest::basis_pure(2, 2, 2), ExtensionSpec::cemi(2, 2), cfg).bound.value) < 1e-6);
  CHECK_THROWS_AS(ExtensionSpec::squashed(0), InputError);
  CHECK(ExtensionSpec::cemi(2, 3).extension_dim() == 6);
}

TEST_CASE("flag extensions of a separable ensemble give zero") {
  const OptimizerConfig cfg = bqtest::quick_config(4, 1);
  const DensityOperator pm = family("product-mix");
  const DensityOperator flag_sq = flag_extension(product_mix_ensemble(), ExtensionKind::squashed);
  CHECK(flag_sq.dim() == 8);
  const ExtensionResult sq = esq_upper(pm, ExtensionSpec::squashed(2), cfg, {flag_sq});
  CHECK(sq.bound.value <= 1e-3);
  CHECK(sq.marginal_residual < 1e-8);
  const DensityOperator flag_ce = flag_extension(product_mix_ensemble(), ExtensionKind::cemi);
  const ExtensionResult ce = cemi_upper(pm, ExtensionSpec::cemi(2, 2), cfg, {flag_ce});
  CHECK(ce.bound.value <= 1e-3);
}

TEST_CASE("property: a larger extension space never hurts") {
  const OptimizerConfig cfg = bqtest::quick_config(5, 2);
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 2), 3, 90 + seed);
    const double e1 = esq_upper(rho, ExtensionSpec::squashed(1), cfg).bound.value;
    const double e4 = esq_upper(rho, ExtensionSpec::squashed(4), cfg).bound.value;
    CHECK(e1 == doctest::Approx(0.5 * mutual_information(rho)).epsilon(1e-9));
    CHECK(e4 <= e1 + 1e-6);
    CHECK(e4 >= -1e-9);
  }
}

TEST_CASE("measured relative entropy lower bound matches the PPT oracle") {
  // frozen from tests/oracles/eic_ppt_oracle.py
  CHECK(eic(bell_state()).bound.value == doctest::Approx(0.26303440584242793).epsilon(1e-6));
  CHECK(eic(werner_state(0.5)).bound.value == doctest::Approx(0.009710974496713713).epsilon(1e-5));
  CHECK(eic(werner_state(0.9)).bound.value == doctest::Approx(0.152421676719096).epsilon(1e-6));
  for (double p : {0.1, 0.2, 1.0 / 3.0}) CHECK(eic(werner_state(p)).bound.value <= 1e-6);
}

TEST_CASE("lower bound behaviour") {
  const EicResult sep = eic(family("product-mix"));
  CHECK(sep.bound.direction == Direction::lower);
  CHECK(sep.bound.value <= 1e-6);
  CHECK(sep.informationally_complete);
  const EicResult bell = eic(bell_state());
  CHECK(bell.bound.value <= bell.objective + 1e-12);
  for (std::size_t k = 1; k < bell.trace.size(); ++k) CHECK(bell.trace[k] <= bell.trace[k - 1] + 1e-12);
  // computational measurements are not informationally complete
  const EicResult cz = eic_lower(bell_state(), computational_povm(2), computational_povm(2), bqtest::quick_config());
  CHECK(!cz.informationally_complete);
  CHECK(cz.bound.value <= 1e-6);  // the classically correlated state has the same statistics
}

TEST_CASE("chain reports") {
  const OptimizerConfig cfg = bqtest::quick_config(1, 2);
  const ChainReport bell = chain_report(bell_state(), cfg);
  CHECK(bell.verdict == Verdict::consistent);
  CHECK(bell.entries.at("eic").value > 0.0);
  CHECK(bell.entries.at("ib_2/2").value == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(bell.entries.at("2ecsq").value == doctest::Approx(2.0).epsilon(1e-3));
  for (const auto& c : bell.checks) CHECK(c.holds);
  const ChainReport cc = chain_report(family("cc"), cfg);
  CHECK(cc.verdict == Verdict::consistent);
  for (const auto& name : {"2ecsq", "eic", "2esq", "2cemi"}) CHECK(cc.entries.at(name).value <= 1e-3);
  const ChainReport pm = chain_report(family("product-mix"), cfg);
  CHECK(pm.verdict == Verdict::consistent);
  CHECK(pm.entries.at("2ecsq").value <= 2e-3);
  CHECK(pm.entries.at("eic").value <= 1e-6);
}
