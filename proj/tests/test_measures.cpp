#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bq/measures.hpp"
#include "support.hpp"

using namespace bq;
using bqtest::family;

TEST_CASE("SIC POVM is informationally complete") {
  const Povm sic = default_ic_povm(2);
  CHECK(sic.size() == 4);
  CHECK_NOTHROW(sic.validate());
  CHECK(gram_rank(sic) == 4);
  for (const auto& e : sic.effects) CHECK(e.trace().real() == doctest::Approx(0.5));
  CHECK(gram_rank(computational_povm(2)) == 2);
  const Povm q = default_ic_povm(3);
  CHECK_NOTHROW(q.validate());
  CHECK(gram_rank(q) == 9);
  // SIC overlaps: Tr(E_i E_j) = (d δ_ij + 1)/(d²(d+1)) for E = Π/d
  for (std::size_t i = 0; i < sic.size(); ++i)
    for (std::size_t j = 0; j < sic.size(); ++j)
      CHECK((sic.effects[i] * sic.effects[j]).trace().real() ==
            doctest::Approx(((i == j ? 2.0 : 0.0) + 1.0) / 12.0));
}

TEST_CASE("POVM validation catches incompleteness") {
  Povm p = computational_povm(2);
  p.effects.pop_back();
  CHECK_THROWS(p.validate());
}

TEST_CASE("fixed measurements on a cc state read out the classical correlation") {
  const DensityOperator cc = family("cc");
  const JointDistribution d = measure_statistics(cc, computational_povm(2), computational_povm(2));
  CHECK(d.p(0, 0) == doctest::Approx(0.5));
  CHECK(d.p(1, 1) == doctest::Approx(0.5));
  CHECK(classical_mi_fixed(d) == doctest::Approx(1.0));
  const JointDistribution flat =
      measure_statistics(bqtest::basis_pure(2, 2, 0), default_ic_povm(2), default_ic_povm(2));
  CHECK(std::abs(classical_mi_fixed(flat)) < 1e-12);
  const JointDistribution bell = measure_statistics(bell_state(), computational_povm(2), computational_povm(2));
  CHECK(bell.p(0, 0) == doctest::Approx(0.5));
  CHECK(std::abs(bell.p(0, 1)) < 1e-15);
  const DensityOperator mixed(SubsystemLayout::bipartite(2, 2), Matrix::Identity(4, 4) / 4.0);
  const JointDistribution u = measure_statistics(mixed, default_ic_povm(2), default_ic_povm(2));
  CHECK((u.p.array() - 1.0 / 16).abs().maxCoeff() < 1e-15);
  CHECK(u.p.sum() == doctest::Approx(1.0));
}

TEST_CASE("optimised measured MI reaches one bit on Bell and cc") {
  const OptimizerConfig cfg = bqtest::quick_config(1, 4);
  const ClassicalMiResult bell = classical_mi_max(bell_state(), 4, cfg);
  CHECK(bell.bound.direction == Direction::lower);
  CHECK(bell.bound.value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(bell.bound.value <= 1.0 + 1e-9);
  const ClassicalMiResult cc = classical_mi_max(family("cc"), 2, cfg);
  CHECK(cc.bound.value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_NOTHROW(bell.a.validate(1e-8));
  CHECK(classical_mi_max(bqtest::basis_pure(2, 2, 1), 4, cfg).bound.value <= 1e-6);
  CHECK_NOTHROW(bell.b.validate(1e-8));
}

TEST_CASE("POVM parametrisation round trips and stays complete") {
  const PovmParam param(2, 4);
  const Povm sic = default_ic_povm(2);
  const Povm back = param.povm(param.from_povm(sic));
  for (std::size_t i = 0; i < sic.size(); ++i) CHECK((back.effects[i] - sic.effects[i]).norm() < 1e-9);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 10; ++t) {
    RealVector x(param.param_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    CHECK_NOTHROW(param.povm(x).validate(1e-9));
  }
}

TEST_CASE("property: data processing, measured MI never exceeds quantum MI") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const PovmParam param(2, 3);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 2), 1 + seed % 4, seed);
    RealVector xa(param.param_dim()), xb(param.param_dim());
    for (Eigen::Index i = 0; i < xa.size(); ++i) {
      xa(i) = normal(rng);
      xb(i) = normal(rng);
    }
    const double ic = classical_mi_fixed(measure_statistics(rho, param.povm(xa), param.povm(xb)));
    CHECK(ic >= -1e-12);
    CHECK(ic <= mutual_information(rho) + 1e-10);
  }
}
