#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bq/qcore.hpp"
#include "support.hpp"

using namespace bq;
using bqtest::family;

TEST_CASE("closed-form entropies and mutual informations") {
  CHECK(mutual_information(bell_state()) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(mutual_information(bqtest::basis_pure(2, 2, 0))) < 1e-12);
  CHECK(mutual_information(family("cc")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_bits(Matrix::Identity(2, 2) * 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(trace_distance(bqtest::basis_pure(2, 2, 0), bqtest::basis_pure(2, 2, 3)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("shannon entropy and KL divergence") {
  const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
  CHECK(shannon_entropy(u) == doctest::Approx(2.0));
  // KL((1/2,1/2) || (3/4,1/4)) = 1 - (1/2) log2 3
  const std::vector<double> p{0.5, 0.5}, q{0.75, 0.25};
  CHECK(kl_divergence(p, q) == doctest::Approx(1.0 - 0.5 * std::log2(3.0)).epsilon(1e-12));
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  const std::vector<double> r{1.0, 0.0};
  CHECK(std::isinf(kl_divergence(p, r)));
}

TEST_CASE("partial trace of a product returns the factors") {
  const DensityOperator a = random_density(SubsystemLayout::bipartite(2, 3), 6, 11);
  const DensityOperator b0 = random_density(SubsystemLayout::bipartite(2, 2), 2, 12);
  const DensityOperator b(b0.layout().suffixed("'"), b0.matrix());
  const DensityOperator ab = tensor(a, b);
  const std::vector<std::string> keep_a{"A", "B"};
  CHECK((partial_trace(ab, keep_a).matrix() - a.matrix()).norm() < 1e-12);
  CHECK(ab.layout().side_dim(Side::A) == 4);
  CHECK(ab.layout().side_dim(Side::B) == 6);
}

TEST_CASE("partial transpose is an involution and preserves trace") {
  const DensityOperator rho = random_density(SubsystemLayout::bipartite(2, 3), 4, 3);
  const Dims dims = rho.layout().dims();
  const Positions pos{1};
  const Matrix t = partial_transpose(rho.matrix(), dims, pos);
  CHECK((partial_transpose(t, dims, pos) - rho.matrix()).norm() < 1e-14);
  CHECK(std::abs(t.trace() - rho.matrix().trace()) < 1e-14);
}

TEST_CASE("Werner partial-transpose minimum eigenvalue is (1-3p)/4") {
  for (double p : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
    const Spectrum s = hermitian_eig(partial_transpose(werner_state(p), Side::B));
    CHECK(s.eigenvalues.minCoeff() == doctest::Approx((1.0 - 3.0 * p) / 4.0).epsilon(1e-12));
  }
  CHECK(hermitian_eig(partial_transpose(bell_state(), Side::A)).eigenvalues.minCoeff() ==
        doctest::Approx(-0.5));
}

TEST_CASE("trace distance between Werner states") {
  // W(p) - W(q) = (p - q)(Φ - I/4); trace norm (p - q)(3/4 + 3/4)
  const DensityOperator w1 = werner_state(1.0), w9 = werner_state(0.9);
  CHECK(trace_distance(w1, w9) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("validation rejects malformed states") {
  const SubsystemLayout l = SubsystemLayout::bipartite(2, 2);
  Matrix m = Matrix::Identity(4, 4) * 0.25;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityOperator(l, m), ValidationError);
  CHECK_THROWS_AS(DensityOperator(l, Matrix::Identity(4, 4)), ValidationError);
  Matrix neg = Matrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(l, neg), ValidationError);
  CHECK_THROWS(DensityOperator(l, Matrix::Identity(3, 3) / 3.0));
}

TEST_CASE("property: mutual information is nonnegative and bounded by 2 min log d") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int da = 2 + static_cast<int>(seed % 2), db = 2;
    const DensityOperator rho = random_density(SubsystemLayout::bipartite(da, db), 1 + seed % 4, seed);
    const double i = mutual_information(rho);
    CHECK(i >= -1e-12);
    CHECK(i <= 2.0 * std::log2(std::min(da, db)) + 1e-12);
    // Araki-Lieb and subadditivity on the spectrum
    const double s = von_neumann_entropy(rho);
    CHECK(s >= -1e-12);
    CHECK(s <= std::log2(da * db) + 1e-12);
  }
}

TEST_CASE("property: trace distance is a metric on random states") {
  const SubsystemLayout l = SubsystemLayout::bipartite(2, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityOperator a = random_density(l, 4, seed), b = random_density(l, 2, seed + 50),
                          c = random_density(l, 1, seed + 99);
    CHECK(trace_distance(a, a) < 1e-12);
    CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    CHECK(trace_distance(a, b) <= 2.0 + 1e-12);
  }
}

TEST_CASE("property: psd_sqrt squares back") {
  const DensityOperator rho = random_density(4, 3, 7);
  const Matrix s = psd_sqrt(rho.matrix());
  CHECK((s * s - rho.matrix()).norm() < 1e-10);
}
