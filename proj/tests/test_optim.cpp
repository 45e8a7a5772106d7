#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "bq/optim.hpp"
#include "bq/param.hpp"
#include "bq/states.hpp"
#include "support.hpp"

using namespace bq;

namespace {

// Euclidean projection of v onto the probability simplex (sort and threshold).
RealVector simplex_projection(RealVector v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Matrix random_hermitian(int d, std::uint64_t seed, double scale) {
  const Matrix g = random_density(d, d, seed).matrix();
  const Matrix h = random_density(d, 1, seed + 1000).matrix();
  return scale * (g - h) + Matrix::Identity(d, d) * (0.3 / d);
}

}  // namespace

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.penalty_schedule = {10.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = OptimizerConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK_THROWS_AS(finite_diff_check([](const RealVector&, RealVector*) { return 0.0; }, RealVector::Zero(2), 1.0),
                  InputError);
}

TEST_CASE("penalized quadratic matches the closed-form minimizer at the final weight") {
  // min ‖x − a‖² + w (Σx − 1)²  has  Σx = (Σa + n w)/(1 + n w),  x = a − w (Σx − 1)
  const int n = 5;
  RealVector a(n);
  a << 0.3, -0.2, 0.9, 0.1, 0.4;
  const ObjectiveFn f = [&](const RealVector& x, RealVector* g) {
    if (g) *g = 2 * (x - a);
    return (x - a).squaredNorm();
  };
  const Penalty sum_one{"sum", [](const RealVector& x, RealVector* g) {
                          const double r = x.sum() - 1.0;
                          if (g) *g = RealVector::Constant(x.size(), 2 * r);
                          return r * r;
                        }};
  OptimizerConfig cfg = bqtest::quick_config(3, 3);
  const MultiStartResult res = minimize_penalized(f, {sum_one}, n, cfg);
  const double w = cfg.penalty_schedule.back();
  const double s = (a.sum() + n * w) / (1 + n * w);
  const RealVector expected = a.array() - w * (s - 1.0);
  CHECK((res.best.argmin - expected).norm() < 1e-7);
  CHECK(res.best.residuals.at("sum") == doctest::Approx(std::abs(s - 1.0)).epsilon(1e-4));
  CHECK(res.runs.size() == 3);
  CHECK(std::is_sorted(res.best.stage_starts.begin(), res.best.stage_starts.end()));
}

TEST_CASE("restarts are reproducible and independent of job count") {
  const ObjectiveFn rosen = [](const RealVector& x, RealVector* g) {
    const double a = 1 - x(0), b = x(1) - x(0) * x(0);
    if (g) {
      g->resize(2);
      (*g)(0) = -2 * a - 400 * x(0) * b;
      (*g)(1) = 200 * b;
    }
    return a * a + 100 * b * b;
  };
  OptimizerConfig cfg = bqtest::quick_config(42, 4);
  const MultiStartResult r1 = minimize_penalized(rosen, {}, 2, cfg);
  cfg.jobs = 3;
  const MultiStartResult r2 = minimize_penalized(rosen, {}, 2, cfg);
  CHECK(r1.best.restart_index == r2.best.restart_index);
  for (std::size_t i = 0; i < r1.runs.size(); ++i) CHECK(r1.runs[i].argmin == r2.runs[i].argmin);
  CHECK(r1.best.value < 1e-10);
}

TEST_CASE("finite-difference check agrees with analytic density-parameter gradients") {
  const DensityParam param(4);
  const Matrix h = random_hermitian(4, 5, 1.0);
  const ObjectiveFn f = [&](const RealVector& x, RealVector* g) {
    const Matrix s = param.state(x);
    if (g) *g = param.pullback(x, h);
    return (h * s).trace().real();
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RealVector x = param.from_state(random_density(4, 4, seed).matrix());
    CHECK(finite_diff_check(f, x, 1e-5, 64, seed) < 1e-6);
  }
}

TEST_CASE("Dykstra onto PSD ∩ trace-one equals eigenvalue simplex projection") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 3 + static_cast<int>(seed % 3);
    const Matrix h = random_hermitian(d, seed, 1.5);
    const Spectrum s = hermitian_eig(h);
    const Matrix oracle = s.eigenvectors * simplex_projection(s.eigenvalues).cast<cplx>().asDiagonal() *
                          s.eigenvectors.adjoint();
    const ProjectionResult p = dykstra_project(h, {ConvexSet::psd(), ConvexSet::trace_one()}, 1e-13);
    CHECK((p.point - oracle).norm() < 1e-9);
    for (const auto& [name, r] : p.residuals) CHECK(r < 1e-9);
  }
}

TEST_CASE("PPT projection lands in the PPT set and fixes PPT points") {
  const Dims dims{2, 2};
  const Positions b{1};
  const std::vector<ConvexSet> sets{ConvexSet::psd(), ConvexSet::ppt(dims, b), ConvexSet::trace_one()};
  const ProjectionResult p = dykstra_project(bell_state().matrix(), sets, 1e-13);
  CHECK(hermitian_eig(partial_transpose(p.point, dims, b)).eigenvalues.minCoeff() > -1e-10);
  CHECK(std::abs(p.point.trace() - 1.0) < 1e-10);
  // Werner(1/3) is on the PPT boundary and must be a fixed point
  const Matrix w = werner_state(1.0 / 3.0).matrix();
  CHECK((dykstra_project(w, sets, 1e-13).point - w).norm() < 1e-10);
}

TEST_CASE("fixed-marginal projection is affine and idempotent") {
  const Dims dims{2, 2, 2, 2};
  const Matrix target = random_density(4, 4, 1).matrix();
  const ConvexSet m = ConvexSet::fixed_marginals(dims, {{0, 1}, {2, 3}}, {target, target});
  CHECK(m.affine());
  const Matrix x = random_hermitian(16, 3, 0.2);
  const Matrix y = m.project(x);
  CHECK(m.distance(y) < 1e-12);
  CHECK((partial_trace(y, dims, Positions{0, 1}) - target).norm() < 1e-12);
  CHECK((partial_trace(y, dims, Positions{2, 3}) - target).norm() < 1e-12);
  // orthogonality of the correction to the feasible directions
  const Matrix z = m.project(random_hermitian(16, 8, 0.2));
  CHECK(std::abs(((x - y).adjoint() * (z - y)).trace()) < 1e-10);
}

TEST_CASE("property: density parametrisation always yields a valid state") {
  const DensityParam param(6);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    RealVector x(param.param_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    CHECK_NOTHROW(validate_density(param.state(x), 6));
  }
}

TEST_CASE("clip-and-renormalize oracle when the clipped spectrum already has unit trace") {
  // eigenvalues (0.5, 0.3, 0.2, -0.1): clipping gives trace one, so it is the nearest point
  const Matrix u = hermitian_eig(random_hermitian(4, 21, 1.0)).eigenvectors;
  RealVector lam(4);
  lam << 0.5, 0.3, 0.2, -0.1;
  const Matrix h = u * lam.cast<cplx>().asDiagonal() * u.adjoint();
  RealVector clipped = lam.cwiseMax(0.0);
  clipped /= clipped.sum();
  const Matrix oracle = u * clipped.cast<cplx>().asDiagonal() * u.adjoint();
  const ProjectionResult p = dykstra_project(h, {ConvexSet::psd(), ConvexSet::trace_one()}, 1e-13);
  CHECK((p.point - oracle).norm() < 1e-8);
}

TEST_CASE("points already in the intersection are fixed") {
  const Matrix rho = random_density(4, 3, 2).matrix();
  const ProjectionResult p = dykstra_project(rho, {ConvexSet::psd(), ConvexSet::trace_one()}, 1e-13);
  CHECK((p.point - rho).norm() < 1e-12);
}

TEST_CASE("finite-difference check: linear exact, wrong gradient caught") {
  RealVector c(3);
  c << 1.0, -2.0, 0.5;
  const ObjectiveFn lin = [&](const RealVector& x, RealVector* g) {
    if (g) *g = c;
    return c.dot(x);
  };
  CHECK(finite_diff_check(lin, RealVector::Ones(3), 1e-5) < 1e-9);
  const ObjectiveFn wrong = [&](const RealVector& x, RealVector* g) {
    if (g) *g = 2 * c;
    return c.dot(x);
  };
  CHECK(finite_diff_check(wrong, RealVector::Ones(3), 1e-5) > 1e-1);
}

TEST_CASE("property: multi-start best is no worse than any single restart") {
  // double-well in each coordinate, 2^4 local minima
  const ObjectiveFn wells = [](const RealVector& x, RealVector* g) {
    double v = 0.0;
    if (g) g->resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double t = x(i);
      v += (t * t - 1) * (t * t - 1) + 0.3 * t;
      if (g) (*g)(i) = 4 * t * (t * t - 1) + 0.3;
    }
    return v;
  };
  const MultiStartResult r = minimize_penalized(wells, {}, 4, bqtest::quick_config(5, 8));
  for (const auto& run : r.runs) CHECK(r.best.value <= run.value + 1e-12);
}
