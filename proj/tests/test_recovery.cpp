#include <doctest.h>

#include <cmath>

#include "circs/operators.hpp"
#include "circs/recovery.hpp"
#include "circs/rip.hpp"
#include "circs/rng.hpp"

using namespace circs;

namespace {

struct Planted {
  SubsampledOperator phi;
  Vec x0;
  Vec y;
};

Planted planted_instance(Eigen::Index n, Eigen::Index m, Eigen::Index s,
                         std::uint64_t seed, double min_amp = 0.0) {
  auto rng = make_engine(seed);
  RealVec xi = sample_generator(GeneratorSpec::rademacher(), n, rng);
  SampleSet omega = sample_omega(n, m, OmegaMode::MultisetWithReplacement, rng);
  std::vector<Eigen::Index> pool(n);
  for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
  std::normal_distribution<double> g(0.0, 1.0);
  Vec x0 = Vec::Zero(n);
  for (Eigen::Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Eigen::Index> u(i, n - 1);
    std::swap(pool[i], pool[u(rng)]);
    double amp = g(rng);
    if (min_amp > 0 && std::abs(amp) < min_amp) amp = amp < 0 ? -min_amp : min_amp;
    x0[pool[i]] = amp;
  }
  SubsampledOperator phi = make_partial_circulant(xi, omega);
  Vec y = phi.apply(x0);
  return {std::move(phi), std::move(x0), std::move(y)};
}

}  // namespace

TEST_CASE("hard_threshold: magnitudes, ties, and degenerate counts") {
  Vec x(3);
  x << 3.0, -5.0, 1.0;
  Vec t1 = hard_threshold(x, 1);
  CHECK(t1[0] == std::complex<double>(0.0));
  CHECK(t1[1] == std::complex<double>(-5.0));
  CHECK(t1[2] == std::complex<double>(0.0));

  Vec tie(3);
  tie << 2.0, 2.0, 0.0;
  Vec t2 = hard_threshold(tie, 1);
  CHECK(t2[0] == std::complex<double>(2.0));  // tie -> smallest index
  CHECK(t2[1] == std::complex<double>(0.0));

  CHECK((hard_threshold(x, 3) - x).norm() == 0.0);
  CHECK(hard_threshold(x, 0).norm() == 0.0);
  CHECK_THROWS_AS(hard_threshold(x, 4), std::invalid_argument);
}

TEST_CASE("operator norm estimate matches the dense spectral norm") {
  auto rng = make_engine(21);
  RealVec xi = sample_generator(GeneratorSpec::gaussian(), 16, rng);
  SampleSet omega = sample_omega(16, 8, OmegaMode::MultisetWithReplacement, rng);
  SubsampledOperator phi = make_partial_circulant(xi, omega);
  Eigen::JacobiSVD<Mat> svd(phi.materialize());
  const double exact = svd.singularValues().maxCoeff();
  const double est = operator_norm_sq_estimate(phi, 200);
  CHECK(est == doctest::Approx(exact * exact).epsilon(1e-6));
}

TEST_CASE("omp: identity operator picks the active coordinate in one step") {
  CirculantOperator id(RealVec::Unit(4, 0));
  Vec y(4);
  y << 0.0, 3.0, 0.0, 0.0;
  RecoveryResult r = omp(id, y, 1);
  CHECK(r.support == std::vector<Eigen::Index>{2});
  CHECK((r.x_hat - y).norm() <= 1e-12);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("solvers on y = 0 return the zero vector immediately") {
  CirculantOperator id(RealVec::Unit(4, 0));
  Vec zero = Vec::Zero(4);
  for (Solver s : {Solver::BasisPursuit, Solver::Omp, Solver::Cosamp, Solver::Iht,
                   Solver::Htp}) {
    RecoveryResult r = run_solver(s, id, zero, 2);
    CHECK(r.x_hat.norm() == 0.0);
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
  }
}

TEST_CASE("basis pursuit: identity system returns y; planted signal recovered") {
  auto rng = make_engine(22);
  CirculantOperator id(RealVec::Unit(8, 0));
  std::normal_distribution<double> g(0.0, 1.0);
  Vec y(8);
  for (Eigen::Index i = 0; i < 8; ++i) y[i] = g(rng);
  RecoveryResult r = basis_pursuit(id, y);
  CHECK((r.x_hat - y).norm() <= 1e-5 * y.norm());

  Planted p = planted_instance(128, 40, 5, 1234);
  SolverConfig tight;
  tight.tol_residual = 1e-8;
  tight.max_iters = 5000;
  RecoveryResult rec = basis_pursuit(p.phi, p.y, tight);
  CHECK(rec.converged);
  CHECK((rec.x_hat - p.x0).norm() <= 1e-4 * p.x0.norm());
  // l1 minimality against the feasible planted point
  CHECK(rec.x_hat.cwiseAbs().sum() <= p.x0.cwiseAbs().sum() + 1e-5);
  // residual contract
  CHECK(rec.residual <= 1e-6 * p.y.norm() + 1e-12);
}

TEST_CASE("greedy solvers: planted 3-sparse recovery at n=64, m=32") {
  Planted p = planted_instance(64, 32, 3, 42, /*min_amp=*/1.0);
  std::vector<Eigen::Index> truth;
  for (Eigen::Index i = 0; i < 64; ++i)
    if (p.x0[i] != std::complex<double>(0.0)) truth.push_back(i + 1);

  RecoveryResult r_omp = omp(p.phi, p.y, 3);
  CHECK(r_omp.support == truth);
  CHECK((r_omp.x_hat - p.x0).norm() <= 1e-8 * p.x0.norm());

  for (Solver s : {Solver::Cosamp, Solver::Iht, Solver::Htp}) {
    RecoveryResult r = run_solver(s, p.phi, p.y, 3);
    CHECK((r.x_hat - p.x0).norm() <= 1e-4 * p.x0.norm());
  }
}

TEST_CASE("iht converges in one step on the identity with unit step") {
  CirculantOperator id(RealVec::Unit(4, 0));
  Vec y(4);
  y << 0.0, 3.0, 0.0, -1.0;
  SolverConfig cfg;
  cfg.step_size = 1.0;
  RecoveryResult r = iht(id, y, 2, cfg);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  CHECK((r.x_hat - y).norm() <= 1e-12);
}

TEST_CASE("least-squares refit on the true support reproduces x0") {
  Planted p = planted_instance(64, 32, 3, 7);
  std::vector<Eigen::Index> sup1;
  for (Eigen::Index i = 0; i < 64; ++i)
    if (p.x0[i] != std::complex<double>(0.0)) sup1.push_back(i + 1);

  auto [smin, smax] = gram_submatrix_extremes(p.phi, sup1);
  REQUIRE(smin > 0.0);  // restricted injectivity

  Mat cols(p.phi.rows(), static_cast<Eigen::Index>(sup1.size()));
  for (size_t k = 0; k < sup1.size(); ++k) {
    Vec e = Vec::Zero(64);
    e[sup1[k] - 1] = 1.0;
    cols.col(static_cast<Eigen::Index>(k)) = p.phi.apply(e);
  }
  Vec coef = cols.completeOrthogonalDecomposition().solve(p.y);
  Vec refit = Vec::Zero(64);
  for (size_t k = 0; k < sup1.size(); ++k)
    refit[sup1[k] - 1] = coef[static_cast<Eigen::Index>(k)];
  CHECK((refit - p.x0).norm() <= 1e-10 * p.x0.norm());
}

TEST_CASE("solvers are deterministic") {
  Planted p = planted_instance(64, 28, 4, 55);
  for (Solver s : {Solver::BasisPursuit, Solver::Omp, Solver::Cosamp, Solver::Iht,
                   Solver::Htp}) {
    RecoveryResult a = run_solver(s, p.phi, p.y, 4);
    RecoveryResult b = run_solver(s, p.phi, p.y, 4);
    CHECK(a.iterations == b.iterations);
    CHECK(a.support == b.support);
    CHECK((a.x_hat - b.x_hat).norm() == 0.0);
  }
}

TEST_CASE("recovery result invariants: residual recomputes, support is small") {
  Planted p = planted_instance(64, 32, 3, 42);
  for (Solver s : {Solver::Omp, Solver::Cosamp, Solver::Iht, Solver::Htp}) {
    RecoveryResult r = run_solver(s, p.phi, p.y, 3);
    CHECK(std::abs((p.phi.apply(r.x_hat) - p.y).norm() - r.residual) <= 1e-12);
    CHECK(r.support.size() <= 3);
  }
}

TEST_CASE("solver argument validation") {
  CirculantOperator id(RealVec::Unit(4, 0));
  Vec y = Vec::Zero(4);
  CHECK_THROWS_AS(omp(id, y, 0), std::invalid_argument);
  CHECK_THROWS_AS(omp(id, y, 5), std::invalid_argument);
  CHECK_THROWS_AS(omp(id, Vec::Zero(3), 1), std::invalid_argument);
  SolverConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(iht(id, y, 1, bad), std::invalid_argument);
}
