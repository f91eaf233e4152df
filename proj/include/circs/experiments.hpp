#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circs/generator.hpp"
#include "circs/operators.hpp"
#include "circs/recovery.hpp"
#include "circs/rip.hpp"

namespace circs {

struct ExperimentConfig {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  Eigen::Index m = 0;
  GeneratorSpec generator = GeneratorSpec::rademacher();
  OmegaMode omega_mode = OmegaMode::MultisetWithReplacement;
  Solver solver = Solver::Omp;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  double success_tol = 1e-4;
  SolverConfig solver_cfg;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  Eigen::Index m = 0;
  Solver solver = Solver::Omp;
  bool success = false;
  double rel_error = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

std::string trials_to_csv(const std::vector<TrialRecord>& records);

/// Planted-signal recovery sweep: per trial draw xi, Omega, an s-sparse
/// x0 with Gaussian amplitudes on a uniform support, measure y = Phi x0,
/// solve, and score against x0. Per-trial seeds split from master_seed,
/// so results are independent of thread count.
std::vector<TrialRecord> run_recovery_trials(const ExperimentConfig& cfg);

double success_rate(const std::vector<TrialRecord>& records);

struct PhasePoint {
  Eigen::Index m = 0;
  double success_rate = 0.0;
  std::size_t trials = 0;
};

struct PhaseCurve {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  Solver solver = Solver::Omp;
  std::vector<PhasePoint> points;  // sorted by m

  std::string to_csv() const;
};

PhaseCurve phase_scan(const ExperimentConfig& cfg,
                      const std::vector<Eigen::Index>& m_values);

struct FindMinMResult {
  Eigen::Index m_star = 0;
  double rate_at_star = 0.0;
  Eigen::Index predecessor = 0;      // grid value below m_star (0 if m_star is the minimum)
  double rate_at_predecessor = 0.0;  // < target when predecessor > 0
  std::vector<PhasePoint> probes;    // every (m, rate) evaluated, by m
};

/// Smallest grid value whose success rate reaches target_rate, found by
/// bisection with fresh trials per probe. Per-probe streams derive from
/// (master_seed, m), so the bisection path cannot change any rate.
FindMinMResult find_min_m(const ExperimentConfig& cfg,
                          const std::vector<Eigen::Index>& m_grid,
                          double target_rate);

/// Probe grid for phase-transition searches: multiples of s up to n.
std::vector<Eigen::Index> default_m_grid(Eigen::Index n, Eigen::Index s);

enum class ScalingFeature { NewBound, OldBound };

double scaling_feature(Eigen::Index s, Eigen::Index n, ScalingFeature f);

struct ScalingPoint {
  Eigen::Index s = 0;
  Eigen::Index n = 0;
  Eigen::Index m_star = 0;
};

std::string scaling_to_csv(const std::vector<ScalingPoint>& points);

struct ScalingFit {
  ScalingFeature feature = ScalingFeature::NewBound;
  double slope = 0.0;
  double relative_residual = 0.0;
  bool collinear_warning = false;
};

/// Least-squares slope through the origin of m_star against the chosen
/// feature, with the relative fit residual.
ScalingFit fit_scaling(const std::vector<ScalingPoint>& points, ScalingFeature f);

struct Prop31Report {
  Eigen::Index n = 0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  double empirical_prob = 0.0;
  double theoretical_p0 = 0.0;
  double zeta_mean = 0.0;
  double zeta_variance = 0.0;
  double max_crosscheck_diff = 0.0;  // direct vs matvec route, sampled trials

  std::string to_csv_row() const;
  static std::string csv_header();
};

double std_normal_cdf(double x);

/// Frequency of {(1/n)||A_xi x||^2 < eps} at x = (1,...,1)/sqrt(n),
/// against the limit 2(1 - Phi(sqrt(eps))). Only Rademacher and
/// Gaussian generators are covered.
Prop31Report prop31_experiment(Eigen::Index n, double epsilon, std::size_t trials,
                               GeneratorKind kind, std::uint64_t master_seed,
                               unsigned threads = 0);

struct Cor23Summary {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  std::size_t trials = 0;
  double mean_energy = 0.0;  // mean of (1/n)||A_xi x||^2, expectation 1
  double mean_defect = 0.0;
  double max_defect = 0.0;
  double p99_defect = 0.0;

  std::string to_csv_row() const;
  static std::string csv_header();
};

/// Isometry-defect statistics of (1/sqrt(n)) A_xi on random s-sparse
/// unit vectors, one fresh generator per trial.
Cor23Summary corollary23_experiment(Eigen::Index n, Eigen::Index s,
                                    std::size_t trials, const GeneratorSpec& spec,
                                    std::uint64_t master_seed, unsigned threads = 0);

/// Frequency with which the subsampled energy lands inside the two-sided
/// bound, over fresh (xi, Omega, sparse x) triples.
double sandwich_experiment(Eigen::Index n, Eigen::Index m, std::size_t trials,
                           const SandwichParams& params, const GeneratorSpec& spec,
                           std::uint64_t master_seed, unsigned threads = 0,
                           Eigen::Index sparsity = 0);

}  // namespace circs
