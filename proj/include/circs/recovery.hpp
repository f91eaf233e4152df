#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circs/operators.hpp"

namespace circs {

struct SolverConfig {
  int max_iters = 1000;
  double tol_residual = 1e-6;          // relative to ||y||
  std::optional<double> step_size;     // IHT/HTP; default 0.98 / ||Phi||^2 estimate
  double bp_penalty = 1.0;             // soft-threshold level in the splitting scheme
  void validate() const;
};

enum class Solver { BasisPursuit, Omp, Cosamp, Iht, Htp };

Solver solver_from_string(const std::string& name);
std::string to_string(Solver s);

struct RecoveryResult {
  Vec x_hat;
  std::vector<Eigen::Index> support;  // 1-based, ascending
  double residual = 0.0;              // ||Phi x_hat - y||
  int iterations = 0;
  bool converged = false;
  bool diverged = false;              // IHT iterate blow-up
  bool regularized = false;           // rank-deficient Gram handled by regularization

  std::string to_csv_row(Solver solver, Eigen::Index m, Eigen::Index s,
                         const Vec* truth = nullptr) const;
  static std::string csv_header();
};

/// Keeps the s largest-magnitude entries, zeroing the rest.
/// Ties go to the smallest index.
Vec hard_threshold(const Vec& x, Eigen::Index s);

/// Power-iteration estimate of ||Phi||_2^2 (largest eigenvalue of
/// Phi* Phi), deterministic start vector.
double operator_norm_sq_estimate(const LinearOperator& phi, int iters = 50);

/// l1 minimization subject to Phi z = y by Douglas-Rachford splitting:
/// soft-thresholding alternated with projection onto {z : Phi z = y},
/// the projection applying (Phi Phi*)^-1 by conjugate gradient.
RecoveryResult basis_pursuit(const LinearOperator& phi, const Vec& y,
                             const SolverConfig& cfg = {});

RecoveryResult omp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg = {});

RecoveryResult cosamp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                      const SolverConfig& cfg = {});

RecoveryResult iht(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg = {});

RecoveryResult htp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg = {});

RecoveryResult run_solver(Solver which, const LinearOperator& phi, const Vec& y,
                          Eigen::Index s, const SolverConfig& cfg = {});

}  // namespace circs
