#pragma once

#include <random>
#include <string>
#include <vector>

#include "circs/operators.hpp"

namespace circs {

enum class RipKind { Exact, LowerBound };

/// Result of a restricted-isometry analysis of order s.
/// delta = max over examined supports of max(sigma_max^2 - 1, 1 - sigma_min^2).
struct RipReport {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index s = 0;
  RipKind kind = RipKind::Exact;
  double delta = 0.0;
  std::vector<Eigen::Index> worst_support;  // 1-based
  double sigma_min_sq = 0.0;  // smallest squared singular value seen
  double sigma_max_sq = 0.0;  // largest squared singular value seen
  std::size_t supports_examined = 0;

  bool rip_violated() const { return delta >= 1.0; }
  std::string to_csv_row() const;
  static std::string csv_header();
};

/// Extreme eigenvalues of the Gram matrix of the columns selected by
/// `support` (1-based, distinct). Equal to the extreme squared singular
/// values of the column submatrix.
std::pair<double, double> gram_submatrix_extremes(
    const LinearOperator& phi, const std::vector<Eigen::Index>& support);

inline constexpr std::size_t kEnumerationCap = 1'000'000;

/// True delta_s by lexicographic enumeration of all C(n,s) supports.
/// Throws when the enumeration exceeds `cap` (use mc_rip_lower_bound then).
RipReport exact_rip_constant(const LinearOperator& phi, Eigen::Index s,
                             std::size_t cap = kEnumerationCap);

/// Lower bound on delta_s from `trials` uniformly sampled supports.
RipReport mc_rip_lower_bound(const LinearOperator& phi, Eigen::Index s,
                             std::size_t trials, std::mt19937_64& rng);

/// (P1) recovery guarantee: delta_ts < sqrt(1 - 1/t), valid for t > 4/3.
bool recovery_condition_ok(double delta_ts, double t);

/// ceil(C * log^2(1/delta) * delta^-2 * s * log^2(s/delta) * log n), natural logs.
long long required_m_new(Eigen::Index s, Eigen::Index n, double delta, double C = 1.0);

/// ceil(C * delta^-2 * s * log^2 s * log^2 n), natural logs.
long long required_m_old(Eigen::Index s, Eigen::Index n, double delta, double C = 1.0);

struct SandwichParams {
  double eps = 0.25;
  double eta = 0.25;
  void validate() const;
};

struct SandwichBounds {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  bool contained() const { return lower <= middle && middle <= upper; }
};

/// Two-sided bound linking (1/n)||Mx||^2 to the subsampled energy
/// (1/m) sum_{j in Omega} |(Mx)_j|^2. Multiset entries count with
/// multiplicity.
SandwichBounds sandwich_bounds(const LinearOperator& M, const SampleSet& omega,
                               const Vec& x, const SandwichParams& params);

/// |(1/n)||A x||^2 - ||x||^2|, the normalized-energy deviation.
double isometry_defect(const CirculantOperator& A, const Vec& x);

/// Lexicographic support enumeration helper: advances `support`
/// (0-based, strictly increasing) to the next combination; false at end.
bool next_combination(std::vector<Eigen::Index>& support, Eigen::Index n);

}  // namespace circs
