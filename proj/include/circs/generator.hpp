#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

namespace circs {

enum class GeneratorKind { Rademacher, UniformSym, Gaussian, TruncatedSubgaussian };
enum class Field { Real, Complex };

// Distribution of the random generator vector. All kinds are zero-mean
// and (up to truncation loss) unit-variance.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Rademacher;
  double bound_c = 1.0;    // entry bound; +inf for Gaussian
  double subgauss_L = 1.0; // subgaussian parameter
  Field field = Field::Real;

  static GeneratorSpec rademacher();
  static GeneratorSpec uniform_sym();
  static GeneratorSpec gaussian();
  static GeneratorSpec truncated_subgaussian(double L);

  // Entry bound for a length-n draw. Truncated subgaussian entries are
  // clipped at L*sqrt(2 log n), so the bound depends on n.
  double entry_bound(Eigen::Index n) const;

  void validate() const;
};

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

// Length-n i.i.d. draw from the given law. Deterministic given the engine state.
Eigen::VectorXd sample_generator(const GeneratorSpec& spec, Eigen::Index n,
                                 std::mt19937_64& rng);

}  // namespace circs
