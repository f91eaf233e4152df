#include "circs/generator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace circs {

GeneratorSpec GeneratorSpec::rademacher() {
  return {GeneratorKind::Rademacher, 1.0, 1.0, Field::Real};
}

GeneratorSpec GeneratorSpec::uniform_sym() {
  return {GeneratorKind::UniformSym, std::sqrt(3.0), 1.0, Field::Real};
}

GeneratorSpec GeneratorSpec::gaussian() {
  return {GeneratorKind::Gaussian, std::numeric_limits<double>::infinity(), 1.0,
          Field::Real};
}

GeneratorSpec GeneratorSpec::truncated_subgaussian(double L) {
  return {GeneratorKind::TruncatedSubgaussian,
          std::numeric_limits<double>::quiet_NaN(), L, Field::Real};
}

double GeneratorSpec::entry_bound(Eigen::Index n) const {
  switch (kind) {
    case GeneratorKind::Rademacher: return 1.0;
    case GeneratorKind::UniformSym: return std::sqrt(3.0);
    case GeneratorKind::Gaussian: return std::numeric_limits<double>::infinity();
    case GeneratorKind::TruncatedSubgaussian:
      return subgauss_L * std::sqrt(2.0 * std::log(static_cast<double>(std::max<Eigen::Index>(n, 2))));
  }
  throw std::logic_error("unreachable");
}

void GeneratorSpec::validate() const {
  if (!(subgauss_L > 0.0))
    throw std::invalid_argument("GeneratorSpec: subgauss_L must be positive");
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  if (name == "rademacher") return GeneratorKind::Rademacher;
  if (name == "uniform") return GeneratorKind::UniformSym;
  if (name == "gaussian") return GeneratorKind::Gaussian;
  if (name == "truncated") return GeneratorKind::TruncatedSubgaussian;
  throw std::invalid_argument("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Rademacher: return "rademacher";
    case GeneratorKind::UniformSym: return "uniform";
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::TruncatedSubgaussian: return "truncated";
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd sample_generator(const GeneratorSpec& spec, Eigen::Index n,
                                 std::mt19937_64& rng) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_generator: n must be >= 1");
  Eigen::VectorXd xi(n);
  switch (spec.kind) {
    case GeneratorKind::Rademacher: {
      std::uniform_int_distribution<int> bit(0, 1);
      for (Eigen::Index i = 0; i < n; ++i) xi[i] = bit(rng) ? 1.0 : -1.0;
      break;
    }
    case GeneratorKind::UniformSym: {
      const double r = std::sqrt(3.0);
      std::uniform_real_distribution<double> u(-r, r);
      for (Eigen::Index i = 0; i < n; ++i) xi[i] = u(rng);
      break;
    }
    case GeneratorKind::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) xi[i] = g(rng);
      break;
    }
    case GeneratorKind::TruncatedSubgaussian: {
      // Standard normal conditioned on [-b, b], b = L*sqrt(2 log n).
      // Rejection is cheap: the tail mass outside b is tiny for n >= 2.
      const double b = spec.entry_bound(n);
      std::normal_distribution<double> g(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        double v;
        do {
          v = g(rng);
        } while (std::abs(v) > b);
        xi[i] = v;
      }
      break;
    }
  }
  return xi;
}

}  // namespace circs
