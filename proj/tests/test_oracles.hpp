#pragma once

// Dense reference constructions used as oracles. Built straight from the
// matrix definitions, independent of the operator implementations.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "circs/operators.hpp"
#include "circs/rip.hpp"

namespace oracle {

using circs::Mat;
using circs::RealVec;
using circs::SampleSet;
using circs::Vec;

inline Mat dense_circulant(const RealVec& xi) {
  const Eigen::Index n = xi.size();
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = xi[((i - j) % n + n) % n];
  return a;
}

// T_ij = xi_{n+i-j}, 1-based; xi has length 2n-1.
inline Mat dense_toeplitz(const RealVec& xi, Eigen::Index n) {
  Mat t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = xi[n - 1 + i - j];
  return t;
}

inline Mat dense_hankel(const RealVec& xi, Eigen::Index n) {
  Mat t = dense_toeplitz(xi, n);
  Mat h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) h.col(j) = t.col(n - 1 - j);
  return h;
}

inline Mat dense_subsample(const Mat& base, const SampleSet& omega) {
  const auto m = static_cast<Eigen::Index>(omega.indices.size());
  Mat out(m, base.cols());
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    out.row(i) = scale * base.row(omega.indices[i] - 1);
  return out;
}

// Brute-force RIP sweep: every support, extreme squared singular values
// from a dense SVD. Independent of the Gram/eigendecomposition path.
inline double brute_force_delta(const Mat& dense, Eigen::Index s) {
  const Eigen::Index n = dense.cols();
  std::vector<Eigen::Index> sup(s);
  for (Eigen::Index k = 0; k < s; ++k) sup[k] = k;
  double delta = 0.0;
  do {
    Mat cols(dense.rows(), s);
    for (Eigen::Index k = 0; k < s; ++k) cols.col(k) = dense.col(sup[k]);
    Eigen::JacobiSVD<Mat> svd(cols);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    delta = std::max({delta, smax * smax - 1.0, 1.0 - smin * smin});
  } while (circs::next_combination(sup, n));
  return delta;
}

}  // namespace oracle
