#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "circs/generator.hpp"

namespace circs {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr Eigen::Index kDenseCap = 4096;

/// Matrix-free linear map C^n -> C^m with an adjoint and a dense
/// materialization path used as a testing oracle.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  virtual Vec apply(const Vec& x) const = 0;
  virtual Vec apply_adjoint(const Vec& y) const = 0;

  // Largest entry magnitude, when cheaply known (generator bound);
  // negative means unknown and callers should materialize.
  virtual double max_entry_abs_hint() const { return -1.0; }

  // Columns are apply(e_j). O(n^2) memory, capped.
  Mat materialize(Eigen::Index cap = kDenseCap) const;

  Vec apply_real(const RealVec& x) const { return apply(x.cast<std::complex<double>>()); }
};

Mat dense_materialize(const LinearOperator& op, Eigen::Index cap = kDenseCap);

// Largest entry magnitude, from the hint or from dense materialization.
double max_entry_abs(const LinearOperator& op, Eigen::Index cap = kDenseCap);

/// n x n circulant generated by xi: (A x)_k = sum_j xi_{(k-j mod n)+1} x_j.
/// matvec and adjoint run in O(n log n) through the cached spectrum.
class CirculantOperator final : public LinearOperator {
 public:
  explicit CirculantOperator(RealVec xi);

  Eigen::Index rows() const override { return xi_.size(); }
  Eigen::Index cols() const override { return xi_.size(); }
  Vec apply(const Vec& x) const override;
  Vec apply_adjoint(const Vec& y) const override;
  double max_entry_abs_hint() const override { return xi_.cwiseAbs().maxCoeff(); }

  const RealVec& generator() const { return xi_; }
  const Vec& spectrum() const { return spectrum_; }

 private:
  RealVec xi_;
  Vec spectrum_;  // DFT of xi, cached
};

/// n x n Toeplitz T_ij = xi_{n+i-j} (1-based), xi of length 2n-1,
/// applied through the minimal (2n-1)-point circulant embedding.
class ToeplitzOperator final : public LinearOperator {
 public:
  ToeplitzOperator(RealVec xi, Eigen::Index n);

  Eigen::Index rows() const override { return n_; }
  Eigen::Index cols() const override { return n_; }
  Vec apply(const Vec& x) const override;
  Vec apply_adjoint(const Vec& y) const override;
  double max_entry_abs_hint() const override { return xi_.cwiseAbs().maxCoeff(); }

  const RealVec& generator() const { return xi_; }
  const CirculantOperator& embedded() const { return embedded_; }

 private:
  Eigen::Index n_;
  RealVec xi_;  // length 2n-1
  CirculantOperator embedded_;
};

/// Hankel H = T * J_n (T with columns reversed): H x = T reverse(x).
class HankelOperator final : public LinearOperator {
 public:
  explicit HankelOperator(ToeplitzOperator base) : base_(std::move(base)) {}

  Eigen::Index rows() const override { return base_.rows(); }
  Eigen::Index cols() const override { return base_.cols(); }
  Vec apply(const Vec& x) const override { return base_.apply(x.reverse()); }
  Vec apply_adjoint(const Vec& y) const override {
    return base_.apply_adjoint(y).reverse();
  }
  double max_entry_abs_hint() const override { return base_.max_entry_abs_hint(); }

  const ToeplitzOperator& base() const { return base_; }

 private:
  ToeplitzOperator base_;
};

enum class OmegaMode { MultisetWithReplacement, SubsetWithoutReplacement, FixedGiven };

OmegaMode omega_mode_from_string(const std::string& name);
std::string to_string(OmegaMode mode);

/// Row-sampling pattern: m indices into {1,...,n}, 1-based, stored in
/// draw order; duplicates preserved in multiset mode.
struct SampleSet {
  std::vector<Eigen::Index> indices;  // 1-based
  OmegaMode mode = OmegaMode::FixedGiven;

  Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
  void validate(Eigen::Index n) const;

  std::string to_csv() const;
  static SampleSet from_csv(const std::string& text, OmegaMode mode = OmegaMode::FixedGiven);
};

SampleSet sample_omega(Eigen::Index n, Eigen::Index m, OmegaMode mode,
                       std::mt19937_64& rng);

/// (1/sqrt(m)) P_Omega applied after a base operator. Rows follow the
/// draw order of omega.
class SubsampledOperator final : public LinearOperator {
 public:
  SubsampledOperator(std::shared_ptr<const LinearOperator> base, SampleSet omega);

  Eigen::Index rows() const override { return omega_.size(); }
  Eigen::Index cols() const override { return base_->cols(); }
  Vec apply(const Vec& x) const override;
  Vec apply_adjoint(const Vec& y) const override;
  double max_entry_abs_hint() const override {
    double b = base_->max_entry_abs_hint();
    return b < 0 ? b : b * scale_;
  }

  const LinearOperator& base() const { return *base_; }
  const SampleSet& omega() const { return omega_; }
  double scale() const { return scale_; }

 private:
  std::shared_ptr<const LinearOperator> base_;
  SampleSet omega_;
  double scale_;  // 1/sqrt(m)
};

ToeplitzOperator make_toeplitz(const RealVec& xi, Eigen::Index n);
HankelOperator make_hankel(ToeplitzOperator t);

SubsampledOperator subsample(std::shared_ptr<const LinearOperator> base,
                             SampleSet omega);

/// Partial circulant Phi = (1/sqrt(m)) P_Omega A_xi, the measurement
/// ensemble under study.
SubsampledOperator make_partial_circulant(const RealVec& xi, const SampleSet& omega);

}  // namespace circs
