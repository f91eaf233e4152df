#include "circs/operators.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "circs/fft.hpp"

namespace circs {

Mat LinearOperator::materialize(Eigen::Index cap) const {
  if (cols() > cap || rows() > cap)
    throw std::runtime_error("dense_materialize: dimension exceeds cap " +
                             std::to_string(cap));
  Mat m(rows(), cols());
  Vec e = Vec::Zero(cols());
  for (Eigen::Index j = 0; j < cols(); ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

Mat dense_materialize(const LinearOperator& op, Eigen::Index cap) {
  return op.materialize(cap);
}

double max_entry_abs(const LinearOperator& op, Eigen::Index cap) {
  double hint = op.max_entry_abs_hint();
  if (hint >= 0) return hint;
  return op.materialize(cap).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Circulant

CirculantOperator::CirculantOperator(RealVec xi) : xi_(std::move(xi)) {
  if (xi_.size() < 1) throw std::invalid_argument("CirculantOperator: empty generator");
  spectrum_ = fft::forward(xi_.cast<std::complex<double>>());
}

Vec CirculantOperator::apply(const Vec& x) const {
  if (x.size() != xi_.size())
    throw std::invalid_argument("circulant_matvec: dimension mismatch");
  return fft::inverse(spectrum_.cwiseProduct(fft::forward(x)).eval());
}

Vec CirculantOperator::apply_adjoint(const Vec& y) const {
  if (y.size() != xi_.size())
    throw std::invalid_argument("circulant_adjoint_matvec: dimension mismatch");
  return fft::inverse(spectrum_.conjugate().cwiseProduct(fft::forward(y)).eval());
}

// ---------------------------------------------------------------------------
// Toeplitz via circulant embedding of dimension 2n-1

namespace {

RealVec embedding_generator(const RealVec& xi, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("ToeplitzOperator: n must be >= 1");
  if (xi.size() != 2 * n - 1)
    throw std::invalid_argument("ToeplitzOperator: generator must have length 2n-1");
  // c_{l+1} = xi_{n+l} for 0 <= l <= n-1, c_{l+1} = xi_{l-n+1} for n <= l <= 2n-2
  const Eigen::Index N = 2 * n - 1;
  RealVec c(N);
  for (Eigen::Index l = 0; l < n; ++l) c[l] = xi[n - 1 + l];
  for (Eigen::Index l = n; l < N; ++l) c[l] = xi[l - n];
  return c;
}

}  // namespace

ToeplitzOperator::ToeplitzOperator(RealVec xi, Eigen::Index n)
    : n_(n), xi_(std::move(xi)), embedded_(embedding_generator(xi_, n)) {}

Vec ToeplitzOperator::apply(const Vec& x) const {
  if (x.size() != n_) throw std::invalid_argument("toeplitz_matvec: dimension mismatch");
  Vec padded = Vec::Zero(2 * n_ - 1);
  padded.head(n_) = x;
  return embedded_.apply(padded).head(n_);
}

Vec ToeplitzOperator::apply_adjoint(const Vec& y) const {
  if (y.size() != n_)
    throw std::invalid_argument("toeplitz_adjoint_matvec: dimension mismatch");
  Vec padded = Vec::Zero(2 * n_ - 1);
  padded.head(n_) = y;
  return embedded_.apply_adjoint(padded).head(n_);
}

ToeplitzOperator make_toeplitz(const RealVec& xi, Eigen::Index n) {
  return ToeplitzOperator(xi, n);
}

HankelOperator make_hankel(ToeplitzOperator t) { return HankelOperator(std::move(t)); }

// ---------------------------------------------------------------------------
// Sampling

OmegaMode omega_mode_from_string(const std::string& name) {
  if (name == "multiset") return OmegaMode::MultisetWithReplacement;
  if (name == "subset") return OmegaMode::SubsetWithoutReplacement;
  if (name == "fixed") return OmegaMode::FixedGiven;
  throw std::invalid_argument("unknown omega mode: " + name);
}

std::string to_string(OmegaMode mode) {
  switch (mode) {
    case OmegaMode::MultisetWithReplacement: return "multiset";
    case OmegaMode::SubsetWithoutReplacement: return "subset";
    case OmegaMode::FixedGiven: return "fixed";
  }
  throw std::logic_error("unreachable");
}

void SampleSet::validate(Eigen::Index n) const {
  for (Eigen::Index idx : indices)
    if (idx < 1 || idx > n)
      throw std::invalid_argument("SampleSet: index out of range [1, n]");
  if (mode == OmegaMode::SubsetWithoutReplacement) {
    std::unordered_set<Eigen::Index> seen(indices.begin(), indices.end());
    if (static_cast<Eigen::Index>(seen.size()) != size())
      throw std::invalid_argument("SampleSet: duplicate index in subset mode");
  }
}

std::string SampleSet::to_csv() const {
  std::string out;
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i]);
  }
  out += '\n';
  return out;
}

SampleSet SampleSet::from_csv(const std::string& text, OmegaMode mode) {
  SampleSet s;
  s.mode = mode;
  std::istringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\n' || cell.back() == '\r')) cell.pop_back();
    if (cell.empty()) continue;
    s.indices.push_back(std::stoll(cell));
  }
  return s;
}

SampleSet sample_omega(Eigen::Index n, Eigen::Index m, OmegaMode mode,
                       std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("sample_omega: m must be >= 1");
  SampleSet s;
  s.mode = mode;
  s.indices.reserve(m);
  switch (mode) {
    case OmegaMode::MultisetWithReplacement: {
      std::uniform_int_distribution<Eigen::Index> u(1, n);
      for (Eigen::Index i = 0; i < m; ++i) s.indices.push_back(u(rng));
      break;
    }
    case OmegaMode::SubsetWithoutReplacement: {
      if (m > n)
        throw std::invalid_argument("sample_omega: m > n in subset mode");
      // partial Fisher-Yates; indices kept in draw order
      std::vector<Eigen::Index> pool(n);
      std::iota(pool.begin(), pool.end(), Eigen::Index{1});
      for (Eigen::Index i = 0; i < m; ++i) {
        std::uniform_int_distribution<Eigen::Index> u(i, n - 1);
        std::swap(pool[i], pool[u(rng)]);
        s.indices.push_back(pool[i]);
      }
      break;
    }
    case OmegaMode::FixedGiven:
      throw std::invalid_argument("sample_omega: FixedGiven is not a sampling mode");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Subsampled

SubsampledOperator::SubsampledOperator(std::shared_ptr<const LinearOperator> base,
                                       SampleSet omega)
    : base_(std::move(base)), omega_(std::move(omega)) {
  if (!base_) throw std::invalid_argument("SubsampledOperator: null base");
  if (omega_.size() < 1) throw std::invalid_argument("SubsampledOperator: empty omega");
  omega_.validate(base_->rows());
  scale_ = 1.0 / std::sqrt(static_cast<double>(omega_.size()));
}

Vec SubsampledOperator::apply(const Vec& x) const {
  Vec full = base_->apply(x);
  Vec out(omega_.size());
  for (Eigen::Index i = 0; i < omega_.size(); ++i)
    out[i] = scale_ * full[omega_.indices[i] - 1];
  return out;
}

Vec SubsampledOperator::apply_adjoint(const Vec& y) const {
  if (y.size() != omega_.size())
    throw std::invalid_argument("subsampled adjoint: dimension mismatch");
  Vec spread = Vec::Zero(base_->rows());
  for (Eigen::Index i = 0; i < omega_.size(); ++i)
    spread[omega_.indices[i] - 1] += scale_ * y[i];
  return base_->apply_adjoint(spread);
}

SubsampledOperator subsample(std::shared_ptr<const LinearOperator> base,
                             SampleSet omega) {
  return SubsampledOperator(std::move(base), std::move(omega));
}

SubsampledOperator make_partial_circulant(const RealVec& xi, const SampleSet& omega) {
  return SubsampledOperator(std::make_shared<CirculantOperator>(xi), omega);
}

}  // namespace circs
