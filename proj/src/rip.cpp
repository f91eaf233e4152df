#include "circs/rip.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "circs/csv.hpp"

namespace circs {

std::string RipReport::csv_header() {
  return "n,m,s,kind,delta,sigma_min_sq,sigma_max_sq,worst_support,supports_examined\n";
}

std::string RipReport::to_csv_row() const {
  std::string sup;
  for (size_t i = 0; i < worst_support.size(); ++i) {
    if (i) sup += ';';
    sup += std::to_string(worst_support[i]);
  }
  std::string row;
  row += std::to_string(n) + ',' + std::to_string(m) + ',' + std::to_string(s) + ',';
  row += (kind == RipKind::Exact ? "exact" : "lower_bound");
  row += ',' + csv::fmt(delta) + ',' + csv::fmt(sigma_min_sq) + ',' +
         csv::fmt(sigma_max_sq) + ',' + sup + ',' + std::to_string(supports_examined) +
         '\n';
  return row;
}

std::pair<double, double> gram_submatrix_extremes(
    const LinearOperator& phi, const std::vector<Eigen::Index>& support) {
  const Eigen::Index n = phi.cols();
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s < 1) throw std::invalid_argument("gram_submatrix_extremes: empty support");
  std::unordered_set<Eigen::Index> seen(support.begin(), support.end());
  if (static_cast<Eigen::Index>(seen.size()) != s)
    throw std::invalid_argument("gram_submatrix_extremes: duplicate support index");

  Mat cols(phi.rows(), s);
  Vec e = Vec::Zero(n);
  for (Eigen::Index k = 0; k < s; ++k) {
    const Eigen::Index j = support[k];
    if (j < 1 || j > n)
      throw std::invalid_argument("gram_submatrix_extremes: support index out of range");
    e[j - 1] = 1.0;
    cols.col(k) = phi.apply(e);
    e[j - 1] = 0.0;
  }
  Mat gram = cols.adjoint() * cols;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {std::max(0.0, ev.minCoeff()), std::max(0.0, ev.maxCoeff())};
}

bool next_combination(std::vector<Eigen::Index>& support, Eigen::Index n) {
  const auto s = static_cast<Eigen::Index>(support.size());
  Eigen::Index i = s - 1;
  while (i >= 0 && support[i] == n - s + i) --i;
  if (i < 0) return false;
  ++support[i];
  for (Eigen::Index k = i + 1; k < s; ++k) support[k] = support[k - 1] + 1;
  return true;
}

namespace {

std::size_t binomial_capped(Eigen::Index n, Eigen::Index s, std::size_t cap) {
  // Stops early once the count exceeds cap; avoids overflow.
  long double acc = 1.0L;
  for (Eigen::Index k = 1; k <= s; ++k) {
    acc = acc * static_cast<long double>(n - s + k) / static_cast<long double>(k);
    if (acc > 4.0L * static_cast<long double>(cap)) return cap + 1;
  }
  auto v = static_cast<std::size_t>(acc + 0.5L);
  return v;
}

struct SupportDelta {
  double delta;
  double smin;
  double smax;
};

SupportDelta support_delta(const Mat& dense, const std::vector<Eigen::Index>& sup0) {
  Mat cols(dense.rows(), static_cast<Eigen::Index>(sup0.size()));
  for (size_t k = 0; k < sup0.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = dense.col(sup0[k]);
  Mat gram = cols.adjoint() * cols;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double smin = std::max(0.0, es.eigenvalues().minCoeff());
  const double smax = std::max(0.0, es.eigenvalues().maxCoeff());
  return {std::max(smax - 1.0, 1.0 - smin), smin, smax};
}

RipReport base_report(const LinearOperator& phi, Eigen::Index s, RipKind kind) {
  RipReport r;
  r.n = phi.cols();
  r.m = phi.rows();
  r.s = s;
  r.kind = kind;
  r.delta = -1.0;
  r.sigma_min_sq = std::numeric_limits<double>::infinity();
  r.sigma_max_sq = 0.0;
  return r;
}

void fold_support(RipReport& r, const std::vector<Eigen::Index>& sup0,
                  const SupportDelta& d) {
  r.supports_examined++;
  r.sigma_min_sq = std::min(r.sigma_min_sq, d.smin);
  r.sigma_max_sq = std::max(r.sigma_max_sq, d.smax);
  if (d.delta > r.delta) {
    r.delta = d.delta;
    r.worst_support.clear();
    for (Eigen::Index j : sup0) r.worst_support.push_back(j + 1);
  }
}

}  // namespace

RipReport exact_rip_constant(const LinearOperator& phi, Eigen::Index s,
                             std::size_t cap) {
  const Eigen::Index n = phi.cols();
  if (s < 1 || s > n) throw std::invalid_argument("exact_rip_constant: invalid s");
  if (binomial_capped(n, s, cap) > cap)
    throw std::runtime_error(
        "exact_rip_constant: C(n,s) exceeds enumeration cap; use mc_rip_lower_bound");

  const Mat dense = phi.materialize();
  RipReport r = base_report(phi, s, RipKind::Exact);
  std::vector<Eigen::Index> sup0(s);
  for (Eigen::Index k = 0; k < s; ++k) sup0[k] = k;
  do {
    fold_support(r, sup0, support_delta(dense, sup0));
  } while (next_combination(sup0, n));
  return r;
}

RipReport mc_rip_lower_bound(const LinearOperator& phi, Eigen::Index s,
                             std::size_t trials, std::mt19937_64& rng) {
  const Eigen::Index n = phi.cols();
  if (s < 1 || s > n) throw std::invalid_argument("mc_rip_lower_bound: invalid s");
  if (trials < 1) throw std::invalid_argument("mc_rip_lower_bound: trials must be >= 1");

  const bool can_dense = n <= kDenseCap && phi.rows() <= kDenseCap;
  Mat dense;
  if (can_dense) dense = phi.materialize();

  RipReport r = base_report(phi, s, RipKind::LowerBound);
  std::vector<Eigen::Index> pool(n);
  for (std::size_t t = 0; t < trials; ++t) {
    // uniform s-subset via partial Fisher-Yates, then sorted
    for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
    std::vector<Eigen::Index> sup0(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      std::uniform_int_distribution<Eigen::Index> u(i, n - 1);
      std::swap(pool[i], pool[u(rng)]);
      sup0[i] = pool[i];
    }
    std::sort(sup0.begin(), sup0.end());
    if (can_dense) {
      fold_support(r, sup0, support_delta(dense, sup0));
    } else {
      std::vector<Eigen::Index> sup1(sup0.size());
      for (size_t k = 0; k < sup0.size(); ++k) sup1[k] = sup0[k] + 1;
      auto [smin, smax] = gram_submatrix_extremes(phi, sup1);
      fold_support(r, sup0, {std::max(smax - 1.0, 1.0 - smin), smin, smax});
    }
  }
  return r;
}

bool recovery_condition_ok(double delta_ts, double t) {
  if (!(t > 4.0 / 3.0))
    throw std::invalid_argument("recovery_condition_ok: requires t > 4/3");
  return delta_ts < std::sqrt(1.0 - 1.0 / t);
}

namespace {

void check_bound_args(Eigen::Index s, Eigen::Index n, double delta, double C) {
  if (s < 2) throw std::invalid_argument("bound formula: s must be >= 2");
  if (n <= s) throw std::invalid_argument("bound formula: n must exceed s");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("bound formula: delta must be in (0,1)");
  if (!(C > 0.0)) throw std::invalid_argument("bound formula: C must be positive");
}

long long ceil_ll(double v) { return static_cast<long long>(std::ceil(v)); }

}  // namespace

long long required_m_new(Eigen::Index s, Eigen::Index n, double delta, double C) {
  check_bound_args(s, n, delta, C);
  const double l1 = std::log(1.0 / delta);
  const double l2 = std::log(static_cast<double>(s) / delta);
  return ceil_ll(C * l1 * l1 / (delta * delta) * static_cast<double>(s) * l2 * l2 *
                 std::log(static_cast<double>(n)));
}

long long required_m_old(Eigen::Index s, Eigen::Index n, double delta, double C) {
  check_bound_args(s, n, delta, C);
  const double ls = std::log(static_cast<double>(s));
  const double ln = std::log(static_cast<double>(n));
  return ceil_ll(C / (delta * delta) * static_cast<double>(s) * ls * ls * ln * ln);
}

void SandwichParams::validate() const {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("SandwichParams: eps must be in (0,1)");
  if (!(eta > 0.0)) throw std::invalid_argument("SandwichParams: eta must be positive");
}

SandwichBounds sandwich_bounds(const LinearOperator& M, const SampleSet& omega,
                               const Vec& x, const SandwichParams& params) {
  params.validate();
  if (x.size() != M.cols()) throw std::invalid_argument("sandwich_bounds: dimension mismatch");
  omega.validate(M.rows());
  const auto n = static_cast<double>(M.rows());
  const auto m = static_cast<double>(omega.size());

  const Vec mx = M.apply(x);
  const double energy = mx.squaredNorm();
  const double l1 = x.cwiseAbs().sum();
  const double minf = max_entry_abs(M);
  const double slack = params.eta * l1 * l1 * minf * minf;

  double middle = 0.0;
  for (Eigen::Index j : omega.indices) middle += std::norm(mx[j - 1]);
  middle /= m;

  SandwichBounds b;
  b.lower = (1.0 - params.eps) / n * energy - slack;
  b.middle = middle;
  b.upper = (1.0 + params.eps) / n * energy + slack;
  return b;
}

double isometry_defect(const CirculantOperator& A, const Vec& x) {
  if (x.size() != A.cols()) throw std::invalid_argument("isometry_defect: dimension mismatch");
  const double n = static_cast<double>(A.cols());
  return std::abs(A.apply(x).squaredNorm() / n - x.squaredNorm());
}

}  // namespace circs
