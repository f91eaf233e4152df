#include "circs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "circs/csv.hpp"
#include "circs/rng.hpp"

namespace circs {

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(tol_residual > 0.0))
    throw std::invalid_argument("SolverConfig: tol_residual must be positive");
  if (step_size && !(*step_size > 0.0))
    throw std::invalid_argument("SolverConfig: step_size must be positive");
  if (!(bp_penalty > 0.0))
    throw std::invalid_argument("SolverConfig: bp_penalty must be positive");
}

Solver solver_from_string(const std::string& name) {
  if (name == "bp" || name == "basis_pursuit") return Solver::BasisPursuit;
  if (name == "omp") return Solver::Omp;
  if (name == "cosamp") return Solver::Cosamp;
  if (name == "iht") return Solver::Iht;
  if (name == "htp") return Solver::Htp;
  throw std::invalid_argument("unknown solver: " + name);
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::BasisPursuit: return "bp";
    case Solver::Omp: return "omp";
    case Solver::Cosamp: return "cosamp";
    case Solver::Iht: return "iht";
    case Solver::Htp: return "htp";
  }
  throw std::logic_error("unreachable");
}

std::string RecoveryResult::csv_header() {
  return "solver,n,m,s,iterations,converged,residual,rel_error_vs_truth,support\n";
}

std::string RecoveryResult::to_csv_row(Solver solver, Eigen::Index m, Eigen::Index s,
                                       const Vec* truth) const {
  std::string sup;
  for (size_t i = 0; i < support.size(); ++i) {
    if (i) sup += ';';
    sup += std::to_string(support[i]);
  }
  std::string rel;
  if (truth && truth->norm() > 0)
    rel = csv::fmt((x_hat - *truth).norm() / truth->norm());
  std::string row = to_string(solver);
  row += ',' + std::to_string(x_hat.size()) + ',' + std::to_string(m) + ',' +
         std::to_string(s) + ',' + std::to_string(iterations) + ',' +
         (converged ? "1" : "0") + ',' + csv::fmt(residual) + ',' + rel + ',' + sup +
         '\n';
  return row;
}

// ---------------------------------------------------------------------------
// helpers

namespace {

std::vector<Eigen::Index> top_k_indices(const Vec& v, Eigen::Index k) {
  std::vector<Eigen::Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;  // tie -> smallest index
  });
  idx.resize(std::min<Eigen::Index>(k, v.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Eigen::Index> nonzero_support_1based(const Vec& x, double floor = 0.0) {
  std::vector<Eigen::Index> sup;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > floor) sup.push_back(i + 1);
  return sup;
}

Vec column_of(const LinearOperator& phi, Eigen::Index j0) {
  Vec e = Vec::Zero(phi.cols());
  e[j0] = 1.0;
  return phi.apply(e);
}

// Least squares on an explicit column submatrix; minimum-norm solution
// so collinear columns stay harmless.
Vec least_squares(const Mat& cols, const Vec& y) {
  return cols.completeOrthogonalDecomposition().solve(y);
}

void finalize(RecoveryResult& r, const LinearOperator& phi, const Vec& y) {
  r.residual = (phi.apply(r.x_hat) - y).norm();
}

struct ColumnCache {
  const LinearOperator& phi;
  std::map<Eigen::Index, Vec> cols;  // 0-based index -> column

  const Vec& get(Eigen::Index j0) {
    auto it = cols.find(j0);
    if (it == cols.end()) it = cols.emplace(j0, column_of(phi, j0)).first;
    return it->second;
  }

  Mat gather(const std::vector<Eigen::Index>& idx0) {
    Mat m(phi.rows(), static_cast<Eigen::Index>(idx0.size()));
    for (size_t k = 0; k < idx0.size(); ++k)
      m.col(static_cast<Eigen::Index>(k)) = get(idx0[k]);
    return m;
  }
};

Vec scatter(const Vec& coef, const std::vector<Eigen::Index>& idx0, Eigen::Index n) {
  Vec x = Vec::Zero(n);
  for (size_t k = 0; k < idx0.size(); ++k) x[idx0[k]] = coef[static_cast<Eigen::Index>(k)];
  return x;
}

}  // namespace

Vec hard_threshold(const Vec& x, Eigen::Index s) {
  if (s < 0 || s > x.size())
    throw std::invalid_argument("hard_threshold: s out of range");
  if (s == 0) return Vec::Zero(x.size());
  if (s == x.size()) return x;
  auto keep = top_k_indices(x, s);
  Vec out = Vec::Zero(x.size());
  for (Eigen::Index j : keep) out[j] = x[j];
  return out;
}

double operator_norm_sq_estimate(const LinearOperator& phi, int iters) {
  Vec v(phi.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = static_cast<double>(splitmix64(static_cast<std::uint64_t>(i) + 1)) /
               static_cast<double>(UINT64_MAX) -
           0.5;
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vec w = phi.apply_adjoint(phi.apply(v));
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = std::real(v.dot(w));
    v = w / norm;
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// basis pursuit (Douglas-Rachford)

namespace {

Vec soft_threshold(const Vec& z, double gamma) {
  Vec out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z[i]);
    out[i] = mag <= gamma ? std::complex<double>(0.0) : z[i] * ((mag - gamma) / mag);
  }
  return out;
}

// CG on the normal system (Phi Phi* + lambda I) v = b.
bool cg_gram(const LinearOperator& phi, const Vec& b, double lambda, double tol,
             int max_iters, Vec& v) {
  v = Vec::Zero(b.size());
  Vec r = b;
  Vec p = r;
  double rs = r.squaredNorm();
  const double target = tol * tol * std::max(b.squaredNorm(), 1e-300);
  for (int k = 0; k < max_iters; ++k) {
    if (rs <= target) return true;
    Vec ap = phi.apply(phi.apply_adjoint(p));
    if (lambda > 0) ap += lambda * p;
    const double denom = std::real(p.dot(ap));
    if (!(denom > 0)) return false;
    const double alpha = rs / denom;
    v += alpha * p;
    r -= alpha * ap;
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  return rs <= target;
}

}  // namespace

RecoveryResult basis_pursuit(const LinearOperator& phi, const Vec& y,
                             const SolverConfig& cfg) {
  cfg.validate();
  if (y.size() != phi.rows()) throw std::invalid_argument("basis_pursuit: dimension mismatch");
  const Eigen::Index n = phi.cols();
  const double ynorm = y.norm();

  RecoveryResult res;
  if (ynorm == 0.0) {
    res.x_hat = Vec::Zero(n);
    res.converged = true;
    finalize(res, phi, y);
    return res;
  }

  bool regularized = false;
  const int cg_iters = static_cast<int>(2 * phi.rows() + 50);
  auto project = [&](const Vec& z) {
    Vec rhs = phi.apply(z) - y;
    Vec v;
    if (!cg_gram(phi, rhs, 0.0, 1e-10, cg_iters, v)) {
      regularized = true;
      cg_gram(phi, rhs, 1e-10, 1e-10, cg_iters, v);
    }
    return (z - phi.apply_adjoint(v)).eval();
  };

  // scale the threshold level to the data so bp_penalty is dimensionless
  const double gamma =
      cfg.bp_penalty * ynorm / std::sqrt(static_cast<double>(phi.rows()));

  Vec u = phi.apply_adjoint(y);
  Vec x = project(u);
  res.iterations = 0;
  res.converged = false;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    Vec x_half = soft_threshold(u, gamma);
    Vec x_new = project(2.0 * x_half - u);
    u += x_new - x_half;
    res.iterations = k;
    const double change = (x_new - x).norm();
    x = x_new;
    const double constraint = (phi.apply(x) - y).norm();
    if (change <= cfg.tol_residual * std::max(1.0, x.norm()) &&
        constraint <= cfg.tol_residual * ynorm) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = x;
  res.regularized = regularized;
  const double floor = 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff());
  res.support = nonzero_support_1based(x, floor);
  finalize(res, phi, y);
  return res;
}

// ---------------------------------------------------------------------------
// greedy solvers

RecoveryResult omp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg) {
  cfg.validate();
  if (s < 1 || s > phi.rows()) throw std::invalid_argument("omp: requires 1 <= s <= m");
  if (y.size() != phi.rows()) throw std::invalid_argument("omp: dimension mismatch");
  const Eigen::Index n = phi.cols();
  const double ynorm = y.norm();

  RecoveryResult res;
  res.x_hat = Vec::Zero(n);
  ColumnCache cache{phi, {}};
  std::vector<Eigen::Index> sup0;
  Vec r = y;
  Vec coef;
  for (Eigen::Index k = 0; k < s; ++k) {
    if (r.norm() <= cfg.tol_residual * ynorm) break;
    Vec proxy = phi.apply_adjoint(r);
    for (Eigen::Index j : sup0) proxy[j] = 0.0;  // residual is orthogonal anyway
    auto pick = top_k_indices(proxy, 1);
    if (pick.empty() || std::abs(proxy[pick[0]]) == 0.0) break;
    sup0.push_back(pick[0]);
    std::sort(sup0.begin(), sup0.end());
    Mat cols = cache.gather(sup0);
    coef = least_squares(cols, y);
    r = y - cols * coef;
    res.iterations = static_cast<int>(k) + 1;
  }
  if (!sup0.empty()) res.x_hat = scatter(coef, sup0, n);
  for (Eigen::Index j : sup0) res.support.push_back(j + 1);
  finalize(res, phi, y);
  res.converged = res.residual <= cfg.tol_residual * std::max(ynorm, 1e-300) || ynorm == 0.0;
  return res;
}

RecoveryResult cosamp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                      const SolverConfig& cfg) {
  cfg.validate();
  if (s < 1) throw std::invalid_argument("cosamp: requires s >= 1");
  if (y.size() != phi.rows()) throw std::invalid_argument("cosamp: dimension mismatch");
  const Eigen::Index n = phi.cols();
  const double ynorm = y.norm();

  RecoveryResult res;
  res.x_hat = Vec::Zero(n);
  if (ynorm == 0.0) {
    res.converged = true;
    finalize(res, phi, y);
    return res;
  }

  ColumnCache cache{phi, {}};
  std::vector<Eigen::Index> sup0;
  Vec x = Vec::Zero(n);
  Vec r = y;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    res.iterations = k;
    Vec proxy = phi.apply_adjoint(r);
    auto cand = top_k_indices(proxy, 2 * s);
    std::vector<Eigen::Index> merged;
    std::set_union(sup0.begin(), sup0.end(), cand.begin(), cand.end(),
                   std::back_inserter(merged));
    Mat cols = cache.gather(merged);
    Vec b = least_squares(cols, y);
    Vec dense_b = scatter(b, merged, n);
    x = hard_threshold(dense_b, s);
    sup0.clear();
    for (Eigen::Index i = 0; i < n; ++i)
      if (x[i] != std::complex<double>(0.0)) sup0.push_back(i);
    r = y - phi.apply(x);
    if (r.norm() <= cfg.tol_residual * ynorm) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = x;
  for (Eigen::Index j : sup0) res.support.push_back(j + 1);
  finalize(res, phi, y);
  return res;
}

namespace {

double resolve_step(const LinearOperator& phi, const SolverConfig& cfg) {
  if (cfg.step_size) return *cfg.step_size;
  const double lhat = operator_norm_sq_estimate(phi, 50);
  return lhat > 0 ? 0.98 / lhat : 1.0;
}

}  // namespace

RecoveryResult iht(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg) {
  cfg.validate();
  if (s < 1) throw std::invalid_argument("iht: requires s >= 1");
  if (y.size() != phi.rows()) throw std::invalid_argument("iht: dimension mismatch");
  const Eigen::Index n = phi.cols();
  const double ynorm = y.norm();
  const double mu = resolve_step(phi, cfg);

  RecoveryResult res;
  Vec x = Vec::Zero(n);
  if (ynorm == 0.0) {
    res.x_hat = x;
    res.converged = true;
    finalize(res, phi, y);
    return res;
  }
  for (int k = 1; k <= cfg.max_iters; ++k) {
    res.iterations = k;
    x = hard_threshold((x + mu * phi.apply_adjoint(y - phi.apply(x))).eval(), s);
    if (x.norm() > 1e12) {
      res.diverged = true;
      break;
    }
    if ((y - phi.apply(x)).norm() <= cfg.tol_residual * ynorm) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = x;
  res.support = nonzero_support_1based(x);
  finalize(res, phi, y);
  return res;
}

RecoveryResult htp(const LinearOperator& phi, const Vec& y, Eigen::Index s,
                   const SolverConfig& cfg) {
  cfg.validate();
  if (s < 1) throw std::invalid_argument("htp: requires s >= 1");
  if (y.size() != phi.rows()) throw std::invalid_argument("htp: dimension mismatch");
  const Eigen::Index n = phi.cols();
  const double ynorm = y.norm();
  const double mu = resolve_step(phi, cfg);

  RecoveryResult res;
  Vec x = Vec::Zero(n);
  if (ynorm == 0.0) {
    res.x_hat = x;
    res.converged = true;
    finalize(res, phi, y);
    return res;
  }
  ColumnCache cache{phi, {}};
  std::vector<Eigen::Index> prev_sup;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    res.iterations = k;
    Vec g = x + mu * phi.apply_adjoint(y - phi.apply(x));
    auto sup0 = top_k_indices(g, s);
    Mat cols = cache.gather(sup0);
    Vec coef = least_squares(cols, y);
    x = scatter(coef, sup0, n);
    if ((y - phi.apply(x)).norm() <= cfg.tol_residual * ynorm) {
      res.converged = true;
      prev_sup = sup0;
      break;
    }
    if (sup0 == prev_sup) {
      // support stabilized; the refit is the fixed point
      res.converged = true;
      break;
    }
    prev_sup = sup0;
  }
  res.x_hat = x;
  for (Eigen::Index j : prev_sup) res.support.push_back(j + 1);
  finalize(res, phi, y);
  return res;
}

RecoveryResult run_solver(Solver which, const LinearOperator& phi, const Vec& y,
                          Eigen::Index s, const SolverConfig& cfg) {
  switch (which) {
    case Solver::BasisPursuit: return basis_pursuit(phi, y, cfg);
    case Solver::Omp: return omp(phi, y, s, cfg);
    case Solver::Cosamp: return cosamp(phi, y, s, cfg);
    case Solver::Iht: return iht(phi, y, s, cfg);
    case Solver::Htp: return htp(phi, y, s, cfg);
  }
  throw std::logic_error("unreachable");
}

}  // namespace circs
