#include "circs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>

#include "circs/csv.hpp"
#include "circs/parallel.hpp"
#include "circs/rng.hpp"

namespace circs {

void ExperimentConfig::validate() const {
  if (n < 1 || s < 1 || m < 1)
    throw std::invalid_argument("ExperimentConfig: n, s, m must be positive");
  if (s > n) throw std::invalid_argument("ExperimentConfig: s > n");
  if (!(success_tol > 0.0))
    throw std::invalid_argument("ExperimentConfig: success_tol must be positive");
  generator.validate();
  solver_cfg.validate();
}

namespace {

std::vector<Eigen::Index> uniform_subset0(Eigen::Index n, Eigen::Index s,
                                          std::mt19937_64& rng) {
  std::vector<Eigen::Index> pool(n);
  for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
  std::vector<Eigen::Index> out(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Eigen::Index> u(i, n - 1);
    std::swap(pool[i], pool[u(rng)]);
    out[i] = pool[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec planted_sparse(Eigen::Index n, Eigen::Index s, std::mt19937_64& rng,
                   bool unit_norm = false) {
  auto sup = uniform_subset0(n, s, rng);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec x = Vec::Zero(n);
  for (Eigen::Index j : sup) x[j] = g(rng);
  if (unit_norm) {
    const double norm = x.norm();
    if (norm > 0) x /= norm;
  }
  return x;
}

}  // namespace

std::vector<TrialRecord> run_recovery_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> records(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    TrialRecord& rec = records[t];
    rec.trial_index = t;
    rec.seed = split_seed(cfg.master_seed, t);
    rec.n = cfg.n;
    rec.s = cfg.s;
    rec.m = cfg.m;
    rec.solver = cfg.solver;
    auto rng = make_engine(rec.seed);

    const RealVec xi = sample_generator(cfg.generator, cfg.n, rng);
    const SampleSet omega = sample_omega(cfg.n, cfg.m, cfg.omega_mode, rng);
    const Vec x0 = planted_sparse(cfg.n, cfg.s, rng);
    const SubsampledOperator phi = make_partial_circulant(xi, omega);
    const Vec y = phi.apply(x0);

    try {
      RecoveryResult r = run_solver(cfg.solver, phi, y, cfg.s, cfg.solver_cfg);
      rec.residual = r.residual;
      rec.iterations = r.iterations;
      const double x0n = x0.norm();
      rec.rel_error = x0n > 0 ? (r.x_hat - x0).norm() / x0n : r.x_hat.norm();
      rec.success = rec.rel_error <= cfg.success_tol;
    } catch (const std::exception&) {
      rec.success = false;
      rec.rel_error = std::numeric_limits<double>::infinity();
    }
  });
  return records;
}

std::string trials_to_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "trial_index,seed,n,s,m,solver,success,rel_error,residual,iterations\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial_index) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.s) + ',' +
           std::to_string(r.m) + ',' + to_string(r.solver) + ',' +
           (r.success ? "1" : "0") + ',' + csv::fmt(r.rel_error) + ',' +
           csv::fmt(r.residual) + ',' + std::to_string(r.iterations) + '\n';
  }
  return out;
}

double success_rate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("success_rate: no records");
  std::size_t ok = 0;
  for (const auto& r : records) ok += r.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

std::string PhaseCurve::to_csv() const {
  std::string out = "m,success_rate,trials\n";
  for (const auto& p : points)
    out += std::to_string(p.m) + ',' + csv::fmt(p.success_rate) + ',' +
           std::to_string(p.trials) + '\n';
  return out;
}

PhaseCurve phase_scan(const ExperimentConfig& cfg,
                      const std::vector<Eigen::Index>& m_values) {
  PhaseCurve curve;
  curve.n = cfg.n;
  curve.s = cfg.s;
  curve.solver = cfg.solver;
  for (Eigen::Index m : m_values) {
    ExperimentConfig c = cfg;
    c.m = m;
    // probe stream keyed by m, independent of scan order
    c.master_seed = split_seed(cfg.master_seed, static_cast<std::uint64_t>(m));
    auto recs = run_recovery_trials(c);
    curve.points.push_back({m, success_rate(recs), recs.size()});
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const PhasePoint& a, const PhasePoint& b) { return a.m < b.m; });
  return curve;
}

FindMinMResult find_min_m(const ExperimentConfig& cfg,
                          const std::vector<Eigen::Index>& m_grid,
                          double target_rate) {
  if (m_grid.size() < 1) throw std::invalid_argument("find_min_m: empty grid");
  if (!std::is_sorted(m_grid.begin(), m_grid.end()))
    throw std::invalid_argument("find_min_m: grid must be increasing");

  FindMinMResult result;
  auto rate_at = [&](Eigen::Index m) {
    ExperimentConfig c = cfg;
    c.m = m;
    c.master_seed = split_seed(cfg.master_seed, static_cast<std::uint64_t>(m));
    auto recs = run_recovery_trials(c);
    const double rate = success_rate(recs);
    result.probes.push_back({m, rate, recs.size()});
    return rate;
  };

  const double rate_lo = rate_at(m_grid.front());
  if (rate_lo >= target_rate) {
    result.m_star = m_grid.front();
    result.rate_at_star = rate_lo;
    return result;
  }
  if (m_grid.size() == 1)
    throw std::range_error("find_min_m: target not reached; rate at m=" +
                           std::to_string(m_grid.front()) + " is " +
                           csv::fmt(rate_lo));
  const double rate_hi = rate_at(m_grid.back());
  if (rate_hi < target_rate)
    throw std::range_error(
        "find_min_m: target not bracketed; endpoint rates " + csv::fmt(rate_lo) +
        " and " + csv::fmt(rate_hi));

  std::size_t lo = 0, hi = m_grid.size() - 1;  // rate[lo] < target <= rate[hi]
  double lo_rate = rate_lo, hi_rate = rate_hi;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double r = rate_at(m_grid[mid]);
    if (r >= target_rate) {
      hi = mid;
      hi_rate = r;
    } else {
      lo = mid;
      lo_rate = r;
    }
  }
  result.m_star = m_grid[hi];
  result.rate_at_star = hi_rate;
  result.predecessor = m_grid[lo];
  result.rate_at_predecessor = lo_rate;
  std::sort(result.probes.begin(), result.probes.end(),
            [](const PhasePoint& a, const PhasePoint& b) { return a.m < b.m; });
  return result;
}

std::vector<Eigen::Index> default_m_grid(Eigen::Index n, Eigen::Index s) {
  static const double factors[] = {2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 48, 64, 96, 128};
  std::set<Eigen::Index> grid;
  for (double f : factors) {
    const auto m = static_cast<Eigen::Index>(std::llround(f * static_cast<double>(s)));
    if (m >= 1 && m <= n) grid.insert(m);
  }
  grid.insert(n);
  return {grid.begin(), grid.end()};
}

double scaling_feature(Eigen::Index s, Eigen::Index n, ScalingFeature f) {
  const double ls = std::log(static_cast<double>(s));
  const double ln = std::log(static_cast<double>(n));
  const double base = static_cast<double>(s) * ls * ls * ln;
  return f == ScalingFeature::NewBound ? base : base * ln;
}

std::string scaling_to_csv(const std::vector<ScalingPoint>& points) {
  std::string out = "s,n,m_star,feature_new,feature_old\n";
  for (const auto& p : points)
    out += std::to_string(p.s) + ',' + std::to_string(p.n) + ',' +
           std::to_string(p.m_star) + ',' +
           csv::fmt(scaling_feature(p.s, p.n, ScalingFeature::NewBound)) + ',' +
           csv::fmt(scaling_feature(p.s, p.n, ScalingFeature::OldBound)) + '\n';
  return out;
}

ScalingFit fit_scaling(const std::vector<ScalingPoint>& points, ScalingFeature f) {
  if (points.size() < 2) throw std::invalid_argument("fit_scaling: need >= 2 points");
  double sff = 0.0, sfm = 0.0, smm = 0.0;
  double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
  for (const auto& p : points) {
    const double feat = scaling_feature(p.s, p.n, f);
    if (!(feat > 0.0))
      throw std::invalid_argument("fit_scaling: nonpositive feature value");
    const auto m = static_cast<double>(p.m_star);
    sff += feat * feat;
    sfm += feat * m;
    smm += m * m;
    fmin = std::min(fmin, feat);
    fmax = std::max(fmax, feat);
  }
  ScalingFit fit;
  fit.feature = f;
  fit.slope = sfm / sff;
  double rss = 0.0;
  for (const auto& p : points) {
    const double r = static_cast<double>(p.m_star) -
                     fit.slope * scaling_feature(p.s, p.n, f);
    rss += r * r;
  }
  fit.relative_residual = smm > 0 ? std::sqrt(rss / smm) : 0.0;
  fit.collinear_warning = fmax - fmin <= 1e-12 * fmax;
  return fit;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string Prop31Report::csv_header() {
  return "n,epsilon,trials,empirical_prob,theoretical_p0\n";
}

std::string Prop31Report::to_csv_row() const {
  return std::to_string(n) + ',' + csv::fmt(epsilon) + ',' + std::to_string(trials) +
         ',' + csv::fmt(empirical_prob) + ',' + csv::fmt(theoretical_p0) + '\n';
}

Prop31Report prop31_experiment(Eigen::Index n, double epsilon, std::size_t trials,
                               GeneratorKind kind, std::uint64_t master_seed,
                               unsigned threads) {
  if (n < 1) throw std::invalid_argument("prop31: n must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("prop31: epsilon must be positive");
  if (kind != GeneratorKind::Rademacher && kind != GeneratorKind::Gaussian)
    throw std::invalid_argument(
        "prop31: only Rademacher and Gaussian generators are covered");

  GeneratorSpec spec;
  spec.kind = kind;

  // x = (1,...,1)/sqrt(n); (1/n)||A_xi x||^2 collapses to zeta^2 with
  // zeta = sum(xi)/sqrt(n). The matvec route re-derives it on sampled
  // trials as a cross-check of the operator path.
  const double sqn = std::sqrt(static_cast<double>(n));
  Vec ones = Vec::Constant(n, 1.0 / sqn);

  std::vector<double> zeta(trials);
  std::vector<double> crosscheck(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = make_engine(split_seed(master_seed, t));
    const RealVec xi = sample_generator(spec, n, rng);
    zeta[t] = xi.sum() / sqn;
    if (t % 1000 == 0) {
      CirculantOperator A(xi);
      const double via_matvec = A.apply(ones).squaredNorm() / static_cast<double>(n);
      crosscheck[t] = std::abs(via_matvec - zeta[t] * zeta[t]);
    }
  });

  Prop31Report rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.trials = trials;
  // limiting probability of {zeta_n^2 < epsilon} with zeta_n -> N(0,1)
  rep.theoretical_p0 = 2.0 * std_normal_cdf(std::sqrt(epsilon)) - 1.0;
  if (trials > 0) {
    std::size_t hits = 0;
    double sum = 0.0, sumsq = 0.0, maxdiff = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      if (zeta[t] * zeta[t] < epsilon) ++hits;
      sum += zeta[t];
      sumsq += zeta[t] * zeta[t];
      maxdiff = std::max(maxdiff, crosscheck[t]);
    }
    const auto tn = static_cast<double>(trials);
    rep.empirical_prob = static_cast<double>(hits) / tn;
    rep.zeta_mean = sum / tn;
    rep.zeta_variance = sumsq / tn - rep.zeta_mean * rep.zeta_mean;
    rep.max_crosscheck_diff = maxdiff;
  }
  return rep;
}

std::string Cor23Summary::csv_header() {
  return "n,s,trials,mean_energy,mean_defect,max_defect,p99_defect\n";
}

std::string Cor23Summary::to_csv_row() const {
  return std::to_string(n) + ',' + std::to_string(s) + ',' + std::to_string(trials) +
         ',' + csv::fmt(mean_energy) + ',' + csv::fmt(mean_defect) + ',' +
         csv::fmt(max_defect) + ',' + csv::fmt(p99_defect) + '\n';
}

Cor23Summary corollary23_experiment(Eigen::Index n, Eigen::Index s,
                                    std::size_t trials, const GeneratorSpec& spec,
                                    std::uint64_t master_seed, unsigned threads) {
  if (s < 1 || s > n) throw std::invalid_argument("cor23: requires 1 <= s <= n");
  if (trials < 1) throw std::invalid_argument("cor23: trials must be >= 1");

  std::vector<double> energy(trials), defect(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = make_engine(split_seed(master_seed, t));
    const RealVec xi = sample_generator(spec, n, rng);
    const Vec x = planted_sparse(n, s, rng, /*unit_norm=*/true);
    CirculantOperator A(xi);
    defect[t] = isometry_defect(A, x);
    energy[t] = A.apply(x).squaredNorm() / static_cast<double>(n);
  });

  Cor23Summary sum;
  sum.n = n;
  sum.s = s;
  sum.trials = trials;
  sum.mean_energy = 0.0;
  sum.mean_defect = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    sum.mean_energy += energy[t];
    sum.mean_defect += defect[t];
    sum.max_defect = std::max(sum.max_defect, defect[t]);
  }
  sum.mean_energy /= static_cast<double>(trials);
  sum.mean_defect /= static_cast<double>(trials);
  std::vector<double> sorted = defect;
  std::sort(sorted.begin(), sorted.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(trials))) - 1;
  sum.p99_defect = sorted[std::min(idx, trials - 1)];
  return sum;
}

double sandwich_experiment(Eigen::Index n, Eigen::Index m, std::size_t trials,
                           const SandwichParams& params, const GeneratorSpec& spec,
                           std::uint64_t master_seed, unsigned threads,
                           Eigen::Index sparsity) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("sandwich: trials must be >= 1");
  if (sparsity <= 0) sparsity = std::max<Eigen::Index>(1, n / 8);

  std::vector<char> inside(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = make_engine(split_seed(master_seed, t));
    const RealVec xi = sample_generator(spec, n, rng);
    const SampleSet omega =
        sample_omega(n, m, OmegaMode::MultisetWithReplacement, rng);
    const Vec x = planted_sparse(n, sparsity, rng, /*unit_norm=*/true);
    CirculantOperator A(xi);
    inside[t] = sandwich_bounds(A, omega, x, params).contained() ? 1 : 0;
  });
  std::size_t hits = 0;
  for (char c : inside) hits += c;
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace circs
