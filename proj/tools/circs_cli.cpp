#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "circs/csv.hpp"
#include "circs/experiments.hpp"
#include "circs/generator.hpp"
#include "circs/operators.hpp"
#include "circs/recovery.hpp"
#include "circs/rip.hpp"
#include "circs/rng.hpp"

namespace {

constexpr const char* kVersion = "circs 1.0.0";

using namespace circs;

void emit(const std::string& out_path, const std::string& config_line,
          const std::string& body) {
  std::string content = "# " + config_line + "\n" + body;
  if (out_path.empty())
    std::cout << content;
  else
    csv::write_file(out_path, content);
}

GeneratorSpec make_spec(const std::string& kind, double L) {
  GeneratorSpec spec;
  spec.kind = generator_kind_from_string(kind);
  if (spec.kind == GeneratorKind::TruncatedSubgaussian)
    spec = GeneratorSpec::truncated_subgaussian(L);
  else if (spec.kind == GeneratorKind::Rademacher)
    spec = GeneratorSpec::rademacher();
  else if (spec.kind == GeneratorKind::UniformSym)
    spec = GeneratorSpec::uniform_sym();
  else
    spec = GeneratorSpec::gaussian();
  return spec;
}

std::string real_row(const Vec& v) {
  RealVec r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = v[i].real();
  return csv::vector_to_csv(r);
}

std::vector<Eigen::Index> parse_index_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::string cell;
  std::istringstream ss(text);
  while (std::getline(ss, cell, ',')) out.push_back(std::stoll(cell));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"structured compressed-sensing toolkit"};
  app.set_config("--config", "", "key=value config file; flags take precedence");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // shared state
  std::string generator = "rademacher";
  double subgauss_L = 1.0;
  std::uint64_t seed = 0;
  std::string out_path;
  unsigned threads = 0;
  long long n = 0, m = 0, s = 0;
  std::string omega_mode = "multiset";

  auto add_common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
    sub->add_option("--threads", threads, "worker threads, 0 = auto")
        ->default_val(0);
    auto* so = sub->add_option("--seed", seed, "master seed (all randomness)");
    if (needs_seed) so->required();
  };
  auto add_generator = [&](CLI::App* sub) {
    sub->add_option("--generator", generator,
                    "rademacher|uniform|gaussian|truncated")
        ->default_val("rademacher");
    sub->add_option("--L", subgauss_L, "subgaussian parameter for truncated")
        ->default_val(1.0);
  };

  // gen
  auto* gen = app.add_subcommand("gen", "sample a generator vector");
  gen->add_option("--n", n, "length")->required()->check(CLI::PositiveNumber);
  add_generator(gen);
  add_common(gen, true);

  // matvec
  auto* mv = app.add_subcommand("matvec", "apply a structured operator to a vector");
  std::string op_kind = "circulant", xi_path, x_path;
  bool adjoint = false;
  mv->add_option("--op", op_kind, "circulant|toeplitz|hankel")->default_val("circulant");
  mv->add_option("--xi", xi_path, "generator vector CSV")->required();
  mv->add_option("--x", x_path, "input vector CSV")->required();
  mv->add_flag("--adjoint", adjoint, "apply the adjoint");
  add_common(mv, false);

  // rip
  auto* rip = app.add_subcommand("rip", "RIP constant of a partial circulant");
  bool mc = false;
  long long trials = 0;
  rip->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  rip->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  rip->add_option("--s", s)->required()->check(CLI::PositiveNumber);
  rip->add_option("--omega", omega_mode, "multiset|subset")->default_val("multiset");
  rip->add_flag("--mc", mc, "Monte-Carlo lower bound instead of exact enumeration");
  rip->add_option("--trials", trials, "supports sampled in --mc mode")->default_val(1000);
  add_generator(rip);
  add_common(rip, true);

  // recover
  auto* rec = app.add_subcommand("recover", "planted-signal recovery, one instance");
  std::string solver_name = "omp";
  double tol = 1e-6, success_tol = 1e-4, penalty = 1.0;
  long long max_iters = 1000;
  double step = 0.0;
  rec->add_option("--solver", solver_name, "bp|omp|cosamp|iht|htp")->default_val("omp");
  rec->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  rec->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  rec->add_option("--s", s)->required()->check(CLI::PositiveNumber);
  rec->add_option("--omega", omega_mode)->default_val("multiset");
  rec->add_option("--tol", tol, "relative residual tolerance")->default_val(1e-6);
  rec->add_option("--max-iters", max_iters)->default_val(1000);
  rec->add_option("--step", step, "explicit step size for iht/htp");
  rec->add_option("--penalty", penalty, "basis-pursuit threshold scale")->default_val(1.0);
  add_generator(rec);
  add_common(rec, true);

  // phase
  auto* ph = app.add_subcommand("phase", "success-rate curve over m");
  long long m_min = 0, m_max = 0, m_step = 1;
  ph->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  ph->add_option("--s", s)->required()->check(CLI::PositiveNumber);
  ph->add_option("--solver", solver_name)->default_val("omp");
  ph->add_option("--omega", omega_mode)->default_val("multiset");
  ph->add_option("--m-min", m_min)->required()->check(CLI::PositiveNumber);
  ph->add_option("--m-max", m_max)->required()->check(CLI::PositiveNumber);
  ph->add_option("--m-step", m_step)->default_val(1)->check(CLI::PositiveNumber);
  ph->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  ph->add_option("--success-tol", success_tol)->default_val(1e-4);
  add_generator(ph);
  add_common(ph, true);

  // prop31
  auto* p31 = app.add_subcommand("prop31", "limiting small-energy probability");
  double eps = 0.25;
  p31->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  p31->add_option("--eps", eps)->required();
  p31->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  add_generator(p31);
  add_common(p31, true);

  // cor23
  auto* c23 = app.add_subcommand("cor23", "isometry-defect concentration");
  c23->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  c23->add_option("--s", s)->required()->check(CLI::PositiveNumber);
  c23->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  add_generator(c23);
  add_common(c23, true);

  // sandwich
  auto* sw = app.add_subcommand("sandwich", "two-sided subsampling bound frequency");
  double eta = 0.25;
  long long sparsity = 0;
  sw->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  sw->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  sw->add_option("--eps", eps)->default_val(0.25);
  sw->add_option("--eta", eta)->default_val(0.25);
  sw->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  sw->add_option("--sparsity", sparsity, "sparsity of test vectors (0 = n/8)");
  add_generator(sw);
  add_common(sw, true);

  // scaling
  auto* sc = app.add_subcommand("scaling", "minimal-m grid scan and scaling fit");
  std::string s_list = "4,8,16", n_list = "256,1024,4096";
  double target = 0.9;
  sc->add_option("--s-list", s_list, "comma-separated sparsities")->default_val("4,8,16");
  sc->add_option("--n-list", n_list, "comma-separated dimensions")
      ->default_val("256,1024,4096");
  sc->add_option("--solver", solver_name)->default_val("omp");
  sc->add_option("--trials", trials, "trials per probe")->required();
  sc->add_option("--target", target, "target success rate")->default_val(0.9);
  sc->add_option("--success-tol", success_tol)->default_val(1e-4);
  add_generator(sc);
  add_common(sc, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 0 covers --help / --version
  }

  const GeneratorSpec spec = make_spec(generator, subgauss_L);

  if (gen->parsed()) {
    auto rng = make_engine(seed);
    RealVec xi = sample_generator(spec, n, rng);
    emit(out_path,
         "gen generator=" + generator + " n=" + std::to_string(n) +
             " seed=" + std::to_string(seed),
         csv::vector_to_csv(xi));
    return 0;
  }

  if (mv->parsed()) {
    RealVec xi = csv::vector_from_csv(csv::read_file(xi_path));
    Vec x = csv::vector_from_csv(csv::read_file(x_path)).cast<std::complex<double>>();
    std::unique_ptr<LinearOperator> op;
    if (op_kind == "circulant") {
      op = std::make_unique<CirculantOperator>(xi);
    } else if (op_kind == "toeplitz") {
      op = std::make_unique<ToeplitzOperator>(xi, (xi.size() + 1) / 2);
    } else if (op_kind == "hankel") {
      op = std::make_unique<HankelOperator>(ToeplitzOperator(xi, (xi.size() + 1) / 2));
    } else {
      throw std::invalid_argument("unknown operator kind: " + op_kind);
    }
    Vec y = adjoint ? op->apply_adjoint(x) : op->apply(x);
    emit(out_path,
         "matvec op=" + op_kind + " adjoint=" + (adjoint ? "1" : "0"),
         real_row(y));
    return 0;
  }

  if (rip->parsed()) {
    auto rng = make_engine(seed);
    RealVec xi = sample_generator(spec, n, rng);
    SampleSet omega = sample_omega(n, m, omega_mode_from_string(omega_mode), rng);
    SubsampledOperator phi = make_partial_circulant(xi, omega);
    RipReport report = mc ? mc_rip_lower_bound(phi, s, trials, rng)
                          : exact_rip_constant(phi, s);
    emit(out_path,
         "rip n=" + std::to_string(n) + " m=" + std::to_string(m) +
             " s=" + std::to_string(s) + " generator=" + generator +
             " omega=" + omega_mode + " mc=" + (mc ? "1" : "0") +
             " seed=" + std::to_string(seed),
         RipReport::csv_header() + report.to_csv_row());
    return 0;
  }

  auto solver_cfg = [&] {
    SolverConfig cfg;
    cfg.max_iters = static_cast<int>(max_iters);
    cfg.tol_residual = tol;
    cfg.bp_penalty = penalty;
    if (step > 0) cfg.step_size = step;
    return cfg;
  };

  if (rec->parsed()) {
    auto rng = make_engine(seed);
    RealVec xi = sample_generator(spec, n, rng);
    SampleSet omega = sample_omega(n, m, omega_mode_from_string(omega_mode), rng);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Eigen::Index> pool(n);
    for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
    Vec x0 = Vec::Zero(n);
    for (Eigen::Index i = 0; i < s; ++i) {
      std::uniform_int_distribution<Eigen::Index> u(i, n - 1);
      std::swap(pool[i], pool[u(rng)]);
      x0[pool[i]] = g(rng);
    }
    SubsampledOperator phi = make_partial_circulant(xi, omega);
    Vec y = phi.apply(x0);
    Solver which = solver_from_string(solver_name);
    RecoveryResult r = run_solver(which, phi, y, s, solver_cfg());
    emit(out_path,
         "recover solver=" + solver_name + " n=" + std::to_string(n) +
             " m=" + std::to_string(m) + " s=" + std::to_string(s) +
             " generator=" + generator + " seed=" + std::to_string(seed),
         RecoveryResult::csv_header() + r.to_csv_row(which, m, s, &x0));
    return 0;
  }

  auto experiment_cfg = [&] {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.s = s;
    cfg.m = std::max<long long>(m, 1);
    cfg.generator = spec;
    cfg.omega_mode = omega_mode_from_string(omega_mode);
    cfg.solver = solver_from_string(solver_name);
    cfg.trials = static_cast<std::size_t>(trials);
    cfg.master_seed = seed;
    cfg.success_tol = success_tol;
    cfg.threads = threads;
    return cfg;
  };

  if (ph->parsed()) {
    std::vector<Eigen::Index> ms;
    for (long long v = m_min; v <= m_max; v += m_step) ms.push_back(v);
    PhaseCurve curve = phase_scan(experiment_cfg(), ms);
    emit(out_path,
         "phase n=" + std::to_string(n) + " s=" + std::to_string(s) + " solver=" +
             solver_name + " generator=" + generator + " m_min=" +
             std::to_string(m_min) + " m_max=" + std::to_string(m_max) + " m_step=" +
             std::to_string(m_step) + " trials=" + std::to_string(trials) +
             " seed=" + std::to_string(seed),
         curve.to_csv());
    return 0;
  }

  if (p31->parsed()) {
    Prop31Report rep = prop31_experiment(n, eps, trials,
                                         generator_kind_from_string(generator),
                                         seed, threads);
    emit(out_path,
         "prop31 n=" + std::to_string(n) + " eps=" + csv::fmt(eps) + " trials=" +
             std::to_string(trials) + " generator=" + generator +
             " seed=" + std::to_string(seed),
         Prop31Report::csv_header() + rep.to_csv_row());
    return 0;
  }

  if (c23->parsed()) {
    Cor23Summary sum = corollary23_experiment(n, s, trials, spec, seed, threads);
    emit(out_path,
         "cor23 n=" + std::to_string(n) + " s=" + std::to_string(s) + " trials=" +
             std::to_string(trials) + " generator=" + generator +
             " seed=" + std::to_string(seed),
         Cor23Summary::csv_header() + sum.to_csv_row());
    return 0;
  }

  if (sw->parsed()) {
    SandwichParams params{eps, eta};
    double freq = sandwich_experiment(n, m, trials, params, spec, seed, threads,
                                      sparsity);
    emit(out_path,
         "sandwich n=" + std::to_string(n) + " m=" + std::to_string(m) + " eps=" +
             csv::fmt(eps) + " eta=" + csv::fmt(eta) + " trials=" +
             std::to_string(trials) + " generator=" + generator +
             " seed=" + std::to_string(seed),
         "n,m,eps,eta,trials,containment_frequency\n" + std::to_string(n) + ',' +
             std::to_string(m) + ',' + csv::fmt(eps) + ',' + csv::fmt(eta) + ',' +
             std::to_string(trials) + ',' + csv::fmt(freq) + '\n');
    return 0;
  }

  if (sc->parsed()) {
    std::vector<ScalingPoint> points;
    ExperimentConfig cfg = experiment_cfg();
    for (Eigen::Index sv : parse_index_list(s_list)) {
      for (Eigen::Index nv : parse_index_list(n_list)) {
        ExperimentConfig c = cfg;
        c.s = sv;
        c.n = nv;
        c.m = 1;
        c.master_seed = split_seed(seed, static_cast<std::uint64_t>(sv) * 1000003u +
                                             static_cast<std::uint64_t>(nv));
        FindMinMResult r = find_min_m(c, default_m_grid(nv, sv), target);
        points.push_back({sv, nv, r.m_star});
      }
    }
    ScalingFit fit_new = fit_scaling(points, ScalingFeature::NewBound);
    ScalingFit fit_old = fit_scaling(points, ScalingFeature::OldBound);
    emit(out_path,
         "scaling s_list=" + s_list + " n_list=" + n_list + " solver=" + solver_name +
             " trials=" + std::to_string(trials) + " target=" + csv::fmt(target) +
             " generator=" + generator + " seed=" + std::to_string(seed),
         scaling_to_csv(points));
    std::cerr << "fit new_bound slope=" << csv::fmt(fit_new.slope)
              << " rel_residual=" << csv::fmt(fit_new.relative_residual) << "\n"
              << "fit old_bound slope=" << csv::fmt(fit_old.slope)
              << " rel_residual=" << csv::fmt(fit_old.relative_residual) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
