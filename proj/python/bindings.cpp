#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "circs/experiments.hpp"
#include "circs/generator.hpp"
#include "circs/operators.hpp"
#include "circs/recovery.hpp"
#include "circs/rip.hpp"
#include "circs/rng.hpp"

namespace py = pybind11;
using namespace circs;

namespace {

GeneratorSpec spec_from_name(const std::string& name, double L) {
  switch (generator_kind_from_string(name)) {
    case GeneratorKind::Rademacher: return GeneratorSpec::rademacher();
    case GeneratorKind::UniformSym: return GeneratorSpec::uniform_sym();
    case GeneratorKind::Gaussian: return GeneratorSpec::gaussian();
    case GeneratorKind::TruncatedSubgaussian:
      return GeneratorSpec::truncated_subgaussian(L);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

PYBIND11_MODULE(_circs, m) {
  m.doc() = "structured compressed sensing: circulant/Toeplitz/Hankel operators, "
            "RIP analysis, sparse recovery";

  py::class_<LinearOperator, std::shared_ptr<LinearOperator>>(m, "LinearOperator")
      .def_property_readonly("rows", &LinearOperator::rows)
      .def_property_readonly("cols", &LinearOperator::cols)
      .def("apply", &LinearOperator::apply, py::arg("x"))
      .def("apply_adjoint", &LinearOperator::apply_adjoint, py::arg("y"))
      .def("materialize", &LinearOperator::materialize,
           py::arg("cap") = kDenseCap);

  py::class_<CirculantOperator, LinearOperator,
             std::shared_ptr<CirculantOperator>>(m, "CirculantOperator")
      .def(py::init<RealVec>(), py::arg("xi"))
      .def_property_readonly("generator", &CirculantOperator::generator);

  py::class_<ToeplitzOperator, LinearOperator,
             std::shared_ptr<ToeplitzOperator>>(m, "ToeplitzOperator")
      .def(py::init<RealVec, Eigen::Index>(), py::arg("xi"), py::arg("n"))
      .def_property_readonly("generator", &ToeplitzOperator::generator);

  py::class_<HankelOperator, LinearOperator, std::shared_ptr<HankelOperator>>(
      m, "HankelOperator")
      .def(py::init([](const RealVec& xi, Eigen::Index n) {
             return HankelOperator(ToeplitzOperator(xi, n));
           }),
           py::arg("xi"), py::arg("n"));

  py::class_<SampleSet>(m, "SampleSet")
      .def(py::init([](std::vector<Eigen::Index> indices, const std::string& mode) {
             return SampleSet{std::move(indices), omega_mode_from_string(mode)};
           }),
           py::arg("indices"), py::arg("mode") = "fixed")
      .def_readonly("indices", &SampleSet::indices)
      .def("__len__", &SampleSet::size);

  py::class_<SubsampledOperator, LinearOperator,
             std::shared_ptr<SubsampledOperator>>(m, "SubsampledOperator")
      .def_property_readonly("scale", &SubsampledOperator::scale)
      .def_property_readonly("omega", &SubsampledOperator::omega);

  m.def(
      "sample_generator",
      [](const std::string& kind, Eigen::Index n, std::uint64_t seed, double L) {
        auto rng = make_engine(seed);
        return sample_generator(spec_from_name(kind, L), n, rng);
      },
      py::arg("kind"), py::arg("n"), py::arg("seed"), py::arg("L") = 1.0);

  m.def(
      "sample_omega",
      [](Eigen::Index n, Eigen::Index m_count, const std::string& mode,
         std::uint64_t seed) {
        auto rng = make_engine(seed);
        return sample_omega(n, m_count, omega_mode_from_string(mode), rng);
      },
      py::arg("n"), py::arg("m"), py::arg("mode"), py::arg("seed"));

  m.def(
      "subsample",
      [](std::shared_ptr<LinearOperator> base, const SampleSet& omega) {
        return std::make_shared<SubsampledOperator>(std::move(base), omega);
      },
      py::arg("base"), py::arg("omega"));

  m.def(
      "partial_circulant",
      [](const RealVec& xi, const SampleSet& omega) {
        return std::make_shared<SubsampledOperator>(
            std::make_shared<CirculantOperator>(xi), omega);
      },
      py::arg("xi"), py::arg("omega"));

  // --- RIP analysis ---------------------------------------------------------

  py::class_<RipReport>(m, "RipReport")
      .def_readonly("n", &RipReport::n)
      .def_readonly("m", &RipReport::m)
      .def_readonly("s", &RipReport::s)
      .def_readonly("delta", &RipReport::delta)
      .def_readonly("worst_support", &RipReport::worst_support)
      .def_readonly("sigma_min_sq", &RipReport::sigma_min_sq)
      .def_readonly("sigma_max_sq", &RipReport::sigma_max_sq)
      .def_readonly("supports_examined", &RipReport::supports_examined)
      .def_property_readonly("exact",
                             [](const RipReport& r) { return r.kind == RipKind::Exact; })
      .def("rip_violated", &RipReport::rip_violated)
      .def("to_csv_row", &RipReport::to_csv_row);

  m.def("gram_submatrix_extremes", &gram_submatrix_extremes, py::arg("phi"),
        py::arg("support"));
  m.def("exact_rip_constant", &exact_rip_constant, py::arg("phi"), py::arg("s"),
        py::arg("cap") = kEnumerationCap);
  m.def(
      "mc_rip_lower_bound",
      [](const LinearOperator& phi, Eigen::Index s, std::size_t trials,
         std::uint64_t seed) {
        auto rng = make_engine(seed);
        return mc_rip_lower_bound(phi, s, trials, rng);
      },
      py::arg("phi"), py::arg("s"), py::arg("trials"), py::arg("seed"));
  m.def("recovery_condition_ok", &recovery_condition_ok, py::arg("delta_ts"),
        py::arg("t"));
  m.def("required_m_new", &required_m_new, py::arg("s"), py::arg("n"),
        py::arg("delta"), py::arg("C") = 1.0);
  m.def("required_m_old", &required_m_old, py::arg("s"), py::arg("n"),
        py::arg("delta"), py::arg("C") = 1.0);
  m.def(
      "sandwich_bounds",
      [](const LinearOperator& M, const SampleSet& omega, const Vec& x, double eps,
         double eta) {
        SandwichBounds b = sandwich_bounds(M, omega, x, {eps, eta});
        return std::make_tuple(b.lower, b.middle, b.upper);
      },
      py::arg("M"), py::arg("omega"), py::arg("x"), py::arg("eps"), py::arg("eta"));
  m.def("isometry_defect", &isometry_defect, py::arg("A"), py::arg("x"));

  // --- recovery ---------------------------------------------------------

  py::class_<RecoveryResult>(m, "RecoveryResult")
      .def_readonly("x_hat", &RecoveryResult::x_hat)
      .def_readonly("support", &RecoveryResult::support)
      .def_readonly("residual", &RecoveryResult::residual)
      .def_readonly("iterations", &RecoveryResult::iterations)
      .def_readonly("converged", &RecoveryResult::converged);

  m.def("hard_threshold", &hard_threshold, py::arg("x"), py::arg("s"));
  m.def(
      "recover",
      [](const std::string& solver, const LinearOperator& phi, const Vec& y,
         Eigen::Index s, int max_iters, double tol) {
        SolverConfig cfg;
        cfg.max_iters = max_iters;
        cfg.tol_residual = tol;
        return run_solver(solver_from_string(solver), phi, y, s, cfg);
      },
      py::arg("solver"), py::arg("phi"), py::arg("y"), py::arg("s"),
      py::arg("max_iters") = 1000, py::arg("tol") = 1e-6);

  // --- experiments ------------------------------------------------------

  m.def(
      "prop31_experiment",
      [](Eigen::Index n, double eps, std::size_t trials, const std::string& kind,
         std::uint64_t seed, unsigned threads) {
        Prop31Report r = prop31_experiment(n, eps, trials,
                                           generator_kind_from_string(kind), seed,
                                           threads);
        py::dict d;
        d["n"] = r.n;
        d["epsilon"] = r.epsilon;
        d["trials"] = r.trials;
        d["empirical_prob"] = r.empirical_prob;
        d["theoretical_p0"] = r.theoretical_p0;
        d["zeta_mean"] = r.zeta_mean;
        d["zeta_variance"] = r.zeta_variance;
        return d;
      },
      py::arg("n"), py::arg("eps"), py::arg("trials"), py::arg("kind"),
      py::arg("seed"), py::arg("threads") = 0);

  m.def(
      "corollary23_experiment",
      [](Eigen::Index n, Eigen::Index s, std::size_t trials, const std::string& kind,
         std::uint64_t seed, unsigned threads) {
        Cor23Summary r = corollary23_experiment(n, s, trials,
                                                spec_from_name(kind, 1.0), seed,
                                                threads);
        py::dict d;
        d["mean_energy"] = r.mean_energy;
        d["mean_defect"] = r.mean_defect;
        d["max_defect"] = r.max_defect;
        d["p99_defect"] = r.p99_defect;
        return d;
      },
      py::arg("n"), py::arg("s"), py::arg("trials"), py::arg("kind"),
      py::arg("seed"), py::arg("threads") = 0);

  m.def(
      "sandwich_experiment",
      [](Eigen::Index n, Eigen::Index m_count, std::size_t trials, double eps,
         double eta, const std::string& kind, std::uint64_t seed, unsigned threads) {
        return sandwich_experiment(n, m_count, trials, {eps, eta},
                                   spec_from_name(kind, 1.0), seed, threads);
      },
      py::arg("n"), py::arg("m"), py::arg("trials"), py::arg("eps"), py::arg("eta"),
      py::arg("kind"), py::arg("seed"), py::arg("threads") = 0);

  m.def(
      "run_recovery_trials",
      [](Eigen::Index n, Eigen::Index s, Eigen::Index m_count,
         const std::string& solver, const std::string& kind, std::size_t trials,
         std::uint64_t seed, double success_tol, unsigned threads) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.s = s;
        cfg.m = m_count;
        cfg.generator = spec_from_name(kind, 1.0);
        cfg.solver = solver_from_string(solver);
        cfg.trials = trials;
        cfg.master_seed = seed;
        cfg.success_tol = success_tol;
        cfg.threads = threads;
        auto recs = run_recovery_trials(cfg);
        py::list out;
        for (const auto& r : recs) {
          py::dict d;
          d["trial_index"] = r.trial_index;
          d["success"] = r.success;
          d["rel_error"] = r.rel_error;
          d["residual"] = r.residual;
          d["iterations"] = r.iterations;
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("s"), py::arg("m"), py::arg("solver"), py::arg("kind"),
      py::arg("trials"), py::arg("seed"), py::arg("success_tol") = 1e-4,
      py::arg("threads") = 0);
}
