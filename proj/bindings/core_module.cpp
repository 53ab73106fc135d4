#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "sojourn/excursion.hpp"
#include "sojourn/functionals.hpp"
#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/margins.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/oracle.hpp"
#include "sojourn/processes.hpp"
#include "sojourn/rng.hpp"
#include "sojourn/shortfall.hpp"
#include "sojourn/sojourn_fi.hpp"
#include "sojourn/stats.hpp"
#include "sojourn/validation.hpp"
#include "sojourn/version.hpp"

namespace py = pybind11;
using namespace sojourn;

namespace {

ExecPolicy exec_of(int workers) { return ExecPolicy{workers}; }

py::array_t<double> ensemble_to_numpy(const PathEnsemble& e) {
  const auto n = static_cast<py::ssize_t>(e.n_paths());
  const auto d = static_cast<py::ssize_t>(e.grid().size());
  py::array_t<double> out({n, d});
  std::copy(e.values().begin(), e.values().end(), out.mutable_data());
  return out;
}

KernelShape shape_of(const std::string& name) {
  if (name == "triangular") return KernelShape::Triangular;
  if (name == "rectangular") return KernelShape::Rectangular;
  throw std::invalid_argument("kernel shape must be 'triangular' or 'rectangular'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte-Carlo laboratory for sojourn times, fragility indices, expected "
            "shortfall and excursion laws of threshold exceedances";
  m.attr("__version__") = kVersion;

  py::register_exception<floor_error>(m, "FloorError");

  py::class_<Grid>(m, "Grid")
      .def(py::init<int>(), py::arg("n"))
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("mesh", &Grid::mesh)
      .def("point", &Grid::point, py::arg("j"))
      .def("points",
           [](const Grid& g) { return std::vector<double>(g.points().begin(), g.points().end()); })
      .def("nearest_index", &Grid::nearest_index, py::arg("t"))
      .def("index_of", &Grid::index_of, py::arg("t"), py::arg("tol") = 1e-9)
      .def("__len__", &Grid::size)
      .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; })
      .def("__repr__",
           [](const Grid& g) { return "Grid(n=" + std::to_string(g.size()) + ")"; });

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init<Grid, std::vector<double>>(), py::arg("grid"), py::arg("values"))
      .def_static("constant", &GridFunction::constant, py::arg("grid"), py::arg("value"))
      .def_property_readonly("grid", &GridFunction::grid)
      .def("values",
           [](const GridFunction& f) {
             return std::vector<double>(f.values().begin(), f.values().end());
           })
      .def("sup_abs", &GridFunction::sup_abs)
      .def("__getitem__", [](const GridFunction& f, int j) {
        if (j < 0 || j >= f.size()) throw py::index_error();
        return f[j];
      })
      .def("__len__", &GridFunction::size);

  py::class_<MCEstimate>(m, "MCEstimate")
      .def_readonly("mean", &MCEstimate::mean)
      .def_readonly("std_error", &MCEstimate::std_error)
      .def_readonly("n_samples", &MCEstimate::n_samples)
      .def("__repr__", [](const MCEstimate& e) {
        return "MCEstimate(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) +
               ", n_samples=" + std::to_string(e.n_samples) + ")";
      });

  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("substream", &RandomStream::substream, py::arg("index"))
      .def("uniform01", &RandomStream::uniform01)
      .def("exponential", &RandomStream::exponential)
      .def_property_readonly("key", &RandomStream::key)
      .def_static("from_key", &RandomStream::from_key, py::arg("key"));

  // GeneratorSpec is a std::variant; the stl caster bridges it, so the
  // alternatives are the python-visible types
  py::class_<ConstantGenerator>(m, "ConstantGenerator")
      .def(py::init<>())
      .def("__repr__", [](const ConstantGenerator& g) { return describe(GeneratorSpec(g)); });
  py::class_<MovingKernelGenerator>(m, "MovingKernelGenerator")
      .def_readonly("width", &MovingKernelGenerator::width)
      .def("__repr__",
           [](const MovingKernelGenerator& g) { return describe(GeneratorSpec(g)); });
  py::class_<DiscreteInterpolatedGenerator>(m, "DiscreteInterpolatedGenerator")
      .def_readonly("base", &DiscreteInterpolatedGenerator::base)
      .def("__repr__",
           [](const DiscreteInterpolatedGenerator& g) { return describe(GeneratorSpec(g)); });
  py::class_<LogisticFrechetGenerator>(m, "LogisticFrechetGenerator")
      .def_readonly("dim", &LogisticFrechetGenerator::dim)
      .def_readonly("exponent", &LogisticFrechetGenerator::exponent)
      .def("__repr__",
           [](const LogisticFrechetGenerator& g) { return describe(GeneratorSpec(g)); });
  m.def("constant_generator", [] { return GeneratorSpec(ConstantGenerator{}); });
  m.def(
      "moving_kernel_generator",
      [](const std::string& shape, double width) {
        GeneratorSpec s = MovingKernelGenerator{shape_of(shape), width};
        validate(s);
        return s;
      },
      py::arg("shape") = "triangular", py::arg("width") = 0.25);
  m.def(
      "discrete_generator",
      [](const std::vector<double>& base) {
        GeneratorSpec s = DiscreteInterpolatedGenerator{base};
        validate(s);
        return s;
      },
      py::arg("base"));
  m.def(
      "logistic_generator",
      [](int dim, double exponent) {
        GeneratorSpec s = LogisticFrechetGenerator{dim, exponent};
        validate(s);
        return s;
      },
      py::arg("dim") = 4, py::arg("exponent") = 2.0);
  m.def("parse_generator", &parse_generator, py::arg("text"));
  m.def("describe", &describe, py::arg("spec"));
  m.def("analytic_constant", &analytic_constant, py::arg("spec"));
  m.def("is_bounded", &is_bounded, py::arg("spec"));

  m.def(
      "sample_generator_path",
      [](const GeneratorSpec& spec, const Grid& grid, RandomStream& rs) {
        const auto f = sample_generator_path(spec, grid, rs);
        return std::vector<double>(f.values().begin(), f.values().end());
      },
      py::arg("spec"), py::arg("grid"), py::arg("stream"));
  m.def(
      "generator_constant_estimate",
      [](const GeneratorSpec& spec, const Grid& grid, std::int64_t n_samples, RandomStream stream,
         int workers) {
        return generator_constant_estimate(spec, grid, n_samples, stream, exec_of(workers));
      },
      py::arg("spec"), py::arg("grid"), py::arg("n_samples"), py::arg("stream"),
      py::arg("workers") = 1);
  m.def(
      "dnorm_estimate",
      [](const GeneratorSpec& spec, const GridFunction& f, std::int64_t n_samples,
         RandomStream stream, int workers) {
        return dnorm_estimate(spec, f, n_samples, stream, exec_of(workers));
      },
      py::arg("spec"), py::arg("f"), py::arg("n_samples"), py::arg("stream"),
      py::arg("workers") = 1);
  m.def(
      "min_functional_estimate",
      [](const GeneratorSpec& spec, const GridFunction& f, double a, double b,
         std::int64_t n_samples, RandomStream stream, int workers) {
        return min_functional_estimate(spec, f, a, b, n_samples, stream, exec_of(workers));
      },
      py::arg("spec"), py::arg("f"), py::arg("a"), py::arg("b"), py::arg("n_samples"),
      py::arg("stream"), py::arg("workers") = 1);
  m.def(
      "fidis_evd_value",
      [](const GeneratorSpec& spec, const Grid& grid, const std::vector<double>& times,
         const std::vector<double>& x, std::int64_t n_samples, RandomStream stream, int workers) {
        return fidis_evd_value(spec, grid, times, x, n_samples, stream, exec_of(workers));
      },
      py::arg("spec"), py::arg("grid"), py::arg("times"), py::arg("x"), py::arg("n_samples"),
      py::arg("stream"), py::arg("workers") = 1);

  py::class_<MarginSpec>(m, "MarginSpec")
      .def_static("uniform01", &MarginSpec::uniform01)
      .def_static("neg_exponential", &MarginSpec::neg_exponential)
      .def_static("std_pareto_tail", &MarginSpec::std_pareto_tail, py::arg("lower"))
      .def_static("std_gpp_tail", &MarginSpec::std_gpp_tail)
      .def_static("from_name", &MarginSpec::from_name, py::arg("name"))
      .def_property_readonly("name", [](const MarginSpec& s) { return std::string(s.name()); })
      .def("cdf", &MarginSpec::cdf, py::arg("x"))
      .def("quantile", &MarginSpec::quantile, py::arg("q"))
      .def("upper_endpoint", &MarginSpec::upper_endpoint)
      .def("tail_integral", &MarginSpec::tail_integral, py::arg("s"))
      .def("__repr__",
           [](const MarginSpec& s) { return "MarginSpec(" + std::string(s.name()) + ")"; });

  py::class_<EnsembleDescriptor>(m, "EnsembleDescriptor")
      .def_readonly("seed", &EnsembleDescriptor::seed)
      .def_readonly("first_path", &EnsembleDescriptor::first_path)
      .def_readonly("clip_floor", &EnsembleDescriptor::clip_floor)
      .def_readonly("margin", &EnsembleDescriptor::margin)
      .def_property_readonly("generator",
                             [](const EnsembleDescriptor& d) { return describe(d.generator); });

  py::class_<PathEnsemble>(m, "PathEnsemble")
      .def_property_readonly("grid", &PathEnsemble::grid)
      .def_property_readonly("n_paths", &PathEnsemble::n_paths)
      .def_property_readonly("descriptor", &PathEnsemble::descriptor)
      .def_property_readonly("truncation_bound", &PathEnsemble::truncation_bound)
      .def("path",
           [](const PathEnsemble& e, std::size_t i) {
             if (i >= e.n_paths()) throw py::index_error();
             const auto p = e.path(i);
             return std::vector<double>(p.begin(), p.end());
           })
      .def("to_numpy", &ensemble_to_numpy)
      .def("__len__", &PathEnsemble::n_paths);

  m.def("default_clip_floor", &default_clip_floor, py::arg("spec"));
  m.def(
      "sample_gpp",
      [](const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths, RandomStream stream,
         std::optional<double> clip_floor, int workers, std::uint64_t first_path) {
        return sample_gpp(spec, grid, n_paths, stream,
                          clip_floor ? *clip_floor : default_clip_floor(spec), exec_of(workers),
                          first_path);
      },
      py::arg("spec"), py::arg("grid"), py::arg("n_paths"), py::arg("stream"),
      py::arg("clip_floor") = std::nullopt, py::arg("workers") = 1, py::arg("first_path") = 0);
  m.def(
      "sample_perturbed_gpp",
      [](const GeneratorSpec& spec, const std::string& perturbation, const Grid& grid,
         std::size_t n_paths, RandomStream stream, std::optional<double> clip_floor, int workers,
         std::uint64_t first_path) {
        PerturbationDf df;
        if (perturbation == "uniform")
          df = PerturbationDf::Uniform01;
        else if (perturbation == "exponential")
          df = PerturbationDf::StdExponential;
        else
          throw std::invalid_argument("perturbation must be 'uniform' or 'exponential'");
        return sample_perturbed_gpp(spec, df, grid, n_paths, stream,
                                    clip_floor ? *clip_floor : default_clip_floor(spec),
                                    exec_of(workers), first_path);
      },
      py::arg("spec"), py::arg("perturbation"), py::arg("grid"), py::arg("n_paths"),
      py::arg("stream"), py::arg("clip_floor") = std::nullopt, py::arg("workers") = 1,
      py::arg("first_path") = 0);
  m.def(
      "sample_msp",
      [](const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths, RandomStream stream,
         std::optional<double> trunc_epsilon, int workers, std::uint64_t first_path) {
        return sample_msp(spec, grid, n_paths, stream, trunc_epsilon, exec_of(workers),
                          first_path);
      },
      py::arg("spec"), py::arg("grid"), py::arg("n_paths"), py::arg("stream"),
      py::arg("trunc_epsilon") = std::nullopt, py::arg("workers") = 1, py::arg("first_path") = 0);
  m.def(
      "sample_simple_msp",
      [](const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths, RandomStream stream,
         std::optional<double> trunc_epsilon, int workers, std::uint64_t first_path) {
        return sample_simple_msp(spec, grid, n_paths, stream, trunc_epsilon, exec_of(workers),
                                 first_path);
      },
      py::arg("spec"), py::arg("grid"), py::arg("n_paths"), py::arg("stream"),
      py::arg("trunc_epsilon") = std::nullopt, py::arg("workers") = 1, py::arg("first_path") = 0);
  m.def(
      "regenerate_ensemble",
      [](const EnsembleDescriptor& desc, const Grid& grid, std::size_t n_paths, int workers) {
        return regenerate_ensemble(desc, grid, n_paths, exec_of(workers));
      },
      py::arg("descriptor"), py::arg("grid"), py::arg("n_paths"), py::arg("workers") = 1);
  m.def("transform_margins", &transform_margins, py::arg("ensemble"), py::arg("target"));
  m.def("write_ensemble_csv", &write_ensemble_csv, py::arg("ensemble"), py::arg("csv_path"),
        py::arg("meta_path"));
  m.def("read_ensemble_csv", &read_ensemble_csv, py::arg("csv_path"), py::arg("meta_path"));

  py::class_<ThresholdSpec>(m, "ThresholdSpec")
      .def(py::init<GridFunction, double>(), py::arg("f"), py::arg("level"))
      .def_property_readonly("f", &ThresholdSpec::f)
      .def_property_readonly("level", &ThresholdSpec::level)
      .def("exact_level_cap", &ThresholdSpec::exact_level_cap, py::arg("spec"));

  m.def("sojourn_time", &sojourn_time, py::arg("path"), py::arg("threshold"));
  m.def(
      "exceedance_probability",
      [](const PathEnsemble& e, const ThresholdSpec& th, int workers) {
        return exceedance_probability(e, th, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("threshold"), py::arg("workers") = 1);
  m.def(
      "fragility_index_ratio",
      [](const PathEnsemble& e, const ThresholdSpec& th, const MarginSpec& margin, int workers) {
        return fragility_index_ratio(e, th, margin, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("threshold"), py::arg("margin"), py::arg("workers") = 1);
  m.def(
      "mean_conditional_sojourn",
      [](const PathEnsemble& e, const ThresholdSpec& th, int min_exceedances, int workers) {
        return mean_conditional_sojourn(e, th, min_exceedances, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("threshold"), py::arg("min_exceedances") = kDefaultFloor,
      py::arg("workers") = 1);

  py::class_<SurvivorCurve>(m, "SurvivorCurve")
      .def_readonly("mesh", &SurvivorCurve::mesh)
      .def_readonly("survivor", &SurvivorCurve::survivor)
      .def_readonly("std_error", &SurvivorCurve::std_error);

  m.def("default_y_mesh", &default_y_mesh, py::arg("points") = 101);
  m.def(
      "theoretical_sojourn_survivor",
      [](const GeneratorSpec& spec, const GridFunction& f, const std::vector<double>& y_mesh,
         std::int64_t n_samples, RandomStream stream, int workers) {
        return theoretical_sojourn_survivor(spec, f, y_mesh, n_samples, stream, exec_of(workers));
      },
      py::arg("spec"), py::arg("f"), py::arg("y_mesh"), py::arg("n_samples"), py::arg("stream"),
      py::arg("workers") = 1);
  m.def(
      "empirical_sojourn_survivor",
      [](const PathEnsemble& e, const ThresholdSpec& th, const std::vector<double>& y_mesh,
         int min_exceedances, int workers) {
        return empirical_sojourn_survivor(e, th, y_mesh, min_exceedances, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("threshold"), py::arg("y_mesh"),
      py::arg("min_exceedances") = kDefaultFloor, py::arg("workers") = 1);

  m.def("excess_integral",
        py::overload_cast<const GridFunction&, double>(&excess_integral), py::arg("path"),
        py::arg("level"));
  m.def(
      "expected_shortfall_empirical",
      [](const PathEnsemble& e, double level, int min_exceedances, int workers) {
        return expected_shortfall_empirical(e, level, min_exceedances, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("level"), py::arg("min_exceedances") = 100,
      py::arg("workers") = 1);
  m.def(
      "sup_copula_leq",
      [](const PathEnsemble& e, double c, int workers) {
        return sup_copula_leq(e, c, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("c"), py::arg("workers") = 1);
  m.def("expected_shortfall_exact", &expected_shortfall_exact, py::arg("margin"),
        py::arg("sup_copula_prob"), py::arg("level"));
  m.def("expected_shortfall_asymptotic", &expected_shortfall_asymptotic, py::arg("margin"),
        py::arg("generator_constant"), py::arg("level"));

  py::class_<ExcursionLaw>(m, "ExcursionLaw")
      .def_readonly("t0", &ExcursionLaw::t0)
      .def_readonly("u_mesh", &ExcursionLaw::u_mesh)
      .def_readonly("survivor", &ExcursionLaw::survivor)
      .def_readonly("std_error", &ExcursionLaw::std_error)
      .def_readonly("mass_at_end", &ExcursionLaw::mass_at_end)
      .def_readonly("mass_at_end_se", &ExcursionLaw::mass_at_end_se)
      .def_readonly("expectation", &ExcursionLaw::expectation);

  m.def(
      "remaining_excursion_time",
      [](const std::vector<double>& path, const ThresholdSpec& th, double t0) {
        return remaining_excursion_time(path, th, t0);
      },
      py::arg("path"), py::arg("threshold"), py::arg("t0"));
  m.def("default_u_mesh", &default_u_mesh, py::arg("grid"), py::arg("t0"));
  m.def(
      "excursion_survivor_theoretical",
      [](const GeneratorSpec& spec, const GridFunction& f, double t0,
         const std::vector<double>& u_mesh, std::int64_t n_samples, RandomStream stream,
         int workers) {
        return excursion_survivor_theoretical(spec, f, t0, u_mesh, n_samples, stream,
                                              exec_of(workers));
      },
      py::arg("spec"), py::arg("f"), py::arg("t0"), py::arg("u_mesh"), py::arg("n_samples"),
      py::arg("stream"), py::arg("workers") = 1);
  m.def(
      "excursion_survivor_empirical",
      [](const PathEnsemble& e, const ThresholdSpec& th, double t0,
         const std::vector<double>& u_mesh, int min_exceedances, int workers) {
        return excursion_survivor_empirical(e, th, t0, u_mesh, min_exceedances, exec_of(workers));
      },
      py::arg("ensemble"), py::arg("threshold"), py::arg("t0"), py::arg("u_mesh"),
      py::arg("min_exceedances") = kDefaultFloor, py::arg("workers") = 1);

  m.def(
      "survivor_via_inclusion_exclusion",
      [](const GeneratorSpec& spec, const GridFunction& f, const std::vector<int>& indices,
         double level, std::int64_t n_samples, RandomStream stream, int workers) {
        return survivor_via_inclusion_exclusion(spec, f, indices, level, n_samples, stream,
                                                exec_of(workers));
      },
      py::arg("spec"), py::arg("f"), py::arg("indices"), py::arg("level"), py::arg("n_samples"),
      py::arg("stream"), py::arg("workers") = 1);
  m.def(
      "maxmin_identity_check",
      [](const std::vector<double>& a, double rel_tol) {
        return maxmin_identity_check(a, rel_tol);
      },
      py::arg("a"), py::arg("rel_tol") = 1e-12);

  m.def(
      "ks_statistic",
      [](const std::vector<double>& sample, const std::function<double(double)>& cdf) {
        return ks_statistic(sample, cdf);
      },
      py::arg("sample"), py::arg("cdf"));
  m.def("ks_critical", &ks_critical, py::arg("alpha"), py::arg("n"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("id", &CheckResult::id)
      .def_readonly("note", &CheckResult::note)
      .def_readonly("observed", &CheckResult::observed)
      .def_readonly("target", &CheckResult::target)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("pass_", &CheckResult::pass)
      .def("__repr__", [](const CheckResult& c) {
        return std::string(c.pass ? "PASS " : "FAIL ") + c.id;
      });

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def_readonly("seconds", &ValidationReport::seconds)
      .def("all_pass", &ValidationReport::all_pass);

  m.def("run_validation", &run_validation, py::arg("seed"), py::arg("workers") = 1,
        py::arg("scale") = 1.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("validation_csv_body", &validation_csv_body, py::arg("report"));
}
