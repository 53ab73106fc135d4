#include "sojourn/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sojourn/config.hpp"
#include "sojourn/csv.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/excursion.hpp"
#include "sojourn/functionals.hpp"
#include "sojourn/generators.hpp"
#include "sojourn/margins.hpp"
#include "sojourn/processes.hpp"
#include "sojourn/shortfall.hpp"
#include "sojourn/sojourn_fi.hpp"
#include "sojourn/validation.hpp"
#include "sojourn/version.hpp"

namespace sojourn::cli {

namespace {

constexpr const char* kUsage = R"(usage: sojourn_lab <command> [--key value | --key=value]...

commands:
  dnorm       E(max |f| Z) for the configured generator and threshold shape
  gen-const   generator constant m = E(max Z) with its closed-form value
  fi-sweep    fragility-index ratio and conditional mean sojourn over s
  sojourn-df  theoretical vs empirical sojourn-time survivor curves
  es-sweep    empirical, exact and asymptotic expected shortfall over s
  excursion   remaining-excursion-time law at the inspection point t0
  validate    full closed-form check suite (exit 0 iff every check passes)

keys (also accepted as key=value lines in --config files):
  seed grid paths samples workers out config
  generator (constant|moving-triangular|moving-rectangular|discrete|logistic)
  width base dim exponent
  s (comma list)  f (const-neg1|ramp|ramp2|file:PATH)  t0
  y-points  u-points (count|grid)  margin  process (gpp|msp|perturbed-exp|perturbed-uniform)
  eps-trunc  clip-floor (value|auto)  floor  scale  json (0|1)

exit codes: 0 ok, 1 usage error, 2 statistical floor unmet, 3 validation failure
)";

struct Table {
  std::vector<std::string> extra_comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_config_comments(CsvWriter& w, const std::string& command,
                           const ExperimentConfig& cfg) {
  w.comment(std::string("sojourn_lab ") + kVersion);
  w.comment("command = " + command);
  for (const auto& [k, v] : resolved_config(cfg)) w.comment(k + " = " + v);
}

void write_table_csv(std::ostream& os, const std::string& command, const ExperimentConfig& cfg,
                     const Table& table) {
  CsvWriter w(os);
  write_config_comments(w, command, cfg);
  for (const auto& line : table.extra_comments) w.comment(line);
  w.header(table.columns);
  for (const auto& row : table.rows) w.row(row);
}

std::filesystem::path output_path(const ExperimentConfig& cfg, const std::string& command) {
  return cfg.out.empty() ? std::filesystem::path(command + ".csv")
                         : std::filesystem::path(cfg.out);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot write output file " + path.string());
  return os;
}

void write_json_summary(const ExperimentConfig& cfg, const std::string& command,
                        const std::filesystem::path& csv_path, const Table& table,
                        std::ostream& out) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  auto& jc = j["config"];
  for (const auto& [k, v] : resolved_config(cfg)) jc[k] = v;
  j["columns"] = table.columns;
  auto& rows = j["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) r[table.columns[c]] = row[c];
    rows.push_back(std::move(r));
  }
  auto path = csv_path;
  path.replace_extension(".json");
  auto os = open_output(path);
  os << j.dump(2) << '\n';
  out << "wrote " << path.string() << '\n';
}

void emit(const ExperimentConfig& cfg, const std::string& command, const Table& table,
          std::ostream& out) {
  const auto path = output_path(cfg, command);
  auto os = open_output(path);
  write_table_csv(os, command, cfg, table);
  out << "wrote " << path.string() << '\n';
  if (cfg.json_summary) write_json_summary(cfg, command, path, table, out);
}

// threshold surfaces are s*f with sup|f| <= 1; steeper presets are rescaled
// onto the same surface (f/c at level c*s)
struct NormalizedThreshold {
  GridFunction f;
  double level_factor;
};

NormalizedThreshold normalized_threshold(const ExperimentConfig& cfg, const Grid& grid) {
  GridFunction f = threshold_shape_from_config(cfg, grid);
  const double sup = f.sup_abs();
  if (sup <= 1.0 + 1e-12) return {std::move(f), 1.0};
  std::vector<double> v(f.values().begin(), f.values().end());
  for (auto& x : v) x /= sup;
  return {GridFunction(grid, std::move(v)), sup};
}

PathEnsemble make_ensemble(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                           const Grid& grid, RandomStream stream, const ExecPolicy& exec) {
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  const double clip = cfg.clip_floor ? *cfg.clip_floor : default_clip_floor(spec);
  if (cfg.process == "gpp") return sample_gpp(spec, grid, n, stream, clip, exec);
  if (cfg.process == "perturbed-exp")
    return sample_perturbed_gpp(spec, PerturbationDf::StdExponential, grid, n, stream, clip, exec);
  if (cfg.process == "perturbed-uniform")
    return sample_perturbed_gpp(spec, PerturbationDf::Uniform01, grid, n, stream, clip, exec);
  return sample_msp(spec, grid, n, stream, cfg.eps_trunc, exec);
}

std::string ensemble_comment(const PathEnsemble& ensemble) {
  return "truncation-bound = " + format_double(ensemble.truncation_bound());
}

// ---- commands ----

int cmd_dnorm(const ExperimentConfig& cfg, std::ostream& out) {
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const GridFunction f = threshold_shape_from_config(cfg, grid);
  const auto est = dnorm_estimate(spec, f, cfg.n_samples, RandomStream(cfg.seed),
                                  ExecPolicy{cfg.workers});
  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.columns = {"dnorm", "std_error", "n_samples"};
  t.rows.push_back({est.mean, est.std_error, static_cast<double>(est.n_samples)});
  emit(cfg, "dnorm", t, out);
  out << "dnorm = " << format_double(est.mean) << " (se " << format_double(est.std_error)
      << ", n " << est.n_samples << ")\n";
  return kExitOk;
}

int cmd_gen_const(const ExperimentConfig& cfg, std::ostream& out) {
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const auto est = generator_constant_estimate(spec, grid, cfg.n_samples, RandomStream(cfg.seed),
                                               ExecPolicy{cfg.workers});
  const double analytic = analytic_constant(spec);
  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.columns = {"estimate", "std_error", "n_samples", "analytic"};
  t.rows.push_back({est.mean, est.std_error, static_cast<double>(est.n_samples), analytic});
  emit(cfg, "gen-const", t, out);
  out << "generator constant = " << format_double(est.mean) << " (se "
      << format_double(est.std_error) << ", analytic " << format_double(analytic) << ")\n";
  return kExitOk;
}

int cmd_fi_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.process != "gpp" && cfg.process != "msp")
    throw std::invalid_argument("fi-sweep needs exact margins: process=gpp or process=msp");
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const auto [f, factor] = normalized_threshold(cfg, grid);
  const MarginSpec margin =
      cfg.process == "gpp" ? MarginSpec::std_gpp_tail() : MarginSpec::neg_exponential();
  const ExecPolicy exec{cfg.workers};
  const auto ens = make_ensemble(cfg, spec, grid, RandomStream(cfg.seed), exec);

  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.extra_comments.push_back(ensemble_comment(ens));
  t.columns = {"s",       "p_positive", "p_se",  "mean_conditional",
               "mean_se", "fi_ratio",   "fi_se", "n_exceed"};
  for (const double s : cfg.s_values) {
    const ThresholdSpec th(f, s * factor);
    const auto sojourns = positive_sojourns(ens, th, exec);
    if (std::cmp_less(sojourns.size(), cfg.min_exceedances))
      throw floor_error("fi-sweep: " + std::to_string(sojourns.size()) +
                        " exceeding paths at s = " + format_double(s) + ", need " +
                        std::to_string(cfg.min_exceedances));
    const auto p = estimate_proportion(static_cast<std::int64_t>(sojourns.size()),
                                       static_cast<std::int64_t>(ens.n_paths()));
    const auto mean = estimate_mean(sojourns);
    const auto fi = fragility_index_ratio(ens, th, margin, exec);
    t.rows.push_back({s, p.mean, p.std_error, mean.mean, mean.std_error, fi.mean, fi.std_error,
                      static_cast<double>(sojourns.size())});
  }
  emit(cfg, "fi-sweep", t, out);
  return kExitOk;
}

int cmd_sojourn_df(const ExperimentConfig& cfg, std::ostream& out) {
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const auto [f, factor] = normalized_threshold(cfg, grid);
  const ExecPolicy exec{cfg.workers};
  RandomStream root(cfg.seed);
  const auto y_mesh = default_y_mesh(cfg.y_points);

  const auto theory =
      theoretical_sojourn_survivor(spec, f, y_mesh, cfg.n_samples, root.substream(0), exec);
  const auto ens = make_ensemble(cfg, spec, grid, root.substream(1), exec);
  const ThresholdSpec th(f, cfg.s_values.front() * factor);
  const auto emp = empirical_sojourn_survivor(ens, th, y_mesh, cfg.min_exceedances, exec);

  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.extra_comments.push_back("s = " + format_double(cfg.s_values.front()));
  t.extra_comments.push_back("exact-level-cap = " + format_double(th.exact_level_cap(spec)));
  t.extra_comments.push_back(ensemble_comment(ens));
  t.columns = {"y", "survivor_theoretical", "theoretical_se", "survivor_empirical",
               "empirical_se"};
  for (std::size_t k = 0; k < y_mesh.size(); ++k)
    t.rows.push_back(
        {y_mesh[k], theory.survivor[k], theory.std_error[k], emp.survivor[k], emp.std_error[k]});
  emit(cfg, "sojourn-df", t, out);
  return kExitOk;
}

int cmd_es_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const MarginSpec margin = margin_from_config(cfg);
  const ExecPolicy exec{cfg.workers};
  const auto raw = make_ensemble(cfg, spec, grid, RandomStream(cfg.seed), exec);
  const auto ens = transform_margins(raw, margin);
  const double m = analytic_constant(spec);

  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.extra_comments.push_back("margin = " + std::string(margin.name()));
  t.extra_comments.push_back(ensemble_comment(ens));
  t.columns = {"s",        "n_exceed", "es_empirical",  "empirical_se",
               "es_exact", "exact_se", "es_asymptotic"};
  for (const double s : cfg.s_values) {
    const auto emp = expected_shortfall_empirical(ens, s, cfg.min_exceedances, exec);
    const auto cop = sup_copula_leq(ens, margin.cdf(s), exec);
    const auto exact = expected_shortfall_exact(margin, cop, s);
    const double asym = std::isinf(margin.tail_integral(s))
                            ? std::numeric_limits<double>::infinity()
                            : expected_shortfall_asymptotic(margin, m, s);
    const double n_exceed =
        static_cast<double>(ens.n_paths()) * (1.0 - cop.mean);  // for the record only
    t.rows.push_back(
        {s, n_exceed, emp.mean, emp.std_error, exact.mean, exact.std_error, asym});
  }
  emit(cfg, "es-sweep", t, out);
  return kExitOk;
}

int cmd_excursion(const ExperimentConfig& cfg, std::ostream& out) {
  const auto spec = generator_from_config(cfg);
  const Grid grid(cfg.grid_n);
  const auto [f, factor] = normalized_threshold(cfg, grid);
  const ExecPolicy exec{cfg.workers};
  RandomStream root(cfg.seed);

  std::vector<double> mesh = default_u_mesh(grid, cfg.t0);
  if (cfg.u_points > 0) {
    const double u_max = mesh.back();
    std::vector<double> custom(static_cast<std::size_t>(cfg.u_points));
    for (int i = 0; i < cfg.u_points; ++i)
      custom[static_cast<std::size_t>(i)] =
          cfg.u_points == 1 ? 0.0
                            : u_max * static_cast<double>(i) / static_cast<double>(cfg.u_points - 1);
    mesh = std::move(custom);
  }

  const auto theory =
      excursion_survivor_theoretical(spec, f, cfg.t0, mesh, cfg.n_samples, root.substream(0), exec);
  const auto ens = make_ensemble(cfg, spec, grid, root.substream(1), exec);
  const ThresholdSpec th(f, cfg.s_values.front() * factor);
  const auto emp = excursion_survivor_empirical(ens, th, cfg.t0, mesh, cfg.min_exceedances, exec);

  Table t;
  t.extra_comments.push_back("generator-detail = " + describe(spec));
  t.extra_comments.push_back("s = " + format_double(cfg.s_values.front()));
  t.extra_comments.push_back(ensemble_comment(ens));
  t.extra_comments.push_back(
      "summary t0 = " + format_double(emp.t0) + ", mass_at_end = " + format_double(emp.mass_at_end) +
      " (se " + format_double(emp.mass_at_end_se) + ", theoretical " +
      format_double(theory.mass_at_end) + "), expectation = " + format_double(emp.expectation.mean) +
      " (se " + format_double(emp.expectation.std_error) + ", theoretical " +
      format_double(theory.expectation.mean) + ")");
  t.columns = {"u", "survivor_theoretical", "theoretical_se", "survivor_empirical",
               "empirical_se"};
  for (std::size_t k = 0; k < mesh.size(); ++k)
    t.rows.push_back(
        {mesh[k], theory.survivor[k], theory.std_error[k], emp.survivor[k], emp.std_error[k]});
  emit(cfg, "excursion", t, out);
  return kExitOk;
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out) {
  const auto report = run_validation(cfg.seed, cfg.workers, cfg.scale);

  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(26) << c.id << " observed "
        << format_double(c.observed) << " target " << format_double(c.target) << " tol "
        << format_double(c.tolerance) << "  [" << c.note << "]\n";
  }
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.pass;
  out << "validation: " << passed << "/" << report.checks.size() << " checks passed in "
      << format_double(report.seconds) << " s\n";

  const auto path = output_path(cfg, "validate");
  auto os = open_output(path);
  {
    CsvWriter w(os);
    write_config_comments(w, "validate", cfg);
  }
  os << validation_csv_body(report);
  out << "wrote " << path.string() << '\n';
  return report.all_pass() ? kExitOk : kExitValidation;
}

ExperimentConfig parse_flags(const std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok.rfind("--", 0) != 0)
      throw std::invalid_argument("expected --key, got '" + tok + "'");
    std::string key = tok.substr(2);
    std::string value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw std::invalid_argument("flag --" + key + " needs a value");
      value = args[++i];
    }
    pairs.emplace_back(std::move(key), std::move(value));
  }
  ExperimentConfig cfg;
  for (const auto& [k, v] : pairs)
    if (k == "config") load_config_file(cfg, v);
  for (const auto& [k, v] : pairs)
    if (k != "config") apply_config_key(cfg, k, v);
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args[0] == "-h" || args[0] == "--help" || args[0] == "help") {
    out << kUsage;
    return args.empty() ? kExitUsage : kExitOk;
  }
  const std::string& command = args[0];
  try {
    const ExperimentConfig cfg = parse_flags(args);
    if (command == "dnorm") return cmd_dnorm(cfg, out);
    if (command == "gen-const") return cmd_gen_const(cfg, out);
    if (command == "fi-sweep") return cmd_fi_sweep(cfg, out);
    if (command == "sojourn-df") return cmd_sojourn_df(cfg, out);
    if (command == "es-sweep") return cmd_es_sweep(cfg, out);
    if (command == "excursion") return cmd_excursion(cfg, out);
    if (command == "validate") return cmd_validate(cfg, out);
    err << "error: unknown command '" << command << "'\n\n" << kUsage;
    return kExitUsage;
  } catch (const floor_error& e) {
    err << "error: statistical floor unmet: " << e.what() << '\n';
    return kExitFloor;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sojourn::cli
