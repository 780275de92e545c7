// projlab command-line driver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "projlab/projlab.hpp"

namespace {

using namespace projlab;

Vector site_or_center(const FamilySpec& spec, const std::vector<double>& lambda) {
  if (lambda.empty()) return Vector::Zero(spec.k);
  detail::require(static_cast<int>(lambda.size()) == spec.k, "--lambda needs one value per parameter");
  return Eigen::Map<const Vector>(lambda.data(), spec.k);
}

int cmd_bound(int n, int m, int k, const std::vector<double>& ds) {
  const BoundTable table = bound_table(n, m, k);
  std::cout << "l,p\n";
  for (int l = 0; l < m; ++l) std::cout << l << "," << table.p[static_cast<std::size_t>(l)] << "\n";
  std::cout << "\nd,bound\n";
  std::vector<double> samples = ds;
  if (samples.empty())
    for (int s = 0; s <= 20 * n; ++s) samples.push_back(s / 20.0);
  for (double d : samples)
    std::cout << detail::format_double(d) << "," << detail::format_double(theorem_lower_bound(n, m, k, d)) << "\n";
  std::cerr << "absolute continuity threshold: " << table.absolute_continuity << "\n";
  return 0;
}

int cmd_check_family(const std::string& path, const std::vector<double>& lambda, double tol) {
  const FamilySpec spec = family_from_json(read_json_file(path));
  const NondegeneracyResult r = nondegeneracy_check(spec, site_or_center(spec, lambda), tol);
  std::cout << "wedge_norm\t" << detail::format_double(r.wedge_norm) << "\n"
            << "result\t" << (r.pass ? "pass" : "fail") << "\n";
  return r.pass ? 0 : 1;
}

int cmd_witness(const std::string& path, int t, int l, const WitnessOptions& options,
                const std::vector<double>& lambda) {
  const FamilySpec spec = family_from_json(read_json_file(path));
  const FamilyJacobian jac = family_jacobian(spec, site_or_center(spec, lambda));
  const WitnessResult w = find_witness_subspace(jac, t, l, options);
  Json j;
  j["t"] = t;
  j["l"] = l;
  j["d_prime"] = w.d_prime;
  j["basis_complement_coordinates"] = detail::columns_to_json(w.basis);
  j["basis_ambient"] = detail::columns_to_json(jac.plane_complement.basis() * w.basis);
  j["seed"] = options.seed;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// `path` is either a family JSON (probe settings from the command line) or
// a transversality experiment config (command-line seed still overrides).
int cmd_transversality(const std::string& path, std::optional<int> l, ExperimentConfig cli, bool seed_given,
                       const std::string& out) {
  const Json doc = read_json_file(path);
  ExperimentConfig cfg = cli;
  if (doc.contains("mode")) {
    cfg = experiment_from_json(doc, std::filesystem::path(path).parent_path());
    if (cfg.mode != Mode::transversality) throw InputError("config mode is not 'transversality'");
    if (seed_given) {
      cfg.seed = cli.seed;
      cfg.source["seed"] = cli.seed;
    }
    cfg.threads = cli.threads;
    cfg.force = cfg.force || cli.force;
  } else {
    if (!seed_given) throw InputError("transversality needs --seed");
    cfg.mode = Mode::transversality;
    cfg.family = family_from_json(doc);
    cfg.transversality.l = l;
    cfg.source = {{"family", to_json(*cfg.family)},
                  {"l", l ? Json(*l) : Json(nullptr)},
                  {"deltas", cfg.transversality.probe.deltas},
                  {"samples", cfg.transversality.probe.samples},
                  {"directions", cfg.transversality.directions},
                  {"seed", cfg.seed}};
  }
  const TransversalityReport r = run_transversality(cfg);
  std::cerr << "runtime " << r.runtime_seconds << " s\n";
  std::cout << to_json(r).dump(2) << "\n";
  if (!out.empty()) write_transversality(r, out);
  return 0;
}

int cmd_experiment(const std::string& path, Mode expected, const std::string& out, const std::optional<std::uint64_t>& seed,
                   int threads, bool force) {
  ExperimentConfig cfg = read_experiment(path);
  if (seed) {
    cfg.seed = *seed;
    cfg.source["seed"] = *seed;
  }
  if (threads >= 0) cfg.threads = threads;
  cfg.force = cfg.force || force;
  if (cfg.mode != expected)
    throw InputError(std::string("config mode is '") + to_string(cfg.mode) + "', expected '" + to_string(expected) + "'");
  const ExperimentReport r = expected == Mode::sharpness ? run_sharpness(cfg) : run_bound_check(cfg);
  write_report(r, out);
  std::cerr << "runtime " << r.runtime_seconds << " s\n";
  std::cout << "rows\t" << r.rows.size() << "\n"
            << "theorem_bound\t" << detail::format_double(r.bound) << "\n"
            << "violation_fraction\t" << detail::format_double(r.violation_fraction) << "\n"
            << "min_margin\t" << detail::format_double(r.min_margin) << "\n";
  if (r.target)
    std::cout << "target\t" << detail::format_double(*r.target) << "\n"
              << "in_band_fraction\t" << detail::format_double(r.in_band_fraction) << "\n";
  return 0;
}

int cmd_verify(const std::string& filter, int threads) {
  checks::SuiteOptions options;
  options.filter = filter;
  options.threads = threads;
  const auto rows = run_verify_suite(options);
  std::cout << checks::suite_tsv(rows);
  for (const auto& r : rows)
    if (!r.pass) return 1;
  return rows.empty() ? 1 : 0;
}

int cmd_measure(const std::string& path, std::uint64_t seed, int threads, const std::string& out, bool binary) {
  const Json spec_json = read_json_file(path);
  const MeasureSpec spec = measure_from_json(spec_json);
  SampledMeasure mu = generate(spec, seed, threads);
  mu.nominal_dim = spec.nominal_dim();
  if (binary) {
    write_measure_binary(mu, out, spec_json, seed);
  } else {
    detail::write_text(out, measure_to_csv(mu));
  }
  std::cerr << mu.size() << " points, nominal dim " << mu.nominal_dim << "\n";
  return 0;
}

int cmd_estimate(const std::string& path, const EstimatorConfig& est, std::uint64_t seed, int threads,
                 const std::string& fit_out) {
  const SampledMeasure mu = std::filesystem::exists(path + ".json") ? read_measure_binary(path)
                                                                     : measure_from_csv(detail::read_text(path));
  const DimensionEstimate e = estimate_dimension(mu, est, seed, threads);
  std::cout << to_json(e).dump(2) << "\n";
  if (!fit_out.empty()) detail::write_text(fit_out, fit_data_csv(e));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projlab: dimension of projected measures under parametrized projection families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", projlab::version_string());

  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool force = false;
  std::vector<double> lambda;

  auto* bound = app.add_subcommand("bound", "p(l) table and lower-bound curve (CSV)");
  int n = 0;
  int m = 0;
  int k = 0;
  std::vector<double> ds;
  bound->add_option("--n", n, "ambient dimension")->required();
  bound->add_option("--m", m, "plane dimension")->required();
  bound->add_option("--k", k, "parameter count")->required();
  bound->add_option("--d", ds, "dimension(s) of the measure; default: a grid over [0, n]");

  auto* check = app.add_subcommand("check-family", "non-degeneracy wedge norm; exit code 1 on failure");
  std::string family_path;
  double tol = 1e-6;
  check->add_option("family", family_path, "family JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--lambda", lambda, "site (default: domain centre)");
  check->add_option("--tol", tol, "pass threshold for the wedge norm");

  auto* witness = app.add_subcommand("witness", "witness subspace and empirical d' (JSON)");
  int t = 1;
  int l = 0;
  projlab::WitnessOptions wo;
  witness->add_option("family", family_path, "family JSON")->required()->check(CLI::ExistingFile);
  witness->add_option("--t", t, "witness dimension")->required();
  witness->add_option("--l", l, "wedge order minus one")->required();
  witness->add_option("--trials", wo.trials, "random restarts");
  witness->add_option("--sphere-samples", wo.sphere_samples, "sphere sample size");
  witness->add_option("--refine-steps", wo.refine_steps, "hill-climbing steps per restart");
  witness->add_option("--lambda", lambda, "site (default: domain centre)");

  auto* trans = app.add_subcommand("transversality", "sublevel-set exponent panel (JSON; --out adds loglog CSV)");
  std::optional<int> ext_l;
  bool extend = false;
  projlab::ExperimentConfig tcfg;
  std::string out;
  trans->add_option("family", family_path, "family JSON, or a transversality experiment config")->required()->check(CLI::ExistingFile);
  trans->add_flag("--extend", extend, "extend the family before probing (needs --l)");
  trans->add_option("--l", ext_l, "l for the extension");
  trans->add_option("--deltas", tcfg.transversality.probe.deltas, "decreasing delta list");
  trans->add_option("--samples", tcfg.transversality.probe.samples, "Monte-Carlo samples per direction");
  trans->add_option("--directions", tcfg.transversality.directions, "random directions in the panel");
  trans->add_option("--radius", tcfg.transversality.probe.radius, "ball radius (0: automatic)");
  trans->add_option("--out", out, "directory for transversality.json and loglog.csv");

  auto* project = app.add_subcommand("project", "bound check over a lambda grid");
  std::string config_path;
  project->add_option("config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
  project->add_option("--out", out, "output directory")->required();

  auto* sharp = app.add_subcommand("sharpness", "sharpness construction over a lambda grid");
  sharp->add_option("config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
  sharp->add_option("--out", out, "output directory")->required();

  auto* verify = app.add_subcommand("verify", "property suites (TSV); exit code 1 on any failure");
  std::string filter;
  verify->add_option("--filter", filter, "only checks whose name contains this");

  auto* measure = app.add_subcommand("measure", "sample a measure spec to CSV (or binary with --binary)");
  std::string measure_path;
  bool binary = false;
  measure->add_option("spec", measure_path, "measure JSON")->required()->check(CLI::ExistingFile);
  measure->add_option("--out", out, "output file")->required();
  measure->add_flag("--binary", binary, "float64 block plus a .json sidecar");

  auto* estimate = app.add_subcommand("estimate", "dimension estimate of a sampled measure (CSV or binary)");
  projlab::EstimatorConfig est;
  std::string method = "box_counting";
  std::string fit_out;
  estimate->add_option("measure", measure_path, "measure file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--method", method, "box_counting or correlation")
      ->check(CLI::IsMember({"box_counting", "correlation"}));
  estimate->add_option("--pair-budget", est.pair_budget, "pairs for the correlation estimator");
  estimate->add_option("--fit-csv", fit_out, "write log-log fit data here");

  for (auto* sub : {bound, check, witness, trans, project, sharp, verify, measure, estimate}) {
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
  }
  for (auto* sub : {witness, trans, project, sharp, measure, estimate}) sub->add_option("--seed", seed, "random seed");
  for (auto* sub : {trans, project, sharp}) sub->add_flag("--force", force, "bypass the non-degeneracy gate");

  CLI11_PARSE(app, argc, argv);

  try {
    auto need_seed = [&](const char* what) {
      if (!seed) throw projlab::InputError(std::string(what) + " needs --seed");
      return *seed;
    };
    if (*bound) return cmd_bound(n, m, k, ds);
    if (*check) return cmd_check_family(family_path, lambda, tol);
    if (*witness) {
      wo.seed = need_seed("witness");
      wo.threads = threads;
      return cmd_witness(family_path, t, l, wo, lambda);
    }
    if (*trans) {
      if (extend && !ext_l) throw projlab::InputError("--extend needs --l");
      if (ext_l && !extend) throw projlab::InputError("--l is only used with --extend");
      if (seed) tcfg.seed = *seed;
      tcfg.threads = threads;
      tcfg.force = force;
      return cmd_transversality(family_path, ext_l, tcfg, seed.has_value(), out);
    }
    if (*project) return cmd_experiment(config_path, projlab::Mode::bound_check, out, seed, threads, force);
    if (*sharp) return cmd_experiment(config_path, projlab::Mode::sharpness, out, seed, threads, force);
    if (*verify) return cmd_verify(filter, threads);
    if (*measure) return cmd_measure(measure_path, need_seed("measure"), threads, out, binary);
    if (*estimate) {
      est.method = method == "correlation" ? projlab::EstimatorMethod::correlation : projlab::EstimatorMethod::box_counting;
      return cmd_estimate(measure_path, est, seed.value_or(0), threads, fit_out);
    }
  } catch (const projlab::RefusedError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
