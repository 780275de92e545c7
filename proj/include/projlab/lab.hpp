#pragma once

// Experiment harness: configuration, the bound-check / sharpness /
// transversality runs, and report emission.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "projlab/bounds.hpp"
#include "projlab/checks.hpp"
#include "projlab/dimest.hpp"
#include "projlab/errors.hpp"
#include "projlab/family.hpp"
#include "projlab/fractal.hpp"
#include "projlab/io.hpp"
#include "projlab/parallel.hpp"
#include "projlab/transversality.hpp"
#include "projlab/witness.hpp"

namespace projlab {

inline constexpr const char* kVersion = "projlab 0.1.0";

inline std::string version_string() {
  return std::string(kVersion) + " (Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." +
         std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION) + ")";
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

enum class Mode { bound_check, sharpness, transversality, verify_suite };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::bound_check: return "bound_check";
    case Mode::sharpness: return "sharpness";
    case Mode::transversality: return "transversality";
    case Mode::verify_suite: return "verify_suite";
  }
  return "?";
}

struct EstimatorConfig {
  EstimatorMethod method = EstimatorMethod::box_counting;
  std::vector<double> scales;  // box counting; empty = automatic
  std::size_t pair_budget = 2'000'000;
};

/// The sharpness construction: nu1 (s-dimensional Cantor measure, an atom
/// when s = 0) on span(e_{l+1}) times nu2 (Lebesgue on the unit ball of
/// X = <e_1..e_l, e_{n-p+1}..e_n>).
struct SharpnessConfig {
  int n = 3;
  int m = 2;
  int k = 1;
  int l = 1;
  int p = 1;
  double s = 1.0;
  int cantor_level = 12;
  std::size_t points = 200000;
  double radius = 0.7;
};

struct TransversalityConfig {
  std::optional<int> l;             // extend the family for this l
  int directions = 8;               // random panel size
  std::vector<Vector> fixed;        // extra user directions
  ProbeOptions probe;
  WitnessOptions witness;
  double extra_radius = 0.45;
};

struct ExperimentConfig {
  Mode mode = Mode::bound_check;
  std::optional<FamilySpec> family;
  std::optional<MeasureSpec> measure;
  std::vector<int> lambda_grid;
  EstimatorConfig estimator;
  double tolerance = 0.12;
  std::uint64_t seed = 0;
  bool force = false;
  int threads = 0;
  SharpnessConfig sharpness;
  TransversalityConfig transversality;
  Json source;  // the parsed document, for the provenance hash
};

namespace detail {

inline std::vector<double> doubles(const Json& j, const char* key, const std::string& where) {
  return get_as<std::vector<double>>(j, key, where);
}

inline Mode parse_mode(const std::string& s) {
  if (s == "bound_check") return Mode::bound_check;
  if (s == "sharpness") return Mode::sharpness;
  if (s == "transversality") return Mode::transversality;
  if (s == "verify_suite") return Mode::verify_suite;
  throw InputError("experiment: unknown mode '" + s + "'");
}

}  // namespace detail

/// Parses an experiment document. A string "family" is a path, resolved
/// against base_dir.
inline ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  const std::string where = "experiment";
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  ExperimentConfig cfg;
  cfg.source = j;
  cfg.mode = detail::parse_mode(detail::get_as<std::string>(j, "mode", where));
  if (cfg.mode != Mode::verify_suite) {
    if (!j.contains("seed")) throw InputError(where + ": seed is required");
    cfg.seed = detail::get_as<std::uint64_t>(j, "seed", where);
  }
  cfg.tolerance = detail::get_or<double>(j, "tolerance", 0.12, where);
  detail::require(cfg.tolerance >= 0.0, where + ": tolerance must be nonnegative");
  cfg.force = detail::get_or<bool>(j, "force", false, where);
  cfg.threads = detail::get_or<int>(j, "threads", 0, where);
  if (j.contains("family")) {
    const Json& f = j.at("family");
    if (f.is_string()) {
      cfg.family = family_from_json(read_json_file((base_dir / f.get<std::string>()).string()));
    } else {
      cfg.family = family_from_json(f);
    }
  }
  if (j.contains("measure")) cfg.measure = measure_from_json(j.at("measure"));
  if (j.contains("lambda_grid")) cfg.lambda_grid = detail::get_as<std::vector<int>>(j, "lambda_grid", where);
  if (j.contains("estimator")) {
    const Json& e = j.at("estimator");
    const auto method = detail::get_or<std::string>(e, "method", "box_counting", where + ".estimator");
    if (method == "box_counting") {
      cfg.estimator.method = EstimatorMethod::box_counting;
    } else if (method == "correlation") {
      cfg.estimator.method = EstimatorMethod::correlation;
    } else {
      throw InputError(where + ".estimator: unknown method '" + method + "'");
    }
    if (e.contains("scales")) cfg.estimator.scales = detail::doubles(e, "scales", where + ".estimator");
    cfg.estimator.pair_budget = detail::get_or<std::size_t>(e, "pair_budget", 2'000'000, where + ".estimator");
  }
  if (j.contains("sharpness")) {
    const Json& s = j.at("sharpness");
    const std::string w = where + ".sharpness";
    auto& c = cfg.sharpness;
    c.n = detail::get_as<int>(s, "n", w);
    c.m = detail::get_as<int>(s, "m", w);
    c.k = detail::get_as<int>(s, "k", w);
    c.l = detail::get_as<int>(s, "l", w);
    c.p = detail::get_as<int>(s, "p", w);
    c.s = detail::get_as<double>(s, "s", w);
    c.cantor_level = detail::get_or<int>(s, "cantor_level", 12, w);
    c.points = detail::get_or<std::size_t>(s, "points", 200000, w);
    c.radius = detail::get_or<double>(s, "radius", 0.7, w);
  }
  if (j.contains("transversality")) {
    const Json& t = j.at("transversality");
    const std::string w = where + ".transversality";
    auto& c = cfg.transversality;
    if (t.contains("l")) c.l = detail::get_as<int>(t, "l", w);
    c.directions = detail::get_or<int>(t, "directions", 8, w);
    if (t.contains("fixed_directions"))
      for (const auto& d : t.at("fixed_directions")) c.fixed.push_back(detail::vector_from_json(d, w));
    if (t.contains("deltas")) c.probe.deltas = detail::doubles(t, "deltas", w);
    c.probe.samples = detail::get_or<std::size_t>(t, "samples", 1'000'000, w);
    c.probe.radius = detail::get_or<double>(t, "radius", 0.0, w);
    c.witness.trials = detail::get_or<int>(t, "witness_trials", 200, w);
    c.witness.sphere_samples = detail::get_or<int>(t, "sphere_samples", 512, w);
    c.extra_radius = detail::get_or<double>(t, "extra_radius", 0.45, w);
  }
  return cfg;
}

inline ExperimentConfig read_experiment(const std::string& path) {
  return experiment_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

inline std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(cfg.source.dump()); }

// ---------------------------------------------------------------------------
// Reports.

struct LambdaRow {
  Vector lambda;
  DimensionEstimate estimate;
  double bound = 0.0;
  double margin = 0.0;       // estimate - bound
  bool violation = false;    // estimate < bound - tolerance
  bool natural_flag = false; // estimate outside the trivial band +- tolerance
};

struct ExperimentReport {
  Mode mode = Mode::bound_check;
  int n = 0;
  int m = 0;
  int k = 0;
  double nominal_dim = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::vector<LambdaRow> rows;
  double violation_fraction = 0.0;
  double min_margin = 0.0;
  std::size_t natural_flags = 0;
  std::optional<double> target;  // sharpness: l + s
  double in_band_fraction = 0.0; // sharpness: rows within target +- tolerance
  double nondegeneracy = 0.0;
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;  // not written to report files
};

/// Cell-centred grid over the family box, in lexicographic order.
inline std::vector<Vector> lambda_grid(const PlaneFamily& family, const std::vector<int>& counts) {
  const int k = family.param_count();
  detail::require(static_cast<int>(counts.size()) == k, "lambda_grid: need one count per parameter");
  for (int c : counts) detail::require(c >= 1, "lambda_grid: counts must be positive");
  const Vector center = family.domain_center();
  const Vector radii = family.domain_radii();
  std::vector<Vector> out;
  std::vector<int> index(static_cast<std::size_t>(k), 0);
  while (true) {
    Vector lambda(k);
    for (int a = 0; a < k; ++a) {
      const double c = counts[static_cast<std::size_t>(a)];
      lambda[a] = center[a] - radii[a] + 2.0 * radii[a] * (index[static_cast<std::size_t>(a)] + 0.5) / c;
    }
    out.push_back(lambda);
    int a = k - 1;
    while (a >= 0 && ++index[static_cast<std::size_t>(a)] == counts[static_cast<std::size_t>(a)]) index[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return out;
}

inline DimensionEstimate estimate_dimension(const SampledMeasure& mu, const EstimatorConfig& cfg, std::uint64_t seed,
                                           int threads) {
  if (cfg.method == EstimatorMethod::box_counting) {
    BoxCountingOptions o;
    o.scales = cfg.scales;
    o.threads = threads;
    return box_counting_dim(mu, o);
  }
  CorrelationOptions o;
  o.pair_budget = cfg.pair_budget;
  o.seed = seed;
  o.threads = threads;
  return correlation_dim(mu, o);
}

namespace detail {

inline void require_nondegenerate(const FamilySpec& spec, bool force, double& wedge) {
  const NondegeneracyResult nd = nondegeneracy_check(spec, Vector::Zero(spec.k));
  wedge = nd.wedge_norm;
  if (!nd.pass && !force)
    throw RefusedError("family fails the non-degeneracy check at the grid centre (wedge norm " +
                       std::to_string(nd.wedge_norm) +
                       "); the lower bound needs an injective derivative. Use --force to run anyway.");
}

// Projects and estimates on every grid point; rows keep grid order, which
// is lexicographic in lambda.
inline void fill_rows(ExperimentReport& report, const FamilySpec& spec, const SampledMeasure& mu,
                      const ExperimentConfig& cfg) {
  const RotationFamily family(spec);
  const std::vector<Vector> grid = lambda_grid(family, cfg.lambda_grid);
  report.rows.resize(grid.size());
  const double lo = std::max(0.0, report.nominal_dim - (report.n - report.m)) - cfg.tolerance;
  const double hi = std::min(report.nominal_dim, static_cast<double>(report.m)) + cfg.tolerance;
  parallel_for(grid.size(), cfg.threads, [&](std::size_t g) {
    LambdaRow& row = report.rows[g];
    row.lambda = grid[g];
    const SampledMeasure projected = project_points(chart_point_frame(family.chart_point(grid[g])), mu);
    row.estimate = estimate_dimension(projected, cfg.estimator, derive_seed(cfg.seed, 1000 + g), 1);
    row.bound = report.bound;
    row.margin = row.estimate.value - row.bound;
    row.violation = row.estimate.value < row.bound - cfg.tolerance;
    row.natural_flag = row.estimate.value < lo || row.estimate.value > hi;
  });
  std::size_t violations = 0;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    violations += row.violation;
    report.natural_flags += row.natural_flag;
    report.min_margin = std::min(report.min_margin, row.margin);
  }
  report.violation_fraction = static_cast<double>(violations) / static_cast<double>(report.rows.size());
}

inline ExperimentReport report_header(const ExperimentConfig& cfg, const FamilySpec& spec) {
  ExperimentReport r;
  r.mode = cfg.mode;
  r.n = spec.n;
  r.m = spec.m;
  r.k = spec.k;
  r.tolerance = cfg.tolerance;
  r.config_hash = config_hash(cfg);
  r.version = version_string();
  r.seed = cfg.seed;
  return r;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Projects the measure onto V_lambda over the grid and compares each
/// estimate with the almost-sure lower bound for the nominal dimension.
inline ExperimentReport run_bound_check(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require(cfg.family.has_value(), "bound_check: config needs a family");
  detail::require(cfg.measure.has_value(), "bound_check: config needs a measure");
  const FamilySpec& spec = *cfg.family;
  detail::require(static_cast<int>(cfg.lambda_grid.size()) == spec.k, "bound_check: lambda_grid needs one count per parameter");
  for (int c : cfg.lambda_grid) detail::require(c >= 3, "bound_check: need at least 3 grid points per axis");
  detail::require(cfg.measure->ambient_dim() == spec.n, "bound_check: measure must live in R^n");
  ExperimentReport report = detail::report_header(cfg, spec);
  detail::require_nondegenerate(spec, cfg.force, report.nondegeneracy);
  report.nominal_dim = cfg.measure->nominal_dim();
  report.bound = theorem_lower_bound(spec.n, spec.m, spec.k, report.nominal_dim);
  const SampledMeasure mu = generate(*cfg.measure, cfg.seed, cfg.threads);
  detail::fill_rows(report, spec, mu, cfg);
  report.runtime_seconds = detail::seconds_since(t0);
  return report;
}

/// The measure of the sharpness construction as a declarative spec.
inline MeasureSpec sharpness_measure(const SharpnessConfig& c) {
  detail::require(c.s >= 0.0 && c.s <= 1.0, "sharpness: need 0 <= s <= 1");
  detail::require(c.l + c.p <= c.n - 1, "sharpness: X and e_{l+1} must fit in R^n");
  auto unit = [&](int axis) { return Vector::Unit(c.n, axis); };
  ProductSpec product;
  product.points = c.points;
  EmbeddedSpec nu1;
  nu1.inner = std::make_shared<MeasureSpec>(c.s > 0.0 ? MeasureSpec{LineCantorSpec{c.s, c.cantor_level}}
                                                       : MeasureSpec{AtomSpec{1}});
  nu1.basis = unit(c.l);
  nu1.offset = Vector::Zero(c.n);
  product.parts.push_back(nu1);
  if (c.l + c.p > 0) {
    EmbeddedSpec nu2;
    nu2.inner = std::make_shared<MeasureSpec>(MeasureSpec{LebesgueBallSpec{c.l + c.p, c.points}});
    nu2.basis.resize(c.n, c.l + c.p);
    for (int a = 0; a < c.l; ++a) nu2.basis.col(a) = unit(a);
    for (int a = 0; a < c.p; ++a) nu2.basis.col(c.l + a) = unit(c.n - c.p + a);
    nu2.offset = Vector::Zero(c.n);
    product.parts.push_back(nu2);
  }
  return MeasureSpec{std::move(product)};
}

/// Runs the sharpness construction: projected dimensions should sit at
/// l + s, where the lower bound and the construction's upper bound meet.
inline ExperimentReport run_sharpness(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const SharpnessConfig& c = cfg.sharpness;
  const FamilySpec spec = sharpness_family(c.n, c.m, c.k, c.l, c.p, c.radius);
  std::vector<int> grid = cfg.lambda_grid;
  if (grid.empty()) grid.assign(static_cast<std::size_t>(spec.k), 8);
  detail::require(static_cast<int>(grid.size()) == spec.k, "sharpness: lambda_grid needs one count per parameter");
  ExperimentConfig run = cfg;
  run.lambda_grid = grid;
  ExperimentReport report = detail::report_header(cfg, spec);
  detail::require_nondegenerate(spec, cfg.force, report.nondegeneracy);
  const MeasureSpec measure = sharpness_measure(c);
  report.nominal_dim = measure.nominal_dim();
  report.bound = theorem_lower_bound(spec.n, spec.m, spec.k, report.nominal_dim);
  report.target = c.l + c.s;
  const SampledMeasure mu = generate(measure, cfg.seed, cfg.threads);
  detail::fill_rows(report, spec, mu, run);
  std::size_t inside = 0;
  for (const auto& row : report.rows) inside += std::abs(row.estimate.value - *report.target) <= cfg.tolerance;
  report.in_band_fraction = static_cast<double>(inside) / static_cast<double>(report.rows.size());
  report.runtime_seconds = detail::seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------

struct DirectionResult {
  Vector w;
  bool random = true;
  ProbeResult probe;
};

struct TransversalityReport {
  int n = 0;
  int m = 0;       // plane dimension of the probed family
  int k = 0;       // parameter count of the probed family
  bool extended = false;
  int l = 0;
  int p = 0;
  int t = 0;
  int target_order = 0;
  double d_prime = 0.0;
  std::vector<DirectionResult> directions;
  std::vector<double> exponents;  // fitted directions only
  double min_exponent = std::numeric_limits<double>::quiet_NaN();
  double median_exponent = std::numeric_limits<double>::quiet_NaN();
  std::size_t excluded = 0;
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
};

/// Probes the (possibly extended) family around its site with a panel of
/// random unit directions in the complement of the site plane, plus any
/// fixed directions. Directions whose probe cannot be fitted are excluded
/// and reported.
inline TransversalityReport run_transversality(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require(cfg.family.has_value(), "transversality: config needs a family");
  const TransversalityConfig& tc = cfg.transversality;
  detail::require(tc.directions >= 0, "transversality: directions must be nonnegative");
  const FamilySpec& spec = *cfg.family;
  TransversalityReport report;
  report.config_hash = config_hash(cfg);
  report.version = version_string();
  report.seed = cfg.seed;
  double wedge = 0.0;
  detail::require_nondegenerate(spec, cfg.force, wedge);

  std::shared_ptr<const PlaneFamily> family = std::make_shared<RotationFamily>(spec);
  Vector site = family->domain_center();
  report.l = tc.l.value_or(0);
  report.p = p_of_l(spec.n, spec.m, spec.k, report.l);
  report.t = spec.n - spec.m - report.p;
  report.target_order = report.l + 1 + report.p;
  if (tc.l) {
    WitnessOptions wo = tc.witness;
    wo.seed = derive_seed(cfg.seed, 1);
    wo.threads = cfg.threads;
    const ExtensionResult ext = extend_family(family, site, *tc.l, wo, tc.extra_radius);
    if (ext.extended) {
      report.extended = true;
      report.d_prime = ext.witness.d_prime;
      site = ext.extended_site();
      family = ext.family;
    }
  }
  report.n = family->ambient_dim();
  report.m = family->plane_dim();
  report.k = family->param_count();

  const Frame perp = complement(family->plane(site));
  Engine rng = make_engine(cfg.seed, 2);
  for (int d = 0; d < tc.directions; ++d)
    report.directions.push_back({perp.basis() * random_unit_vector(rng, perp.plane_dim()), true, {}});
  for (const auto& w : tc.fixed) report.directions.push_back({w, false, {}});

  for (std::size_t d = 0; d < report.directions.size(); ++d) {
    ProbeOptions po = tc.probe;
    po.seed = derive_seed(cfg.seed, 100 + d);
    po.threads = cfg.threads;
    auto& dir = report.directions[d];
    dir.probe = transversality_probe(*family, site, dir.w, po);
    if (dir.probe.fitted) {
      report.exponents.push_back(dir.probe.exponent);
    } else {
      ++report.excluded;
    }
  }
  if (!report.exponents.empty()) {
    std::vector<double> sorted = report.exponents;
    std::sort(sorted.begin(), sorted.end());
    report.min_exponent = sorted.front();
    const std::size_t h = sorted.size() / 2;
    report.median_exponent = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  }
  report.runtime_seconds = detail::seconds_since(t0);
  return report;
}

inline std::vector<checks::CheckRow> run_verify_suite(const checks::SuiteOptions& options = {}) {
  return checks::run_suite(options);
}

// ---------------------------------------------------------------------------
// Emission. Runtime is deliberately left out so that files are a pure
// function of (config, seed).

namespace detail {

inline Json nan_safe(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const ExperimentReport& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["family"] = {{"n", r.n}, {"m", r.m}, {"k", r.k}, {"nondegeneracy_wedge_norm", r.nondegeneracy}};
  j["nominal_dim"] = r.nominal_dim;
  j["theorem_bound"] = r.bound;
  j["tolerance"] = r.tolerance;
  Json summary;
  summary["rows"] = r.rows.size();
  summary["violation_fraction"] = r.violation_fraction;
  summary["min_margin"] = detail::nan_safe(r.min_margin);
  summary["natural_bound_flags"] = r.natural_flags;
  if (r.target) {
    summary["target"] = *r.target;
    summary["in_band_fraction"] = r.in_band_fraction;
  }
  j["summary"] = summary;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"lambda", detail::vector_to_json(row.lambda)},
                    {"estimate", to_json(row.estimate)},
                    {"bound", row.bound},
                    {"margin", row.margin},
                    {"violation", row.violation},
                    {"natural_bound_flag", row.natural_flag}});
  }
  j["rows"] = rows;
  j["provenance"] = {{"config_hash", r.config_hash}, {"version", r.version}, {"seed", r.seed}};
  return j;
}

/// lambda_1..lambda_k, est_dim, bound, margin, fit_r2
inline std::string per_lambda_csv(const ExperimentReport& r) {
  std::string out;
  for (int a = 0; a < r.k; ++a) out += "lambda_" + std::to_string(a + 1) + ",";
  out += "est_dim,bound,margin,fit_r2\n";
  for (const auto& row : r.rows) {
    for (Eigen::Index a = 0; a < row.lambda.size(); ++a) out += detail::format_double(row.lambda[a]) + ",";
    out += detail::format_double(row.estimate.value) + "," + detail::format_double(row.bound) + "," +
           detail::format_double(row.margin) + "," + detail::format_double(row.estimate.r_squared) + "\n";
  }
  return out;
}

/// Writes report.json, per-lambda.csv and fitdata/lambda_NNNN.csv.
inline void write_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "fitdata");
  detail::write_text((dir / "report.json").string(), to_json(r).dump(2) + "\n");
  detail::write_text((dir / "per-lambda.csv").string(), per_lambda_csv(r));
  for (std::size_t g = 0; g < r.rows.size(); ++g) {
    char name[32];
    std::snprintf(name, sizeof name, "lambda_%04zu.csv", g);
    detail::write_text((dir / "fitdata" / name).string(), fit_data_csv(r.rows[g].estimate));
  }
}

inline Json to_json(const TransversalityReport& r) {
  Json j;
  j["family"] = {{"n", r.n}, {"m", r.m}, {"k", r.k}, {"extended", r.extended}};
  j["l"] = r.l;
  j["p"] = r.p;
  j["t"] = r.t;
  j["target_order"] = r.target_order;
  if (r.extended) j["witness_d_prime"] = r.d_prime;
  Json dirs = Json::array();
  for (const auto& d : r.directions) {
    Json e;
    e["w"] = detail::vector_to_json(d.w);
    e["random"] = d.random;
    e["fitted"] = d.probe.fitted;
    e["exponent"] = detail::nan_safe(d.probe.exponent);
    e["exponent_stderr"] = detail::nan_safe(d.probe.exponent_stderr);
    e["radius"] = d.probe.radius;
    e["hits"] = d.probe.hits;
    if (!d.probe.diagnostic.empty()) e["diagnostic"] = d.probe.diagnostic;
    dirs.push_back(e);
  }
  j["directions"] = dirs;
  j["summary"] = {{"fitted", r.exponents.size()},
                  {"excluded", r.excluded},
                  {"min_exponent", detail::nan_safe(r.min_exponent)},
                  {"median_exponent", detail::nan_safe(r.median_exponent)}};
  j["provenance"] = {{"config_hash", r.config_hash}, {"version", r.version}, {"seed", r.seed}};
  return j;
}

/// delta, then the sublevel fraction for each direction.
inline std::string loglog_csv(const TransversalityReport& r) {
  std::string out = "delta";
  for (std::size_t d = 0; d < r.directions.size(); ++d) out += ",fraction_w" + std::to_string(d + 1);
  out += "\n";
  if (r.directions.empty()) return out;
  const auto& deltas = r.directions.front().probe.deltas;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    out += detail::format_double(deltas[i]);
    for (const auto& d : r.directions) out += "," + detail::format_double(d.probe.fractions[i]);
    out += "\n";
  }
  return out;
}

inline void write_transversality(const TransversalityReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_text((dir / "transversality.json").string(), to_json(r).dump(2) + "\n");
  detail::write_text((dir / "loglog.csv").string(), loglog_csv(r));
}

}  // namespace projlab
