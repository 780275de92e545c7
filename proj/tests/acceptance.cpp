// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "projlab/projlab.hpp"

using namespace projlab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(PROJLAB_SOURCE_DIR) / "configs";

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& id, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_seconds <= 0 || secs < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::string budget = budget_seconds > 0 ? " < " + detail::format_double(budget_seconds) + " s" : "";
  std::printf("%s  %-4s %s [%.2f s%s%s]\n", pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str(), secs,
              budget.c_str(), in_time ? "" : ", over budget");
  std::fflush(stdout);
}

void info(const std::string& id, const std::string& text) {
  std::printf("INFO  %-4s %s\n", id.c_str(), text.c_str());
  std::fflush(stdout);
}

std::string fmt(double x, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Files under dir keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = detail::read_text(e.path().string());
  return out;
}

struct Runs {
  TransversalityReport planar;
  TransversalityReport extended;
  ExperimentReport bound;
  ExperimentReport sharp;
};

Runs run_statistical(const fs::path& out) {
  Runs r;
  r.planar = run_transversality(read_experiment((kConfigs / "transversality_n3.json").string()));
  r.extended = run_transversality(read_experiment((kConfigs / "transversality_n4_extended.json").string()));
  write_transversality(r.planar, out / "transversality_n3");
  write_transversality(r.extended, out / "transversality_n4_extended");
  return r;
}

}  // namespace

int main() {
  std::printf("%s acceptance\n", version_string().c_str());
  const fs::path work = fs::temp_directory_path() / "projlab_acceptance";
  fs::remove_all(work);

  criterion("C1", 1.0, [] {
    const checks::PEnumerationStats s = checks::p_enumeration();
    return Outcome{s.mismatches == 0 && s.monotone_breaks == 0,
                   "p(l) vs dot-filling oracle: " + std::to_string(s.tuples) + " tuples, " +
                       std::to_string(s.mismatches) + " mismatches, " + std::to_string(s.monotone_breaks) +
                       " decreasing steps"};
  });

  criterion("C2", 1.0, [] {
    const checks::KLimitsStats s = checks::k_limits_scan(false);
    std::string d = "k-limits over the full range: " + std::to_string(s.tuples) + " tuples, " +
                    std::to_string(s.failures) + " failures (" + std::to_string(s.saturated_failures) +
                    " with p = n-m)";
    if (s.failures) d += ", first " + s.first_failure;
    return Outcome{s.failures == 0, d};
  });
  {
    const checks::KLimitsStats s = checks::k_limits_scan(true);
    info("C2", "restricted to p < n-m: " + std::to_string(s.tuples) + " tuples, " + std::to_string(s.failures) +
                   " failures");
  }

  criterion("C3", 10.0, [] {
    const checks::MultivecStats s = checks::multivec_oracle(10000);
    return Outcome{s.worst_gram_vs_minors <= 1e-9 && s.worst_det <= 1e-9,
                   "exterior algebra: " + std::to_string(s.cases) + " cases, worst |gram - minors|/(1+v) " +
                       fmt(s.worst_gram_vs_minors) + ", worst |wedge_n - |det||/(1+v) " + fmt(s.worst_det) +
                       " (tol 1e-9)"};
  });

  criterion("C4", 5.0, [] {
    const checks::OrderStats s = checks::tangent_fd_order(100);
    return Outcome{s.cases == 100 && s.min_order >= 1.9,
                   "tangent derivative: " + std::to_string(s.cases) + " cases, min order " + fmt(s.min_order) +
                       " (need >= 1.9), " + std::to_string(s.exact) + " exact"};
  });

  criterion("C5", 5.0, [] {
    const checks::OrderStats s = checks::extended_derivative_paths(20);
    return Outcome{s.cases == 20 && s.min_order >= 1.9,
                   "extended plane derivative: " + std::to_string(s.cases) + " paths, min slope " +
                       fmt(s.min_order) + " (need >= 1.9), " + std::to_string(s.exact) + " exact"};
  });

  criterion("C6", 10.0, [] {
    const checks::ProjboundStats s = checks::projbound(100);
    return Outcome{s.cases == 100 && s.worst_shortfall <= 1e-9,
                   "projection bound: " + std::to_string(s.cases) + " families, " + std::to_string(s.comparisons) +
                       " comparisons, worst shortfall " + fmt(s.worst_shortfall) + " (tol 1e-9)"};
  });

  criterion("C7", 60.0, [] {
    const checks::CalibrationStats s = checks::calibration();
    const bool pass = in_range(s.four_corner_box, 0.9, 1.1) && in_range(s.cantor_corr, 0.58, 0.68) &&
                      in_range(s.square_box, 1.9, 2.1);
    return Outcome{pass, "calibration: four-corner box " + fmt(s.four_corner_box) + " in [0.9, 1.1], middle-thirds corr " +
                             fmt(s.cantor_corr) + " in [0.58, 0.68], square box " + fmt(s.square_box) +
                             " in [1.9, 2.1]"};
  });

  Runs first;
  criterion("C8", 120.0, [&] {
    first = run_statistical(work / "run1");
    const TransversalityReport& a = first.planar;
    const TransversalityReport& b = first.extended;
    const bool pass = b.extended && b.target_order == 3 && in_range(a.median_exponent, 0.85, 1.15) &&
                      in_range(b.median_exponent, 2.6, 3.4);
    return Outcome{pass, "transversality: n=3 r^ " + fmt(a.median_exponent) + " in [0.85, 1.15] (" +
                             std::to_string(a.exponents.size()) + " directions, min " + fmt(a.min_exponent) +
                             "); extended n=4 r^ " + fmt(b.median_exponent) + " in [2.6, 3.4] (" +
                             std::to_string(b.exponents.size()) + " directions, min " + fmt(b.min_exponent) +
                             ", target " + std::to_string(b.target_order) + ")"};
  });

  criterion("C9", 300.0, [&] {
    first.bound = run_bound_check(read_experiment((kConfigs / "bound_check_four_corner.json").string()));
    write_report(first.bound, work / "run1" / "bound_check_four_corner");
    std::size_t ok = 0;
    double lowest = 1e300;
    for (const auto& row : first.bound.rows) {
      ok += row.estimate.value >= 0.88;
      lowest = std::min(lowest, row.estimate.value);
    }
    const double frac = static_cast<double>(ok) / static_cast<double>(first.bound.rows.size());
    return Outcome{first.bound.rows.size() == 64 && first.bound.bound == 1.0 && frac >= 0.95,
                   "bound check: " + std::to_string(ok) + "/" + std::to_string(first.bound.rows.size()) +
                       " rows >= 0.88 (need 95%), bound " + fmt(first.bound.bound) + ", lowest " + fmt(lowest)};
  });

  criterion("C10", 300.0, [&] {
    first.sharp = run_sharpness(read_experiment((kConfigs / "sharpness_cantor.json").string()));
    write_report(first.sharp, work / "run1" / "sharpness_cantor");
    std::size_t ok = 0;
    double lo = 1e300;
    double hi = -1e300;
    for (const auto& row : first.sharp.rows) {
      ok += in_range(row.estimate.value, 1.50, 1.78);
      lo = std::min(lo, row.estimate.value);
      hi = std::max(hi, row.estimate.value);
    }
    const double frac = static_cast<double>(ok) / static_cast<double>(first.sharp.rows.size());
    return Outcome{first.sharp.rows.size() == 64 && frac >= 0.90,
                   "sharpness: " + std::to_string(ok) + "/" + std::to_string(first.sharp.rows.size()) +
                       " rows in [1.50, 1.78] (need 90%), target " + fmt(first.sharp.target.value_or(0)) +
                       ", range [" + fmt(lo) + ", " + fmt(hi) + "]"};
  });

  criterion("C11", 0.0, [&] {
    const fs::path second = work / "run2";
    run_statistical(second);
    write_report(run_bound_check(read_experiment((kConfigs / "bound_check_four_corner.json").string())),
                 second / "bound_check_four_corner");
    write_report(run_sharpness(read_experiment((kConfigs / "sharpness_cantor.json").string())),
                 second / "sharpness_cantor");
    const auto a = snapshot(work / "run1");
    const auto b = snapshot(second);
    std::size_t differing = 0;
    std::string first_diff;
    for (const auto& [name, text] : a) {
      const auto it = b.find(name);
      if (it == b.end() || it->second != text) {
        if (differing++ == 0) first_diff = name;
      }
    }
    const bool pass = !a.empty() && a.size() == b.size() && differing == 0;
    return Outcome{pass, "determinism: " + std::to_string(a.size()) + " report files compared byte for byte, " +
                             std::to_string(differing) + " differ" + (differing ? " (first " + first_diff + ")" : "")};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
