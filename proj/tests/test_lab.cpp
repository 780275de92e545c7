#include <gtest/gtest.h>

#include <filesystem>

#include "projlab/lab.hpp"

using namespace projlab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(PROJLAB_SOURCE_DIR) / "configs";

Json small_bound_check() {
  return parse_json(R"({
    "mode": "bound_check",
    "seed": 17,
    "family": {"n": 3, "m": 2, "k": 1, "base": "standard",
               "schedule": [{"param": 1, "i": 1, "j": 3}], "radius": 0.6},
    "measure": {"type": "embedded", "inner": {"type": "four_corner_cantor", "level": 6},
                "basis": [[0.6666666666666666, 0.3333333333333333, -0.6666666666666666],
                          [-0.6666666666666666, 0.6666666666666666, -0.3333333333333333]]},
    "lambda_grid": [3],
    "tolerance": 0.15
  })",
                    "test");
}

std::string slurp(const fs::path& p) { return detail::read_text(p.string()); }

}  // namespace

TEST(Grid, CellCentredLexicographic) {
  const RotationFamily family(make_slot_family(4, 2, {{0, 2}, {1, 3}}, 0.4));
  const std::vector<Vector> grid = lambda_grid(family, {2, 3});
  ASSERT_EQ(grid.size(), 6U);
  EXPECT_NEAR(grid[0][0], -0.2, 1e-15);
  EXPECT_NEAR(grid[0][1], -0.4 + 0.8 / 6, 1e-15);
  EXPECT_NEAR(grid[1][1], 0.0, 1e-15);
  EXPECT_NEAR(grid[3][0], 0.2, 1e-15);
  for (const auto& g : grid) EXPECT_TRUE(family.contains(g));
  EXPECT_THROW(lambda_grid(family, {2}), InputError);
}

TEST(Config, SeedIsRequiredOutsideVerify) {
  Json j = small_bound_check();
  j.erase("seed");
  EXPECT_THROW(experiment_from_json(j), InputError);
  EXPECT_NO_THROW(experiment_from_json(parse_json(R"({"mode": "verify_suite"})", "t")));
  EXPECT_THROW(experiment_from_json(parse_json(R"({"mode": "explore", "seed": 1})", "t")), InputError);
}

TEST(Config, HashFollowsTheDocument) {
  const ExperimentConfig a = experiment_from_json(small_bound_check());
  Json j = small_bound_check();
  j["seed"] = 18;
  EXPECT_EQ(config_hash(a), config_hash(experiment_from_json(small_bound_check())));
  EXPECT_NE(config_hash(a), config_hash(experiment_from_json(j)));
}

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"bound_check_four_corner.json", "bound_check_ball.json", "bound_check_n4.json",
                           "bound_check_degenerate.json", "sharpness_cantor.json", "sharpness_uniform.json",
                           "sharpness_atom.json", "transversality_n3.json", "transversality_n4_extended.json"}) {
    EXPECT_NO_THROW(read_experiment((kConfigs / name).string())) << name;
  }
}

TEST(BoundCheck, SmallRunMeetsTheBound) {
  const ExperimentReport r = run_bound_check(experiment_from_json(small_bound_check()));
  ASSERT_EQ(r.rows.size(), 3U);
  EXPECT_DOUBLE_EQ(r.bound, 1.0);
  EXPECT_EQ(r.violation_fraction, 0.0);
  for (const auto& row : r.rows) EXPECT_NEAR(row.estimate.value, 1.0, 0.15);
}

TEST(BoundCheck, GridNeedsThreePointsPerAxis) {
  Json j = small_bound_check();
  j["lambda_grid"] = {2};
  EXPECT_THROW(run_bound_check(experiment_from_json(j)), InputError);
}

TEST(BoundCheck, DegenerateFamilyIsRefusedUnlessForced) {
  Json j = small_bound_check();
  j["family"] = read_json_file((kConfigs / "family_degenerate.json").string());
  j["measure"] = parse_json(R"({"type": "atom", "dim": 4})", "t");
  j["lambda_grid"] = {3, 3};
  EXPECT_THROW(run_bound_check(experiment_from_json(j)), RefusedError);
  j["force"] = true;
  const ExperimentReport r = run_bound_check(experiment_from_json(j));
  EXPECT_EQ(r.rows.size(), 9U);
  EXPECT_LT(r.nondegeneracy, 1e-6);
}

TEST(BoundCheck, ReportsAreDeterministic) {
  const ExperimentConfig cfg = experiment_from_json(small_bound_check());
  const fs::path a = fs::temp_directory_path() / "projlab_lab_a";
  const fs::path b = fs::temp_directory_path() / "projlab_lab_b";
  fs::remove_all(a);
  fs::remove_all(b);
  write_report(run_bound_check(cfg), a);
  ExperimentConfig threaded = cfg;
  threaded.threads = 3;
  write_report(run_bound_check(threaded), b);
  for (const char* f : {"report.json", "per-lambda.csv", "fitdata/lambda_0000.csv", "fitdata/lambda_0002.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  const std::string csv = slurp(a / "per-lambda.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda_1,est_dim,bound,margin,fit_r2");
  const Json report = read_json_file((a / "report.json").string());
  EXPECT_EQ(report["provenance"]["seed"], 17);
  EXPECT_FALSE(report.contains("runtime_seconds"));
}

TEST(Sharpness, MeasureHasDimensionLPlusPPlusS) {
  SharpnessConfig c;
  c.n = 4;
  c.m = 2;
  c.k = 3;
  c.l = 1;
  c.p = 1;
  c.s = 0.5;
  const MeasureSpec spec = sharpness_measure(c);
  EXPECT_EQ(spec.ambient_dim(), 4);
  EXPECT_DOUBLE_EQ(spec.nominal_dim(), 2.5);
  c.s = 0.0;
  EXPECT_DOUBLE_EQ(sharpness_measure(c).nominal_dim(), 2.0);
}

TEST(Sharpness, KLimitsViolationNamesTheInequality) {
  Json j = parse_json(R"({"mode": "sharpness", "seed": 1, "lambda_grid": [3, 3, 3],
                          "sharpness": {"n": 4, "m": 2, "k": 3, "l": 1, "p": 0, "s": 0.5}})",
                      "t");
  try {
    run_sharpness(experiment_from_json(j));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("k <="), std::string::npos) << e.what();
  }
}

TEST(Sharpness, AtomCaseLandsOnL) {
  Json j = parse_json(R"({"mode": "sharpness", "seed": 2, "lambda_grid": [3], "tolerance": 0.12,
                          "sharpness": {"n": 3, "m": 2, "k": 1, "l": 1, "p": 1, "s": 0.0, "points": 30000}})",
                      "t");
  const ExperimentReport r = run_sharpness(experiment_from_json(j));
  ASSERT_TRUE(r.target.has_value());
  EXPECT_DOUBLE_EQ(*r.target, 1.0);
  EXPECT_EQ(r.in_band_fraction, 1.0);
}

TEST(Transversality, PlanarFamilyHasExponentOne) {
  Json j = parse_json(R"({"mode": "transversality", "seed": 3,
                          "family": {"n": 3, "m": 2, "k": 1, "base": "standard",
                                     "schedule": [{"param": 1, "i": 1, "j": 3}], "radius": 0.7},
                          "transversality": {"directions": 2, "samples": 100000,
                                             "fixed_directions": [[0, 1, 0]]}})",
                      "t");
  const TransversalityReport r = run_transversality(experiment_from_json(j));
  EXPECT_EQ(r.target_order, 1);
  EXPECT_EQ(r.directions.size(), 3U);
  EXPECT_EQ(r.excluded, 1U);  // e2 stays in every plane
  ASSERT_EQ(r.exponents.size(), 2U);
  EXPECT_NEAR(r.median_exponent, 1.0, 0.15);
  const Json out = to_json(r);
  EXPECT_EQ(out["directions"].size(), 3U);
}
