#include <gtest/gtest.h>

#include "projlab/checks.hpp"

using namespace projlab;

namespace {

// p(l) with the bracket rounded down instead of up.
int floor_p(int n, int m, int k, int l) {
  const int q = std::max(0, (k - l * (n - m)) / (m - l));
  return n - m - q;
}

const checks::CheckRow& row(const std::vector<checks::CheckRow>& rows, const std::string& name) {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw std::runtime_error("no row " + name);
}

}  // namespace

TEST(Suite, EveryRowPasses) {
  const auto rows = checks::run_suite();
  EXPECT_EQ(rows.size(), 14U);
  for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
}

TEST(Suite, FilterSelectsRows) {
  checks::SuiteOptions o;
  o.filter = "multivec";
  const auto rows = checks::run_suite(o);
  EXPECT_EQ(rows.size(), 3U);
  for (const auto& r : rows) EXPECT_EQ(r.name.rfind("multivec", 0), 0U);
}

TEST(Suite, FloorMutationIsCaught) {
  checks::SuiteOptions o;
  o.filter = "family.p_";
  o.p = floor_p;
  const auto rows = checks::run_suite(o);
  EXPECT_FALSE(row(rows, "family.p_enumeration").pass);
  EXPECT_NE(row(rows, "family.p_enumeration").detail.find("first"), std::string::npos);
}

TEST(Suite, ThrowingRowIsReportedAsFailure) {
  checks::SuiteOptions o;
  o.filter = "family.p_enumeration";
  o.p = [](int, int, int, int) -> int { throw InputError("boom"); };
  const auto rows = checks::run_suite(o);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_FALSE(rows[0].pass);
  EXPECT_NE(rows[0].detail.find("boom"), std::string::npos);
}

TEST(Suite, TsvHasOneLinePerRow) {
  checks::SuiteOptions o;
  o.filter = "grassmann";
  const std::string tsv = checks::suite_tsv(checks::run_suite(o));
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 3);
  EXPECT_EQ(tsv.rfind("check\tresult\tdetail\n", 0), 0U);
}

TEST(PEnumeration, CoversTheWholeRange) {
  const checks::PEnumerationStats s = checks::p_enumeration();
  EXPECT_EQ(s.mismatches, 0);
  EXPECT_EQ(s.monotone_breaks, 0);
  long expected = 0;
  checks::for_each_tuple(8, [&](int, int, int, int) { ++expected; });
  EXPECT_EQ(s.tuples, expected);
}

TEST(KLimits, HoldWheneverPIsBelowTheCodimension) {
  const checks::KLimitsStats s = checks::k_limits_scan(true);
  EXPECT_GT(s.tuples, 0);
  EXPECT_EQ(s.failures, 0) << s.first_failure;
}

TEST(KLimits, LowerInequalityFailsOnSomeSaturatedTuples) {
  const checks::KLimitsStats s = checks::k_limits_scan(false);
  EXPECT_GT(s.saturated_failures, 0);
  EXPECT_EQ(s.failures, s.saturated_failures);
}

TEST(Oracles, SeedChangesDoNotChangeVerdicts) {
  EXPECT_LE(checks::multivec_oracle(2000, 1).worst_gram_vs_minors, 1e-9);
  EXPECT_LE(checks::multivec_oracle(2000, 2).worst_gram_vs_minors, 1e-9);
  EXPECT_GE(checks::tangent_fd_order(30, 3).min_order, 1.9);
  EXPECT_GE(checks::tangent_fd_order(30, 4).min_order, 1.9);
  EXPECT_LE(checks::projbound(30, 5).worst_shortfall, 1e-9);
}

TEST(Oracles, DotFillingBoard) {
  EXPECT_EQ(oracle::dot_filling_p(4, 2, 3, 0), 0);
  EXPECT_EQ(oracle::dot_filling_p(4, 2, 3, 1), 1);
  EXPECT_EQ(oracle::dot_filling_p(3, 2, 1, 1), 1);
}

TEST(Oracles, LeibnizDeterminant) {
  Matrix a(3, 3);
  a << 2, 0, 1, 1, 3, 0, 0, 1, 4;
  EXPECT_DOUBLE_EQ(oracle::leibniz_det(a), 2 * 12 - 0 + 1 * 1);
  EXPECT_THROW(oracle::leibniz_det(Matrix::Zero(2, 3)), InputError);
}
