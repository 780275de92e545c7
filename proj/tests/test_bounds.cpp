#include <gtest/gtest.h>

#include "projlab/bounds.hpp"
#include "projlab/oracles.hpp"

using namespace projlab;

TEST(Bounds, BracketCeil) {
  EXPECT_EQ(bracket_ceil(-2.0), 0);
  EXPECT_EQ(bracket_ceil(1.5), 2);
  EXPECT_EQ(bracket_ceil(3.0), 3);
  EXPECT_EQ(bracket_ceil(0.0), 0);
  EXPECT_EQ(bracket_ceil(std::int64_t{3}, 2), 2);
  EXPECT_EQ(bracket_ceil(std::int64_t{-5}, 3), 0);
  EXPECT_EQ(bracket_ceil(std::int64_t{6}, 3), 2);
  EXPECT_THROW(bracket_ceil(std::int64_t{1}, 0), InputError);
  EXPECT_THROW(bracket_ceil(std::nan("")), InputError);
}

TEST(Bounds, PValues) {
  EXPECT_EQ(p_of_l(4, 2, 3, 0), 0);
  EXPECT_EQ(p_of_l(4, 2, 3, 1), 1);
  EXPECT_EQ(p_of_l(3, 2, 1, 1), 1);
  EXPECT_THROW(p_of_l(4, 2, 3, 2), InputError);
  EXPECT_THROW(p_of_l(4, 2, 4, 0), InputError);
  EXPECT_THROW(p_of_l(4, 4, 1, 0), InputError);
}

TEST(Bounds, PMatchesDotFillingPicture) {
  for (int n = 2; n <= 8; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k < m * (n - m); ++k)
        for (int l = 0; l < m; ++l) EXPECT_EQ(p_of_l(n, m, k, l), oracle::dot_filling_p(n, m, k, l));
}

TEST(Bounds, PIsNondecreasingInL) {
  for (int n = 2; n <= 8; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k < m * (n - m); ++k)
        for (int l = 0; l + 1 < m; ++l) EXPECT_LE(p_of_l(n, m, k, l), p_of_l(n, m, k, l + 1));
}

TEST(Bounds, LowerBoundExamples) {
  EXPECT_DOUBLE_EQ(theorem_lower_bound(3, 2, 1, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(theorem_lower_bound(3, 2, 1, 2.5), 1.5);
  EXPECT_DOUBLE_EQ(theorem_lower_bound(4, 2, 3, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(theorem_lower_bound(4, 2, 3, 0.0), 0.0);
  EXPECT_THROW(theorem_lower_bound(3, 2, 1, -0.1), InputError);
  EXPECT_THROW(theorem_lower_bound(3, 2, 1, 3.1), InputError);
}

TEST(Bounds, LowerBoundStaysInTrivialBandAndIsMonotone) {
  for (int n = 2; n <= 7; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k < m * (n - m); ++k) {
        double previous = 0.0;
        for (int step = 0; step <= 20 * n; ++step) {
          const double d = step / 20.0;
          const double b = theorem_lower_bound(n, m, k, d);
          EXPECT_GE(b, std::max(0.0, d - (n - m)) - 1e-12);
          EXPECT_LE(b, std::min(d, static_cast<double>(m)) + 1e-12);
          EXPECT_GE(b, previous - 1e-12);
          previous = b;
        }
      }
}

TEST(Bounds, LowerBoundReachesFullDimensionPastThreshold) {
  const BoundTable t = bound_table(4, 2, 3);
  EXPECT_EQ(t.p, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(t.absolute_continuity, 3.0);
  EXPECT_DOUBLE_EQ(theorem_lower_bound(4, 2, 3, 3.5), 2.0);
}

TEST(Bounds, KLimitsHoldOffSaturation) {
  const KLimits ok = k_limits(4, 2, 3, 1, p_of_l(4, 2, 3, 1));
  EXPECT_TRUE(ok.holds);
  EXPECT_EQ(ok.lower, 2);
  EXPECT_EQ(ok.upper, 3);
}

TEST(Bounds, KLimitsLowerInequalityCanFailWhenPSaturates) {
  // p(2) = n - m here, and the strict lower inequality reads 1 < 1.
  const int p = p_of_l(4, 3, 1, 2);
  EXPECT_EQ(p, 1);
  const KLimits limits = k_limits(4, 3, 1, 2, p);
  EXPECT_FALSE(limits.holds);
  EXPECT_EQ(limits.describe(), "1 < k <= 2");
}
