#include <gtest/gtest.h>

#include <set>

#include "projlab/fractal.hpp"

using namespace projlab;

TEST(Fractal, FourCornerLevelOne) {
  const SampledMeasure mu = four_corner_cantor(1);
  ASSERT_EQ(mu.size(), 4U);
  std::set<std::pair<double, double>> corners;
  for (Eigen::Index i = 0; i < 4; ++i) {
    corners.insert({mu.points(i, 0), mu.points(i, 1)});
    EXPECT_DOUBLE_EQ(mu.weights[i], 0.25);
  }
  EXPECT_EQ(corners, (std::set<std::pair<double, double>>{{0, 0}, {0.75, 0}, {0, 0.75}, {0.75, 0.75}}));
  EXPECT_DOUBLE_EQ(mu.nominal_dim, 1.0);
}

TEST(Fractal, FourCornerLevelSix) {
  const SampledMeasure mu = four_corner_cantor(6);
  EXPECT_EQ(mu.size(), 4096U);
  EXPECT_NEAR(mu.weights.sum(), 1.0, 1e-12);
  EXPECT_NO_THROW(mu.validate());
  EXPECT_THROW(four_corner_cantor(0), InputError);
  EXPECT_THROW(four_corner_cantor(13), InputError);
}

TEST(Fractal, LineCantorWithUnitDimensionIsTheDyadicGrid) {
  const SampledMeasure mu = line_cantor(1.0, 4);
  ASSERT_EQ(mu.size(), 16U);
  std::vector<double> xs(mu.points.data(), mu.points.data() + 16);
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(xs[static_cast<std::size_t>(i)], i / 16.0, 1e-15);
  EXPECT_DOUBLE_EQ(mu.nominal_dim, 1.0);
}

TEST(Fractal, LineCantorMiddleThirds) {
  const SampledMeasure mu = line_cantor(std::log(2.0) / std::log(3.0), 2);
  std::vector<double> xs(mu.points.data(), mu.points.data() + 4);
  std::sort(xs.begin(), xs.end());
  const std::vector<double> expected{0.0, 2.0 / 9, 6.0 / 9, 8.0 / 9};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(xs[i], expected[i], 1e-14);
  EXPECT_THROW(line_cantor(0.0, 4), InputError);
  EXPECT_THROW(line_cantor(1.2, 4), InputError);
  EXPECT_THROW(line_cantor(0.5, 25), InputError);
}

TEST(Fractal, UnitIntervalBallIsCenteredUniform) {
  const std::size_t n = 100000;
  const SampledMeasure mu = lebesgue_ball(1, n, 42);
  EXPECT_LE(mu.points.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(std::abs(mu.points.col(0).mean()), 3.0 / std::sqrt(static_cast<double>(n)));
  // Var of U[-1, 1] is 1/3.
  EXPECT_NEAR(mu.points.col(0).squaredNorm() / n, 1.0 / 3.0, 0.01);
  EXPECT_DOUBLE_EQ(mu.nominal_dim, 1.0);
}

TEST(Fractal, BallSamplingIsDeterministicAcrossThreads) {
  const SampledMeasure a = lebesgue_ball(3, 10000, 7, 1);
  const SampledMeasure b = lebesgue_ball(3, 10000, 7, 4);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, lebesgue_ball(3, 10000, 8, 1).points);
  EXPECT_LE(a.points.rowwise().norm().maxCoeff(), 1.0);
}

TEST(Fractal, ProductAddsNominalDimensions) {
  const double s = 0.5;
  Matrix b1 = Matrix::Zero(3, 1);
  b1(1, 0) = 1;
  Matrix b2 = Matrix::Zero(3, 2);
  b2(0, 0) = 1;
  b2(2, 1) = 1;
  const SampledMeasure mu = product_embed({{line_cantor(s, 10), b1, {}}, {lebesgue_ball(2, 5000, 1), b2, {}}}, 3, 20000, 9);
  EXPECT_DOUBLE_EQ(mu.nominal_dim, 2.0 + s);
  EXPECT_EQ(mu.size(), 20000U);
  EXPECT_NEAR(mu.weights.sum(), 1.0, 1e-12);
  EXPECT_GE(mu.points.col(1).minCoeff(), 0.0);
  EXPECT_LE(mu.points.col(1).maxCoeff(), 1.0);
}

TEST(Fractal, ProductRejectsOverlappingFactors) {
  const Matrix b = Matrix::Identity(3, 1);
  EXPECT_THROW(product_embed({{line_cantor(1, 4), b, {}}, {line_cantor(1, 4), b, {}}}, 3, 10, 1), InputError);
  EXPECT_THROW(product_embed({}, 3, 10, 1), InputError);
}

TEST(Fractal, ValidateCatchesBrokenMeasures) {
  SampledMeasure mu = four_corner_cantor(2);
  mu.weights[0] += 0.1;
  EXPECT_THROW(mu.validate(), InputError);
  mu = four_corner_cantor(2);
  mu.weights[0] = -mu.weights[0];
  EXPECT_THROW(mu.validate(), InputError);
  mu = four_corner_cantor(2);
  mu.points(0, 0) = 5.0;
  EXPECT_THROW(mu.validate(), InputError);
}

TEST(Fractal, GenerateFromSpec) {
  auto inner = std::make_shared<MeasureSpec>(MeasureSpec{FourCornerCantorSpec{3}});
  MeasureSpec spec{EmbeddedSpec{inner, Matrix::Identity(3, 2), Vector::Zero(3)}};
  EXPECT_EQ(spec.ambient_dim(), 3);
  EXPECT_DOUBLE_EQ(spec.nominal_dim(), 1.0);
  const SampledMeasure a = generate(spec, 11);
  EXPECT_EQ(a.size(), 64U);
  EXPECT_EQ(a.ambient_dim(), 3);
  EXPECT_LE(a.points.rowwise().norm().maxCoeff(), 1.0 + 1e-12);
  EXPECT_EQ(a.points, generate(spec, 11).points);
  EXPECT_EQ(generate(MeasureSpec{AtomSpec{2}}, 0).size(), 1U);
}
