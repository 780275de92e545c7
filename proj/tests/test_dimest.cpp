#include <gtest/gtest.h>

#include "projlab/checks.hpp"
#include "projlab/dimest.hpp"

using namespace projlab;

namespace {

SampledMeasure corners_in_space(int level) {
  return embed(four_corner_cantor(level), Matrix::Identity(3, 2), Vector::Zero(3));
}

SampledMeasure unit_interval(std::size_t count, std::uint64_t seed) {
  SampledMeasure mu = lebesgue_ball(1, count, seed);
  mu.points = (mu.points.array() + 1.0) / 2.0;
  return mu;
}

SampledMeasure two_atoms() {
  SampledMeasure mu;
  mu.points = Matrix::Zero(2, 2);
  mu.points(1, 0) = 1.0;
  mu.weights = Vector::Constant(2, 0.5);
  return mu;
}

}  // namespace

TEST(Projection, PlanarDataIsUnchanged) {
  const SampledMeasure mu = corners_in_space(4);
  const SampledMeasure out = project_points(Frame::standard(3, 2), mu);
  EXPECT_LE((out.points - mu.points).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(out.weights, mu.weights);
}

TEST(Projection, OrthogonalLineKillsThePlane) {
  const Frame e3 = Frame::from_basis(Matrix(Vector::Unit(3, 2)));
  const SampledMeasure out = project_points(e3, corners_in_space(4));
  EXPECT_EQ(out.points.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(out.weights.sum(), 1.0, 1e-12);
  EXPECT_THROW(project_points(Frame::standard(4, 2), corners_in_space(2)), InputError);
}

TEST(BoxCounting, UniformSquare) {
  const DimensionEstimate e = box_counting_dim(checks::uniform_square(100000, 1));
  EXPECT_NEAR(e.value, 2.0, 0.1);
  EXPECT_GE(e.scales_used, 4U);
  EXPECT_TRUE(e.warning.empty()) << e.warning;
}

TEST(BoxCounting, FourCornerCantor) {
  const DimensionEstimate e = box_counting_dim(four_corner_cantor(8));
  EXPECT_NEAR(e.value, 1.0, 0.1);
  EXPECT_GT(e.r_squared, 0.99);
  std::size_t used = 0;
  for (const auto& p : e.fit_data) used += p.used;
  EXPECT_EQ(used, e.scales_used);
  EXPECT_GE(e.scale_max, e.scale_min);
}

TEST(BoxCounting, SinglePointIsZeroDimensional) {
  const DimensionEstimate e = box_counting_dim(atom(2));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_FALSE(e.warning.empty());
}

TEST(BoxCounting, WarnsOnSmallSamples) {
  const DimensionEstimate e = box_counting_dim(four_corner_cantor(4));
  EXPECT_NE(e.warning.find("1000"), std::string::npos) << e.warning;
}

TEST(Correlation, UnitInterval) {
  const DimensionEstimate e = correlation_dim(unit_interval(100000, 2));
  EXPECT_NEAR(e.value, 1.0, 0.1);
}

TEST(Correlation, MiddleThirdsCantor) {
  const DimensionEstimate e = correlation_dim(line_cantor(std::log(2.0) / std::log(3.0), 10));
  EXPECT_NEAR(e.value, 0.63, 0.07);
}

TEST(Correlation, TwoAtomsAreZeroDimensional) {
  const DimensionEstimate e = correlation_dim(two_atoms());
  EXPECT_EQ(e.value, 0.0);
  EXPECT_FALSE(e.warning.empty());
}

TEST(Correlation, DeterministicPerSeed) {
  const SampledMeasure mu = four_corner_cantor(6);
  CorrelationOptions a;
  a.seed = 3;
  a.pair_budget = 200000;
  CorrelationOptions b = a;
  b.threads = 4;
  EXPECT_EQ(correlation_dim(mu, a).value, correlation_dim(mu, b).value);
}

TEST(Estimators, RotationInvariance) {
  Engine rng = make_engine(41, 0);
  const SampledMeasure mu = corners_in_space(8);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix q = random_orthonormal(rng, 3, 3);
    SampledMeasure rotated = mu;
    rotated.points = mu.points * q.transpose();
    EXPECT_NEAR(box_counting_dim(mu).value, box_counting_dim(rotated).value, 0.02);
    EXPECT_NEAR(correlation_dim(mu).value, correlation_dim(rotated).value, 0.02);
  }
}

TEST(Estimators, ProjectionDoesNotRaiseDimension) {
  Engine rng = make_engine(42, 0);
  const SampledMeasure mu = corners_in_space(8);
  const double full = box_counting_dim(mu).value;
  for (int trial = 0; trial < 4; ++trial) {
    const Frame f = Frame::from_basis(random_orthonormal(rng, 3, 2));
    const double projected = box_counting_dim(project_points(f, mu)).value;
    EXPECT_LE(projected, full + 0.1);
    EXPECT_GE(projected, full - 1.0 - 0.1);
  }
}

TEST(Estimators, CorrelationDoesNotExceedBoxCounting) {
  const std::vector<SampledMeasure> panel{four_corner_cantor(8), line_cantor(0.5, 14),
                                          line_cantor(std::log(2.0) / std::log(3.0), 12), lebesgue_ball(2, 50000, 5)};
  for (const auto& mu : panel)
    EXPECT_LE(correlation_dim(mu).value, box_counting_dim(mu).value + 0.15) << mu.provenance;
}

TEST(Energy, FiniteBelowTheDimension) {
  const EnergyDiagnostic d = energy_diagnostic(unit_interval(200000, 6), 0.5, 4096, 1);
  EXPECT_TRUE(d.finite_trend);
  EXPECT_EQ(d.sizes, (std::vector<std::size_t>{16, 256, 4096}));
  EXPECT_FALSE(d.clipped_flag);
}

TEST(Energy, DivergesAboveTheDimension) {
  const EnergyDiagnostic d = energy_diagnostic(unit_interval(200000, 6), 1.2, 4096, 1);
  EXPECT_FALSE(d.finite_trend);
}

TEST(Energy, SmallExponentRecoversTotalMass) {
  const EnergyDiagnostic d = energy_diagnostic(unit_interval(200000, 6), 1e-9, 4096, 1);
  EXPECT_NEAR(d.values.back(), 1.0, 1e-3);
  EXPECT_THROW(energy_diagnostic(unit_interval(10, 6), 0.0, 4096, 1), InputError);
  EXPECT_THROW(energy_diagnostic(unit_interval(10, 6), 0.5, 100, 1), InputError);
}
