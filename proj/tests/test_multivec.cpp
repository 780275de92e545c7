#include <gtest/gtest.h>

#include "projlab/multivec.hpp"
#include "projlab/oracles.hpp"
#include "projlab/random.hpp"

using namespace projlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Multivec, GramNormOfOrthonormalPairIsOne) {
  EXPECT_NEAR(gram_norm(SimpleMultivector(std::vector<Vector>{vec({1, 0, 0}), vec({0, 1, 0})})), 1.0, 1e-15);
}

TEST(Multivec, GramNormIgnoresShear) {
  EXPECT_NEAR(gram_norm(SimpleMultivector(std::vector<Vector>{vec({1, 0, 0}), vec({1, 1, 0})})), 1.0, 1e-15);
}

TEST(Multivec, DependentVectorsHaveZeroNorm) {
  const SimpleMultivector v(std::vector<Vector>{vec({1, 2, 3}), vec({2, 4, 6})});
  EXPECT_LE(gram_norm(v), 1e-12);
  EXPECT_TRUE(is_dependent(v));
  EXPECT_FALSE(is_dependent(SimpleMultivector(std::vector<Vector>{vec({1, 0}), vec({0, 1})})));
}

TEST(Multivec, CauchyBinetMatchesGramOnRandomIntegers) {
  Engine rng = make_engine(7, 0);
  std::uniform_int_distribution<int> digit(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix d(2, 4);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = digit(rng);
    const auto v = SimpleMultivector::from_rows(d);
    EXPECT_NEAR(cauchy_binet_norm(v), gram_norm(v), 1e-10);
  }
}

TEST(Multivec, SquareCaseMatchesLeibnizDeterminant) {
  Engine rng = make_engine(8, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix d(4, 4);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = gaussian_vector(rng, 1)[0];
    EXPECT_NEAR(gram_norm(SimpleMultivector::from_rows(d)), std::abs(oracle::leibniz_det(d)), 1e-10);
  }
}

TEST(Multivec, OrderAboveAmbientDimensionIsRejected) {
  EXPECT_THROW(SimpleMultivector(std::vector<Vector>{vec({1, 0}), vec({0, 1}), vec({1, 1})}), InputError);
}

TEST(Multivec, MismatchedLengthsAreRejected) {
  EXPECT_THROW(SimpleMultivector(std::vector<Vector>{vec({1, 0, 0}), vec({0, 1})}), InputError);
  EXPECT_THROW(SimpleMultivector(std::vector<Vector>{}), InputError);
}

TEST(Multivec, NormIsInvariantUnderOrthogonalMaps) {
  Engine rng = make_engine(9, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix cols = Matrix::Random(5, 3);
    const Matrix q = random_orthonormal(rng, 5, 5);
    const double before = gram_norm(SimpleMultivector::from_columns(cols));
    const double after = gram_norm(SimpleMultivector::from_columns(q * cols));
    EXPECT_NEAR(before, after, 1e-12 * std::max(1.0, before));
  }
}

TEST(Multivec, NormIsMultilinearInEachFactor) {
  const Matrix cols = Matrix::Random(4, 2);
  Matrix scaled = cols;
  scaled.col(1) *= -2.5;
  EXPECT_NEAR(gram_norm(SimpleMultivector::from_columns(scaled)),
              2.5 * gram_norm(SimpleMultivector::from_columns(cols)), 1e-12);
}

TEST(Multivec, WedgeOperatorNormOfDiagonalMaps) {
  EXPECT_NEAR(wedge_operator_norm(Matrix::Identity(3, 3), 2), 1.0, 1e-15);
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 2.0, 3.0, 0.5;
  EXPECT_NEAR(wedge_operator_norm(d, 2), 6.0, 1e-12);
  EXPECT_NEAR(wedge_operator_norm(d, 3), 3.0, 1e-12);
  EXPECT_THROW(wedge_operator_norm(d, 0), InputError);
  EXPECT_THROW(wedge_operator_norm(d, 4), InputError);
}

TEST(Multivec, WedgeApplyIsBoundedByOperatorNorm) {
  Engine rng = make_engine(10, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = Matrix::Random(4, 5);
    const auto v = SimpleMultivector::from_columns(Matrix::Random(5, 2));
    EXPECT_LE(gram_norm(wedge_apply(a, v)), wedge_operator_norm(a, 2) * gram_norm(v) * (1 + 1e-10));
  }
}

TEST(Multivec, PerpendicularFactorsMultiply) {
  EXPECT_TRUE(perp_factor_check({vec({1, 0, 0, 0}), vec({0, 1, 0, 0})}, {vec({0, 0, 0, 2})}));
  EXPECT_TRUE(perp_factor_check({vec({1, 1, 0})}, {vec({1, -1, 0}), vec({0, 0, 3})}));
}

TEST(Multivec, PerpendicularFactorsRequireOrthogonality) {
  EXPECT_THROW(perp_factor_check({vec({1, 0, 0})}, {vec({1, 0, 0})}), PreconditionError);
}
