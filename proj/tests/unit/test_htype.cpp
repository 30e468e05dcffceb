#include <gtest/gtest.h>

#include <random>

#include "hna/htype.hpp"

using namespace hna;

namespace {

Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace

TEST(HType, ComplexStructureIsCounterclockwiseRotation) {
  const auto alg = build_htype(1, 1);
  EXPECT_EQ(alg.m(), 2);
  EXPECT_EQ(alg.n(), 4);
  EXPECT_DOUBLE_EQ(alg.Q(), 2.0);
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  EXPECT_NEAR((alg.J(0) * e1 - e2).norm(), 0.0, 0.0);
  EXPECT_DOUBLE_EQ(alg.bracket(e1, e2)(0), 1.0);
  EXPECT_NEAR((alg.J(0) * alg.J(0) + Mat::Identity(2, 2)).norm(), 0.0, 0.0);
}

TEST(HType, DimensionsPerCenterDimension) {
  EXPECT_EQ(build_htype(1, 3).m(), 6);
  EXPECT_EQ(build_htype(2, 1).m(), 4);
  EXPECT_EQ(build_htype(3, 2).m(), 8);
  EXPECT_EQ(build_htype(7, 1).m(), 8);
  EXPECT_EQ(build_htype(3, 1).n(), 8);
  EXPECT_DOUBLE_EQ(build_htype(3, 1).Q(), 5.0);
}

TEST(HType, AllProductsOfQuaternionUnitsAnticommute) {
  const auto alg = build_htype(3, 1);
  const Mat I = Mat::Identity(4, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Mat anti = alg.J(i) * alg.J(j) + alg.J(j) * alg.J(i);
      const Mat expect = (i == j) ? Mat(-2.0 * I) : Mat(Mat::Zero(4, 4));
      EXPECT_EQ((anti - expect).cwiseAbs().maxCoeff(), 0.0) << i << "," << j;
    }
}

TEST(HType, CliffordRelationsHoldForEverySupportedK) {
  for (int k : {1, 2, 3, 7})
    for (int b : {1, 2}) EXPECT_EQ(build_htype(k, b).clifford_defect(), 0.0) << "k=" << k << " b=" << b;
}

TEST(HType, RejectsUnsupportedInput) {
  EXPECT_THROW(build_htype(4, 1), std::invalid_argument);
  EXPECT_THROW(build_htype(1, 0), std::invalid_argument);
  EXPECT_THROW(build_htype(1, -2), std::invalid_argument);
}

TEST(HType, AdmissibilityTable) {
  EXPECT_TRUE(is_admissible(1, 2));
  EXPECT_TRUE(is_admissible(3, 4));
  EXPECT_FALSE(is_admissible(3, 2));
  EXPECT_EQ(minimal_v_dimension(4), 8);
  EXPECT_EQ(minimal_v_dimension(8), 16);
  EXPECT_EQ(minimal_v_dimension(9), 32);
  EXPECT_FALSE(is_admissible(4, 2));
}

TEST(HType, JZSquaredIsMinusNormSquared) {
  std::mt19937_64 rng(7);
  for (int k : {1, 2, 3, 7}) {
    const auto alg = build_htype(k, 2);
    double worst = 0.0, skew = 0.0, isom = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const Vec Z = random_vec(rng, k), X = random_vec(rng, alg.m());
      const Vec JX = alg.apply_JZ(Z, X);
      worst = std::max(worst, (alg.apply_JZ(Z, JX) + Z.squaredNorm() * X).norm());
      skew = std::max(skew, std::abs(JX.dot(X)));
      isom = std::max(isom, std::abs(JX.norm() - Z.norm() * X.norm()));
    }
    EXPECT_LT(worst, 1e-12) << "k=" << k;
    EXPECT_LT(skew, 1e-12) << "k=" << k;
    EXPECT_LT(isom, 1e-12) << "k=" << k;
  }
}

TEST(HType, ZeroCenterVectorGivesZeroMap) {
  const auto alg = build_htype(3, 1);
  std::mt19937_64 rng(3);
  EXPECT_EQ(alg.apply_JZ(Vec::Zero(3), random_vec(rng, 4)).norm(), 0.0);
}

TEST(HType, BracketIsAntisymmetricAndDualToJ) {
  std::mt19937_64 rng(11);
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    for (int s = 0; s < 100; ++s) {
      const Vec X = random_vec(rng, alg.m()), Y = random_vec(rng, alg.m()), Z = random_vec(rng, k);
      EXPECT_LT(alg.bracket(X, X).norm(), 1e-14);
      EXPECT_LT((alg.bracket(X, Y) + alg.bracket(Y, X)).norm(), 1e-14);
      EXPECT_EQ(alg.bracket(X, Y).size(), k);
      EXPECT_NEAR(alg.apply_JZ(Z, X).dot(Y), Z.dot(alg.bracket(X, Y)), 1e-12);
    }
  }
}

TEST(HType, DimensionMismatchThrows) {
  const auto alg = build_htype(2, 1);
  EXPECT_THROW(alg.bracket(Vec::Zero(3), Vec::Zero(4)), std::invalid_argument);
  EXPECT_THROW(alg.apply_JZ(Vec::Zero(3), Vec::Zero(4)), std::invalid_argument);
}

TEST(HType, JsonSummary) {
  const auto j = build_htype(1, 1).to_json();
  EXPECT_EQ(j.at("k"), 1);
  EXPECT_EQ(j.at("m"), 2);
  EXPECT_EQ(j.at("n"), 4);
  EXPECT_EQ(j.at("Q"), 2.0);
  EXPECT_EQ(j.at("J")[0][0][1], -1.0);
  EXPECT_EQ(j.at("J")[0][1][0], 1.0);
}
