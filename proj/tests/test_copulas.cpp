#include <gtest/gtest.h>

#include <cmath>

#include "dgmd/copulas.hpp"
#include "oracles.hpp"

using namespace dgmd;

TEST(Copulas, FgmExamples) {
  const auto f = make_copula("fgm");
  EXPECT_NEAR(evaluate(f, 0.0, 0.3, 0.7), 0.21, 1e-15);
  EXPECT_NEAR(evaluate(f, 1.0, 0.5, 0.5), 0.3125, 1e-15);
  EXPECT_NEAR(evaluate(f, -1.0, 0.5, 0.5), 0.1875, 1e-15);
}

TEST(Copulas, UnknownFamily) {
  try {
    make_copula("clayton");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidFamilyId);
  }
}

TEST(Copulas, ThetaRange) {
  try {
    evaluate(fgm_copula(), 1.5, 0.5, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ThetaOutOfRange);
  }
  EXPECT_THROW(evaluate(independence_copula(), 0.5, 0.5, 0.5), Error);
}

TEST(Copulas, ValidityOnGrid) {
  EXPECT_TRUE(validate_copula(independence_copula(), 0.0).ok());
  for (double t : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
    const auto v = validate_copula(fgm_copula(), t);
    EXPECT_TRUE(v.boundary);
    EXPECT_TRUE(v.two_increasing);
    EXPECT_TRUE(v.frechet_bounds);
    EXPECT_TRUE(v.d1_matches_difference);
    EXPECT_TRUE(v.d2_matches_difference) << t;
  }
}

TEST(Copulas, ValidityCatchesBrokenFamily) {
  auto bad = fgm_copula();
  bad.c = [](double, double u, double v) { return std::min(u, v) * 1.1; };
  EXPECT_FALSE(validate_copula(bad, 0.5).ok());
}

TEST(Copulas, DiagonalBound) {
  EXPECT_EQ(diagonal_bound_check(independence_copula(), 0.0).conclusion_verified, Confirmation::holds);
  EXPECT_EQ(diagonal_bound_check(fgm_copula(), 1.0).conclusion_verified, Confirmation::holds);
  EXPECT_EQ(diagonal_bound_check(fgm_copula(), -1.0).conclusion_verified, Confirmation::holds);
}

TEST(Copulas, ConditionalInverseExamples) {
  EXPECT_NEAR(conditional_inverse(independence_copula(), 0.0, 0.77, 0.4), 0.4, 1e-15);
  for (double t : {-1.0, 0.4, 1.0}) {
    EXPECT_NEAR(conditional_inverse(fgm_copula(), t, 0.5, 0.3), 0.3, 1e-15);
  }
  EXPECT_NEAR(conditional_inverse(fgm_copula(), 1.0, 0.0, 0.5), (2.0 - std::sqrt(2.0)) / 2.0, 1e-14);
}

TEST(Copulas, ConditionalInverseSolvesD1AndIsIncreasing) {
  const auto f = fgm_copula();
  for (double t : {-1.0, -0.3, 0.6, 1.0}) {
    for (double u : {0.0, 0.1, 0.45, 0.9, 1.0}) {
      double prev = -1.0;
      for (int i = 0; i <= 200; ++i) {
        const double w = i / 200.0;
        const double v = conditional_inverse(f, t, u, w);
        EXPECT_NEAR(f.d1(t, u, v), w, 1e-13);
        EXPECT_GE(v, prev);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        prev = v;
      }
    }
  }
}

TEST(Copulas, BisectionAgreesWithClosedForm) {
  const auto f = fgm_copula();
  for (double w : {0.05, 0.5, 0.93}) {
    EXPECT_NEAR(bisect_conditional_inverse(f, 0.8, 0.2, w), conditional_inverse(f, 0.8, 0.2, w), 1e-14);
  }
}

TEST(Copulas, FgmDiagonalSymmetry) {
  const auto f = fgm_copula();
  for (double t = -1.0; t <= 1.0 + 1e-12; t += 0.25) {
    for (int i = 0; i <= 1000; ++i) {
      const double u = 0.5 * i / 1000.0;
      EXPECT_NEAR(f.d2(t, u, u) + f.d2(t, 1.0 - u, 1.0 - u), 1.0, 1e-12);
    }
  }
}

TEST(Copulas, D2MatchesFiniteDifference) {
  const auto f = fgm_copula();
  for (double t : {-1.0, 0.5}) {
    for (double u : {0.2, 0.6}) {
      for (double v : {0.1, 0.5, 0.8}) {
        const double fd = oracle::central_difference([&](double y) { return f.c(t, u, y); }, v, 1e-6);
        EXPECT_NEAR(f.d2(t, u, v), fd, 1e-5 * std::abs(fd));
      }
    }
  }
}
