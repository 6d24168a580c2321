#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dgmd/distributions.hpp"
#include "oracles.hpp"

using namespace dgmd;

namespace {

std::vector<ContinuousDistribution> catalog() {
  return {exponential(1.0), exponential(2.5), uniform(0.0, 1.0), uniform(-1.0, 3.0),
          weibull(2.0, 1.0), weibull(0.5, 1.0), weibull(1.5, 2.0), power_law(2.0),
          power_law(0.5)};
}

std::vector<double> interior(int n = 199) {
  std::vector<double> g;
  for (int i = 1; i <= n; ++i) g.push_back(static_cast<double>(i) / (n + 1));
  return g;
}

}  // namespace

TEST(Distributions, DqdfExamples) {
  EXPECT_NEAR(dqdf(exponential(1.0), 0.5), 2.0, 1e-12);
  EXPECT_NEAR(dqdf(uniform(0.0, 1.0), 0.3), 1.0, 1e-12);
  EXPECT_NEAR(dqdf(power_law(2.0), 0.75), 1.0, 1e-12);
}

TEST(Distributions, GmdExamples) {
  EXPECT_NEAR(gmd(exponential(1.0)), 1.0, 1e-9);
  EXPECT_NEAR(gmd(uniform(0.0, 1.0)), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(gmd(power_law(2.0)), 4.0 / 15.0, 1e-10);
  EXPECT_NEAR(gmd(weibull(1.0, 1.0)), 1.0, 1e-9);
}

TEST(Distributions, GiniIndexExamples) {
  EXPECT_NEAR(gini_index(exponential(1.0)), 0.5, 1e-9);
  EXPECT_NEAR(gini_index(uniform(0.0, 1.0)), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(gini_index(uniform(0.0, 2.0)), 1.0 / 3.0, 1e-10);
}

TEST(Distributions, GiniIndexScaleInvariant) {
  for (const auto& d : catalog()) {
    if (d.lower() < 0.0) continue;
    EXPECT_NEAR(gini_index(scaled(d, 3.7)), gini_index(d), 1e-9) << d.label();
  }
}

TEST(Distributions, ZeroMeanGiniThrows) {
  try {
    gini_index(uniform(-1.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMean);
  }
}

TEST(Distributions, SfInverseRoundTrip) {
  for (const auto& d : catalog()) {
    for (double u : interior()) {
      EXPECT_NEAR(d.sf(d.sf_inverse(u)), u, 1e-10) << d.label() << " u=" << u;
    }
  }
}

TEST(Distributions, InverseOfSfRoundTrip) {
  for (const auto& d : catalog()) {
    for (double u : interior(49)) {
      const double x = d.sf_inverse(u);
      EXPECT_NEAR(d.sf_inverse(d.sf(x)), x, 1e-9 * std::max(1.0, std::abs(x))) << d.label();
    }
  }
}

TEST(Distributions, PdfIsMinusSfDerivative) {
  for (const auto& d : catalog()) {
    for (double u : interior(39)) {
      const double x = d.sf_inverse(u);
      const double fd = -oracle::central_difference([&](double t) { return d.sf(t); }, x, 1e-6);
      EXPECT_NEAR(d.pdf(x), fd, 1e-6 * std::max(1.0, d.pdf(x))) << d.label() << " x=" << x;
    }
  }
}

TEST(Distributions, StoredMeanMatchesQuadrature) {
  for (const auto& d : catalog()) {
    EXPECT_NEAR(mean_by_quadrature(d).value, d.mean(), 1e-8 * std::max(1.0, d.mean())) << d.label();
  }
}

TEST(Distributions, DqdfMatchesQuantileDerivative) {
  for (const auto& d : catalog()) {
    for (double u : interior(39)) {
      const double fd = -oracle::central_difference([&](double v) { return d.sf_inverse(v); }, u, 1e-6);
      const double q = dqdf(d, u);
      EXPECT_NEAR(q, fd, 1e-5 * std::abs(q)) << d.label() << " u=" << u;
    }
  }
}

TEST(Distributions, DqdfUpperUsesComplement) {
  const auto d = exponential(1.0);
  // q(1 - s) = 1/(1 - s) computed without cancellation for tiny s.
  EXPECT_NEAR(dqdf_upper(d, 1e-12), 1.0 / (1.0 - 1e-12), 1e-15);
  EXPECT_NEAR(dqdf_pair(d, 0.25, 0.75), 4.0, 1e-12);
  EXPECT_NEAR(dqdf_pair(d, 0.75, 0.25), 1.0 / 0.75, 1e-12);
}

TEST(Distributions, ShiftAndScale) {
  const auto d = shifted(exponential(1.0), 3.0);
  EXPECT_DOUBLE_EQ(d.lower(), 3.0);
  EXPECT_DOUBLE_EQ(d.mean(), 4.0);
  EXPECT_NEAR(gmd(d), 1.0, 1e-9);
  const auto s = scaled(exponential(1.0), 2.5);
  EXPECT_NEAR(gmd(s), 2.5, 1e-8);
}

TEST(Distributions, InvalidParametersRejected) {
  auto code = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([] { return exponential(0.0); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { return uniform(1.0, 1.0); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { return weibull(-1.0, 1.0); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { return power_law(0.0); }), ErrorCode::InvalidDistribution);
}

TEST(Distributions, CustomDistributionMeanIsValidated) {
  auto sf = [](double x) { return x <= 0 ? 1.0 : (x >= 1 ? 0.0 : 1.0 - x); };
  auto pdf = [](double x) { return (x < 0 || x > 1) ? 0.0 : 1.0; };
  auto inv = [](double u) { return 1.0 - u; };
  EXPECT_NO_THROW(make_distribution("u01", sf, pdf, inv, Support{0.0, 1.0}, 0.5));
  try {
    make_distribution("u01", sf, pdf, inv, Support{0.0, 1.0}, 0.6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDistribution);
  }
}

TEST(Aging, ExponentialIsBoundaryEverywhere) {
  const auto r = aging_class(exponential(1.0));
  EXPECT_EQ(r.ifr, Verdict::boundary);
  EXPECT_EQ(r.dfr, Verdict::boundary);
  EXPECT_EQ(r.nbu, Verdict::boundary);
  EXPECT_EQ(r.nwu, Verdict::boundary);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Aging, WeibullShapes) {
  const auto inc = aging_class(weibull(2.0, 1.0));
  EXPECT_EQ(inc.ifr, Verdict::holds);
  EXPECT_EQ(inc.nbu, Verdict::holds);
  EXPECT_EQ(inc.dfr, Verdict::fails);
  const auto dec = aging_class(weibull(0.5, 1.0));
  EXPECT_EQ(dec.dfr, Verdict::holds);
  EXPECT_EQ(dec.nwu, Verdict::holds);
  EXPECT_EQ(dec.ifr, Verdict::fails);
}

TEST(Aging, IfrAndDfrTogetherOnlyAtBoundary) {
  for (const auto& d : catalog()) {
    const auto r = aging_class(d);
    if (r.ifr != Verdict::fails && r.dfr != Verdict::fails) {
      EXPECT_EQ(r.ifr, Verdict::boundary) << d.label();
      EXPECT_EQ(r.dfr, Verdict::boundary) << d.label();
    }
  }
}

TEST(Aging, WitnessViolatesItsInequality) {
  for (const auto& d : catalog()) {
    const auto r = aging_class(d);
    if (!r.witness) continue;
    const auto& w = *r.witness;
    if (w.property == "nbu" || w.property == "nwu") {
      const double gap = d.sf(w.x + w.t) - d.sf(w.x) * d.sf(w.t);
      if (w.property == "nbu") {
        EXPECT_GT(gap, 1e-9) << d.label();
      } else {
        EXPECT_LT(gap, -1e-9) << d.label();
      }
    } else {
      // Hazard witnesses: hazard at x vs at the later point t.
      const double hx = d.pdf(w.x) / d.sf(w.x);
      const double ht = d.pdf(w.t) / d.sf(w.t);
      if (w.property == "ifr") {
        EXPECT_GT(hx - ht, 0.0) << d.label();
      } else {
        EXPECT_LT(hx - ht, 0.0) << d.label();
      }
    }
  }
}

TEST(Assumption23_24, UniformIsBoundary) {
  const auto r = assumption_2_3_2_4(uniform(0.0, 1.0));
  EXPECT_EQ(r.direction, Direction::both_boundary);
  EXPECT_EQ(r.hypotheses.at("A2.3"), "holds");
  EXPECT_EQ(r.hypotheses.at("A2.4"), "holds");
}

TEST(Assumption23_24, ExponentialSatisfies23) {
  const auto r = assumption_2_3_2_4(exponential(1.0));
  EXPECT_EQ(r.hypotheses.at("A2.3"), "holds");
  EXPECT_EQ(r.hypotheses.at("A2.4"), "fails");
  EXPECT_EQ(r.conclusion_verified, Confirmation::holds);
}

TEST(Assumption23_24, PowerLawSatisfies24AndGmdBound) {
  const auto d = power_law(2.0);
  const auto r = assumption_2_3_2_4(d);
  EXPECT_EQ(r.hypotheses.at("A2.4"), "holds");
  EXPECT_EQ(r.conclusion_verified, Confirmation::holds);
  EXPECT_LE(gmd(d), d.mean() - d.lower());
}

// Assumption 2.3 alone does not give GMD >= E(X) - l: Weibull(2) satisfies it
// yet has GMD below E(X) - l.
TEST(Assumption23_24, Weibull2CounterexampleToReverseGmdBound) {
  const auto d = weibull(2.0, 1.0);
  const auto r = assumption_2_3_2_4(d);
  EXPECT_EQ(r.hypotheses.at("A2.3"), "holds");
  EXPECT_LT(gmd(d), d.mean() - d.lower());
  EXPECT_EQ(r.conclusion_verified, Confirmation::not_checked);
}

TEST(Assumption23_24, DfrImplies23) {
  const auto d = weibull(0.5, 1.0);
  const auto r = assumption_2_3_2_4(d);
  EXPECT_EQ(r.hypotheses.at("DFR"), "holds");
  EXPECT_EQ(r.hypotheses.at("A2.3"), "holds");
  EXPECT_EQ(r.conclusion_verified, Confirmation::holds);
}
