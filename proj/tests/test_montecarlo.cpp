#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dgmd/montecarlo.hpp"
#include "oracles.hpp"

using namespace dgmd;

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n - 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::vector<double>, std::vector<double>> draw(const ContinuousDistribution& d,
                                                         const DistortionFamily& f, double a,
                                                         const SurvivalCopulaFamily& c, double t,
                                                         std::size_t n, std::uint64_t seed) {
  CounterRng rng = CounterRng::stream(seed, 0);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) std::tie(xs[i], ys[i]) = sample_pair(d, f, a, c, t, rng);
  return {xs, ys};
}

}  // namespace

TEST(Rng, CounterStreamsAreReproducible) {
  CounterRng a = CounterRng::stream(42, 3);
  CounterRng b = CounterRng::stream(42, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  CounterRng c = CounterRng::stream(42, 4);
  EXPECT_NE(CounterRng::stream(42, 3).next(), c.next());
}

TEST(Rng, UniformIsOpenInterval) {
  CounterRng r(0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Sampling, IndependenceHasNoRankCorrelation) {
  const std::size_t n = 100000;
  const auto [x, y] = draw(exponential(1.0), proportional_hazard(), 1.0, independence_copula(), 0.0, n, 11);
  EXPECT_LE(std::abs(spearman(x, y)), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Sampling, FgmAtZeroMatchesIndependenceStream) {
  const auto a = draw(exponential(1.0), proportional_hazard(), 2.0, independence_copula(), 0.0, 1000, 5);
  const auto b = draw(exponential(1.0), proportional_hazard(), 2.0, fgm_copula(), 0.0, 1000, 5);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(Sampling, FgmSpearmanIsThetaOverThree) {
  const std::size_t n = 1000000;
  const auto [x, y] = draw(exponential(1.0), proportional_hazard(), 1.0, fgm_copula(), 1.0, n, 20240917);
  // Brute-force double integral 12 int int C - 3 for the reference value.
  double integral = 0.0;
  const int m = 400;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      integral += fgm_copula().c(1.0, (i + 0.5) / m, (j + 0.5) / m);
    }
  }
  const double rho = 12.0 * integral / (m * m) - 3.0;
  EXPECT_NEAR(rho, 1.0 / 3.0, 1e-5);
  EXPECT_NEAR(spearman(x, y), rho, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Sampling, EmpiricalCopulaMatches) {
  const std::size_t n = 100000;
  for (double t : {-1.0, 0.6}) {
    CounterRng rng = CounterRng::stream(99, 1);
    std::vector<std::pair<double, double>> uv(n);
    for (auto& p : uv) {
      const double u = rng.uniform();
      p = {u, conditional_inverse(fgm_copula(), t, u, rng.uniform())};
    }
    for (int i = 1; i < 10; ++i) {
      for (int j = 1; j < 10; ++j) {
        const double u = i / 10.0, v = j / 10.0;
        const double hits = static_cast<double>(std::count_if(
            uv.begin(), uv.end(), [&](const auto& p) { return p.first <= u && p.second <= v; }));
        const double c = fgm_copula().c(t, u, v);
        EXPECT_NEAR(hits / n, c, 4.0 * std::sqrt(c * (1.0 - c) / n) + 1e-4) << u << "," << v;
      }
    }
  }
}

TEST(EstimateNu, ExamplesWithinThreeStandardErrors) {
  const auto e = exponential(1.0);
  const auto a = estimate_nu(e, proportional_hazard(), 1.0, independence_copula(), 0.0, 1000000, 1);
  EXPECT_LE(std::abs(a.mean - 1.0), 3.0 * a.std_error);
  const auto b = estimate_nu(e, proportional_hazard(), 1.0, fgm_copula(), 1.0, 1000000, 2);
  EXPECT_LE(std::abs(b.mean - 5.0 / 6.0), 3.0 * b.std_error);
  const auto c = estimate_nu(power_law(2.0), proportional_reversed_hazard(), 1.0, fgm_copula(), -1.0,
                             1000000, 3);
  EXPECT_LE(std::abs(c.mean - oracle::nu_powerlaw2_prh_fgm(-1.0, 1.0)), 3.0 * c.std_error);
}

TEST(EstimateNu, DeterministicAcrossThreadCounts) {
  const auto e = exponential(1.0);
  const auto one = estimate_nu(e, proportional_hazard(), 2.0, fgm_copula(), 0.5, 50000, 77, 1);
  const auto three = estimate_nu(e, proportional_hazard(), 2.0, fgm_copula(), 0.5, 50000, 77, 3);
  const auto again = estimate_nu(e, proportional_hazard(), 2.0, fgm_copula(), 0.5, 50000, 77, 1);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.std_error, three.std_error);
  EXPECT_EQ(one.mean, again.mean);
  const auto other = estimate_nu(e, proportional_hazard(), 2.0, fgm_copula(), 0.5, 50000, 78, 1);
  EXPECT_NE(one.mean, other.mean);
}

TEST(EstimateNu, StandardErrorIsSampleSdOverRootN) {
  const auto e = exponential(1.0);
  const auto r = estimate_nu(e, proportional_hazard(), 1.0, independence_copula(), 0.0, 40000, 9, 1);
  // |X - Y| for iid exp(1) is exp(1): sd 1.
  EXPECT_NEAR(r.std_error, 1.0 / std::sqrt(40000.0), 0.05 / std::sqrt(40000.0));
  EXPECT_EQ(r.n, 40000u);
  EXPECT_EQ(r.seed, 9u);
}

TEST(EstimateNu, BisectionInverseForGah) {
  const auto u = uniform(0.0, 1.0);
  const auto g = generalized_additive_hazard(
      u, KFunction{[](double t) { return t * t / 2; }, [](double t) { return t; },
                   Monotonicity::increasing, "t^2/2"});
  for (double v : {0.01, 0.3, 0.77}) {
    const double x = distortion_inverse_for_sampling(g, 2.0, v);
    EXPECT_NEAR(g.h(2.0, x), v, 1e-11);
  }
  const auto r = estimate_nu(u, g, 2.0, fgm_copula(), -0.5, 200000, 4);
  EXPECT_LE(std::abs(r.mean - nu(u, g, 2.0, fgm_copula(), -0.5).value), 3.0 * r.std_error);
}

TEST(EstimateNu, RejectsTinySamples) {
  try {
    estimate_nu(exponential(1.0), proportional_hazard(), 1.0, independence_copula(), 0.0, 999, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
