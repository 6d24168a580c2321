#include <gtest/gtest.h>

#include <cmath>

#include "dgmd/extrema.hpp"
#include "oracles.hpp"

using namespace dgmd;

TEST(Extrema, ExpPhMinimum) {
  const auto e = exponential(1.0);
  const auto ph = proportional_hazard();
  const auto r = find_extremum([&](double a) { return eta(e, ph, a).value; }, {0.1, 10.0});
  EXPECT_EQ(r.kind, ExtremumKind::minimum);
  EXPECT_NEAR(r.alpha_star, oracle::kExpPhArgmin, 1e-4);
  EXPECT_NEAR(r.value, oracle::kExpPhMin, 1e-7);
  EXPECT_LE(std::abs(eta_dalpha(e, ph, r.alpha_star)), 1e-5);
  // The minimum is not at the identity, and a series system of two beats it.
  EXPECT_LT(eta(e, ph, oracle::kExpPhArgmin).value, eta(e, ph, 1.0).value);
  EXPECT_LT(eta(e, ph, 2.0).value, eta(e, ph, 1.0).value);
}

TEST(Extrema, UniformPhMinimumAtRootTwo) {
  const auto u = uniform(0.0, 1.0);
  const auto ph = proportional_hazard();
  const auto r = find_extremum([&](double a) { return eta(u, ph, a).value; }, {0.1, 10.0});
  EXPECT_NEAR(r.alpha_star, std::sqrt(2.0), 1e-4);
  const auto [grid_x, grid_v] = oracle::grid_argmin(oracle::eta_uniform, 0.1, 10.0);
  EXPECT_NEAR(r.alpha_star, grid_x, 1e-4);
  EXPECT_NEAR(r.value, grid_v, 1e-9);
}

TEST(Extrema, FgmSurfaceArgminMatchesGrid) {
  const auto e = exponential(1.0);
  const auto ph = proportional_hazard();
  const auto fgm = fgm_copula();
  const auto r = find_extremum([&](double a) { return nu(e, ph, a, fgm, 1.0).value; }, {0.1, 10.0});
  const auto [gx, gv] = oracle::grid_argmin([](double a) { return oracle::nu_exp_ph_fgm(1.0, a); }, 0.1, 10.0);
  EXPECT_EQ(r.kind, ExtremumKind::minimum);
  EXPECT_NEAR(r.alpha_star, gx, 1e-4);
  EXPECT_GT(std::abs(r.alpha_star - 1.0), 0.1);
  EXPECT_LE(std::abs(nu_dalpha(e, ph, r.alpha_star, fgm, 1.0)), 1e-5);
}

TEST(Extrema, Example41FirstOrderCondition) {
  const auto p = power_law(2.0);
  const auto prh = proportional_reversed_hazard();
  const auto fgm = fgm_copula();
  const auto [gx, gv] =
      oracle::grid_argmin([](double a) { return oracle::nu_powerlaw2_prh_fgm(1.0, a); }, 0.1, 10.0);
  EXPECT_LE(std::abs(nu_dalpha(p, prh, gx, fgm, 1.0)), 1e-4);
}

TEST(Extrema, ConvexClosedFormToHighAccuracy) {
  const auto r = find_extremum([](double x) { return (x - 1.234567) * (x - 1.234567) + 2.0; }, {0.0, 5.0});
  EXPECT_NEAR(r.alpha_star, 1.234567, 1e-6);
  EXPECT_EQ(r.kind, ExtremumKind::minimum);
  EXPECT_LE(r.value, std::min((r.bracket.first - 1.234567) * (r.bracket.first - 1.234567),
                              (r.bracket.second - 1.234567) * (r.bracket.second - 1.234567)) + 2.0 + 1e-10);
}

TEST(Extrema, MaximumAndHint) {
  auto f = [](double x) { return std::sin(x); };
  const auto r = find_extremum(f, {0.5, 2.5});
  EXPECT_EQ(r.kind, ExtremumKind::maximum);
  EXPECT_NEAR(r.alpha_star, M_PI / 2, 1e-6);
  ExtremumOptions o;
  o.kind_hint = ExtremumKind::minimum;
  EXPECT_EQ(find_extremum(f, {0.5, 2.5}, o).kind, ExtremumKind::none_in_window);
}

TEST(Extrema, MonotoneHasNone) {
  const auto r = find_extremum([](double x) { return std::exp(x); }, {0.0, 3.0});
  EXPECT_EQ(r.kind, ExtremumKind::none_in_window);
}

TEST(Extrema, EveryLocalExtremumReported) {
  const auto all = find_extrema([](double x) { return std::sin(x); }, {0.1, 12.0});
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[0].kind, ExtremumKind::maximum);
  EXPECT_NEAR(all[1].alpha_star, 3 * M_PI / 2, 1e-6);
  EXPECT_EQ(all[1].kind, ExtremumKind::minimum);
}

TEST(Extrema, WindowMustBeAdmissible) {
  ExtremumOptions o;
  o.admissible = std::pair{0.0, kInf};
  try {
    find_extremum([](double x) { return x * x; }, {-1.0, 1.0}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowOutsideInterval);
  }
  EXPECT_THROW(find_extremum([](double x) { return x; }, {2.0, 1.0}), Error);
}

TEST(Scan, EtaTableMatchesClosedForm) {
  const auto rows = scan_eta(exponential(1.0), proportional_hazard(), step_range(0.1, 10.0, 0.1));
  ASSERT_EQ(rows.size(), 100u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.theta.has_value());
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, oracle::eta_exp_ph(r.alpha), 1e-8);
  }
}

TEST(Scan, StepRangeHitsEndpointExactly) {
  const auto g = step_range(-1.0, 1.0, 0.1);
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g.front(), -1.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[10], 0.0);
}

TEST(Scan, SurfaceIsThetaMajorAndThreadIndependent) {
  const auto p = power_law(2.0);
  const auto thetas = step_range(-1.0, 1.0, 0.5);
  const auto alphas = step_range(0.5, 3.0, 0.5);
  const auto one = scan_nu(p, proportional_reversed_hazard(), fgm_copula(), thetas, alphas, {}, 1);
  const auto four = scan_nu(p, proportional_reversed_hazard(), fgm_copula(), thetas, alphas, {}, 4);
  ASSERT_EQ(one.size(), thetas.size() * alphas.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(*one[i].theta, thetas[i / alphas.size()]);
    EXPECT_EQ(one[i].alpha, alphas[i % alphas.size()]);
    EXPECT_EQ(one[i].value, four[i].value);
    EXPECT_NEAR(one[i].value, oracle::nu_powerlaw2_prh_fgm(*one[i].theta, one[i].alpha), 1e-8);
  }
}

TEST(Scan, CellErrorsAreRecorded) {
  const auto rows = scan(
      [](std::optional<double>, double a) -> MeasureResult {
        if (a > 1.5) throw Error(ErrorCode::NonFinite, "boom");
        MeasureResult r;
        r.value = a;
        r.quadrature.converged = true;
        return r;
      },
      {1.0, 2.0}, std::nullopt, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].converged);
  EXPECT_NE(rows[1].error.find("boom"), std::string::npos);
}

TEST(Threads, DefaultFromEnvironment) {
  setenv("DGMD_THREADS", "3", 1);
  EXPECT_EQ(default_threads(), 3u);
  unsetenv("DGMD_THREADS");
  EXPECT_GE(default_threads(), 1u);
}
