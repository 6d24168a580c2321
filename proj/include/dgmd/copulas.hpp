#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "dgmd/condition_report.hpp"
#include "dgmd/error.hpp"
#include "dgmd/format.hpp"

namespace dgmd {

/// Parametric family of bivariate survival copulas C(theta, u, v) on the
/// closed parameter interval [theta_lo, theta_hi].
struct SurvivalCopulaFamily {
  using Fn3 = std::function<double(double theta, double u, double v)>;

  std::string label;
  Fn3 c;
  /// Partial derivative in the first argument.
  Fn3 d1;
  /// Partial derivative in the second argument.
  Fn3 d2;
  /// v solving d1(theta, u, v) = w; empty means bisection.
  Fn3 conditional_inverse;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  std::optional<double> theta_independence;

  bool admits(double theta) const { return theta >= theta_lo && theta <= theta_hi; }
};

namespace detail {

inline void require_theta(const SurvivalCopulaFamily& f, double theta) {
  if (!f.admits(theta)) {
    throw Error(ErrorCode::ThetaOutOfRange, f.label + ": theta=" + fmt(theta) + " outside [" +
                                                fmt(f.theta_lo) + "," + fmt(f.theta_hi) + "]");
  }
}

}  // namespace detail

inline SurvivalCopulaFamily independence_copula() {
  SurvivalCopulaFamily f;
  f.label = "independence";
  f.c = [](double, double u, double v) { return u * v; };
  f.d1 = [](double, double, double v) { return v; };
  f.d2 = [](double, double u, double) { return u; };
  f.conditional_inverse = [](double, double, double w) { return w; };
  f.theta_lo = 0.0;
  f.theta_hi = 0.0;
  f.theta_independence = 0.0;
  return f;
}

/// Farlie-Gumbel-Morgenstern: uv (1 + theta (1-u)(1-v)), theta in [-1, 1].
inline SurvivalCopulaFamily fgm_copula() {
  SurvivalCopulaFamily f;
  f.label = "fgm";
  f.c = [](double t, double u, double v) {
    const double uv = u * v;
    return uv + t * uv * (1.0 - u) * (1.0 - v);
  };
  f.d1 = [](double t, double u, double v) { return v + t * v * (1.0 - v) * (1.0 - 2.0 * u); };
  f.d2 = [](double t, double u, double v) { return u + t * u * (1.0 - u) * (1.0 - 2.0 * v); };
  // a v^2 - (1 + a) v + w = 0 with a = theta (1 - 2u); root in [0, 1] in the
  // cancellation-free form 2w / ((1 + a) + sqrt((1 + a)^2 - 4 a w)).
  f.conditional_inverse = [](double t, double u, double w) {
    const double a = t * (1.0 - 2.0 * u);
    if (std::abs(a) < 1e-12 || w <= 0.0) return w;
    const double b = 1.0 + a;
    const double disc = std::max(0.0, b * b - 4.0 * a * w);
    return 2.0 * w / (b + std::sqrt(disc));
  };
  f.theta_lo = -1.0;
  f.theta_hi = 1.0;
  f.theta_independence = 0.0;
  return f;
}

inline SurvivalCopulaFamily make_copula(std::string_view family_id) {
  if (family_id == "independence") return independence_copula();
  if (family_id == "fgm") return fgm_copula();
  throw Error(ErrorCode::InvalidFamilyId, "unknown copula family '" + std::string(family_id) + "'");
}

inline double evaluate(const SurvivalCopulaFamily& f, double theta, double u, double v) {
  detail::require_theta(f, theta);
  return f.c(theta, u, v);
}

/// Solves d1(theta, u, v) = w for v by bisection; d1 must be increasing in v.
inline double bisect_conditional_inverse(const SurvivalCopulaFamily& f, double theta, double u,
                                         double w, int max_iterations = 80) {
  const double at0 = f.d1(theta, u, 0.0);
  const double at1 = f.d1(theta, u, 1.0);
  if (!(at0 <= w && w <= at1)) {
    throw Error(ErrorCode::NoRoot, f.label + ": conditional distribution not invertible at w=" +
                                       fmt(w));
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f.d1(theta, u, mid) < w) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// v with d1(theta, u, v) = w, the conditional quantile used for sampling.
inline double conditional_inverse(const SurvivalCopulaFamily& f, double theta, double u, double w) {
  detail::require_theta(f, theta);
  if (f.conditional_inverse) return f.conditional_inverse(theta, u, w);
  return bisect_conditional_inverse(f, theta, u, w);
}

/// Fréchet-Hoeffding consequence on the diagonal: C(u, u) >= max(2u - 1, 0)
/// on a 2001-point grid of [0, 1].
inline ConditionReport diagonal_bound_check(const SurvivalCopulaFamily& f, double theta,
                                            double tolerance = 1e-12) {
  detail::require_theta(f, theta);
  ConditionReport report;
  report.theorem_id = "diagonal-bound";
  report.implied_conclusion = "C(u,u) >= max(2u-1,0)";
  report.context["theta"] = theta;
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double u = i / 2000.0;
    const double lhs = f.c(theta, u, u);
    const double rhs = std::max(2.0 * u - 1.0, 0.0);
    worst = std::min(worst, lhs - rhs);
    if (lhs < rhs - tolerance) {
      ok = false;
      report.pointwise_violations.push_back(PointwiseViolation{"diagonal", "ge", u, lhs, rhs});
    }
  }
  report.direction = ok ? Direction::ge : Direction::neither;
  report.integral_terms["min C(u,u)-max(2u-1,0)"] = worst;
  report.conclusion_verified = ok ? Confirmation::holds : Confirmation::fails;
  return report;
}

struct CopulaValidity {
  bool boundary = true;
  bool two_increasing = true;
  bool frechet_bounds = true;
  bool d2_matches_difference = true;
  bool d1_matches_difference = true;

  bool ok() const {
    return boundary && two_increasing && frechet_bounds && d2_matches_difference &&
           d1_matches_difference;
  }
};

/// Grid certification of copula axioms on a 101x101 grid.
inline CopulaValidity validate_copula(const SurvivalCopulaFamily& f, double theta,
                                      double slack = 1e-12) {
  detail::require_theta(f, theta);
  CopulaValidity out;
  constexpr int n = 100;
  auto at = [](int i) { return static_cast<double>(i) / n; };
  for (int i = 0; i <= n; ++i) {
    const double x = at(i);
    if (std::abs(f.c(theta, x, 0.0)) > slack || std::abs(f.c(theta, 0.0, x)) > slack ||
        std::abs(f.c(theta, x, 1.0) - x) > slack || std::abs(f.c(theta, 1.0, x) - x) > slack) {
      out.boundary = false;
    }
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double u = at(i);
      const double v = at(j);
      const double c = f.c(theta, u, v);
      if (c < std::max(u + v - 1.0, 0.0) - slack || c > std::min(u, v) + slack) {
        out.frechet_bounds = false;
      }
      if (i < n && j < n) {
        const double u2 = at(i + 1);
        const double v2 = at(j + 1);
        const double vol = f.c(theta, u2, v2) - f.c(theta, u, v2) - f.c(theta, u2, v) + c;
        if (vol < -slack) out.two_increasing = false;
      }
    }
  }
  // Derivatives against central differences on interior points.
  constexpr double step = 1e-6;
  for (int i = 1; i < 20; ++i) {
    for (int j = 1; j < 20; ++j) {
      const double u = i / 20.0;
      const double v = j / 20.0;
      const double fd2 = (f.c(theta, u, v + step) - f.c(theta, u, v - step)) / (2.0 * step);
      const double fd1 = (f.c(theta, u + step, v) - f.c(theta, u - step, v)) / (2.0 * step);
      const double a2 = f.d2(theta, u, v);
      const double a1 = f.d1(theta, u, v);
      if (std::abs(a2 - fd2) > 1e-5 * std::max(1.0, std::abs(a2))) out.d2_matches_difference = false;
      if (std::abs(a1 - fd1) > 1e-5 * std::max(1.0, std::abs(a1))) out.d1_matches_difference = false;
    }
  }
  return out;
}

}  // namespace dgmd
