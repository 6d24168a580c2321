#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgmd/condition_report.hpp"
#include "dgmd/error.hpp"
#include "dgmd/format.hpp"
#include "dgmd/quadrature.hpp"

namespace dgmd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Support {
  double lower = 0.0;
  double upper = kInf;
};

/// Absolutely continuous random variable described through its survival
/// function. Immutable after construction.
///
/// `quantile` is F^{-1}(s) = sf_inverse(1 - s). It is optional; when absent it
/// is derived from sf_inverse, which loses resolution for s below 1e-16.
class ContinuousDistribution {
 public:
  using Fn = std::function<double(double)>;

  ContinuousDistribution(std::string label, Fn sf, Fn pdf, Fn sf_inverse, Support support,
                         double mean, Fn quantile = {})
      : label_(std::move(label)),
        sf_(std::move(sf)),
        pdf_(std::move(pdf)),
        sf_inverse_(std::move(sf_inverse)),
        quantile_(std::move(quantile)),
        support_(support),
        mean_(mean) {
    if (!sf_ || !pdf_ || !sf_inverse_) {
      throw Error(ErrorCode::InvalidDistribution, label_ + ": sf, pdf and sf_inverse are required");
    }
    if (!(support_.lower < support_.upper)) {
      throw Error(ErrorCode::InvalidDistribution, label_ + ": empty support");
    }
    if (!std::isfinite(mean_)) {
      throw Error(ErrorCode::InvalidDistribution, label_ + ": mean must be finite");
    }
    if (!quantile_) {
      quantile_ = [inv = sf_inverse_](double s) { return inv(1.0 - s); };
    }
  }

  const std::string& label() const { return label_; }
  double sf(double x) const { return sf_(x); }
  double cdf(double x) const { return 1.0 - sf_(x); }
  double pdf(double x) const { return pdf_(x); }
  double sf_inverse(double u) const { return sf_inverse_(u); }
  /// F^{-1}(s), i.e. the point with survival probability 1 - s.
  double quantile(double s) const { return quantile_(s); }
  Support support() const { return support_; }
  double lower() const { return support_.lower; }
  double upper() const { return support_.upper; }
  double mean() const { return mean_; }

 private:
  std::string label_;
  Fn sf_;
  Fn pdf_;
  Fn sf_inverse_;
  Fn quantile_;
  Support support_;
  double mean_;
};

namespace detail {

inline double dqdf_at(const ContinuousDistribution& d, double x, double u) {
  const double f = d.pdf(x);
  if (!(f > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DegenerateDensity,
                d.label() + ": density vanishes at u=" + std::to_string(u));
  }
  return 1.0 / f;
}

}  // namespace detail

/// Dual quantile-density 1 / f(sf_inverse(u)).
inline double dqdf(const ContinuousDistribution& d, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::UOutOfRange, "dqdf: u outside [0,1]");
  return detail::dqdf_at(d, d.sf_inverse(u), u);
}

/// dqdf evaluated at 1 - s, resolved through the quantile function so that s
/// may be far below machine epsilon.
inline double dqdf_upper(const ContinuousDistribution& d, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::UOutOfRange, "dqdf_upper: s outside [0,1]");
  return detail::dqdf_at(d, d.quantile(s), 1.0 - s);
}

/// dqdf at a point given as (u, 1 - u); picks the better-conditioned inverse.
inline double dqdf_pair(const ContinuousDistribution& d, double u, double one_minus_u) {
  return u <= 0.5 ? detail::dqdf_at(d, d.sf_inverse(u), u)
                  : detail::dqdf_at(d, d.quantile(one_minus_u), u);
}

// ---------------------------------------------------------------------------
// Catalog

inline ContinuousDistribution exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidDistribution, "exponential: rate must be positive");
  }
  return ContinuousDistribution(
      "exp(" + fmt(rate) + ")",
      [rate](double x) { return x <= 0.0 ? 1.0 : std::exp(-rate * x); },
      [rate](double x) { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); },
      [rate](double u) { return u <= 0.0 ? kInf : -std::log(u) / rate; }, Support{0.0, kInf},
      1.0 / rate, [rate](double s) { return s >= 1.0 ? kInf : -std::log1p(-s) / rate; });
}

inline ContinuousDistribution uniform(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidDistribution, "uniform: need finite a < b");
  }
  const double w = b - a;
  return ContinuousDistribution(
      "uniform(" + fmt(a) + "," + fmt(b) + ")",
      [a, b, w](double x) { return x <= a ? 1.0 : (x >= b ? 0.0 : (b - x) / w); },
      [a, b, w](double x) { return (x < a || x > b) ? 0.0 : 1.0 / w; },
      [b, w](double u) { return b - u * w; }, Support{a, b}, 0.5 * (a + b),
      [a, w](double s) { return a + s * w; });
}

/// Weibull with survival exp(-(x/scale)^shape).
inline ContinuousDistribution weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw Error(ErrorCode::InvalidDistribution, "weibull: shape and scale must be positive");
  }
  return ContinuousDistribution(
      "weibull(" + fmt(shape) + "," + fmt(scale) + ")",
      [shape, scale](double x) { return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / scale, shape)); },
      [shape, scale](double x) {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return shape < 1.0 ? kInf : (shape == 1.0 ? 1.0 / scale : 0.0);
        const double z = std::pow(x / scale, shape);
        return shape / x * z * std::exp(-z);
      },
      [shape, scale](double u) {
        return u <= 0.0 ? kInf : scale * std::pow(-std::log(u), 1.0 / shape);
      },
      Support{0.0, kInf}, scale * std::tgamma(1.0 + 1.0 / shape),
      [shape, scale](double s) {
        return s >= 1.0 ? kInf : scale * std::pow(-std::log1p(-s), 1.0 / shape);
      });
}

/// Survival 1 - x^k on [0, 1].
inline ContinuousDistribution power_law(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidDistribution, "powerlaw: exponent must be positive");
  }
  return ContinuousDistribution(
      "powerlaw(" + fmt(k) + ")",
      [k](double x) { return x <= 0.0 ? 1.0 : (x >= 1.0 ? 0.0 : 1.0 - std::pow(x, k)); },
      [k](double x) {
        if (x < 0.0 || x > 1.0) return 0.0;
        return k * std::pow(x, k - 1.0);
      },
      [k](double u) { return std::pow(1.0 - u, 1.0 / k); }, Support{0.0, 1.0}, k / (k + 1.0),
      [k](double s) { return std::pow(s, 1.0 / k); });
}

/// Distribution of X + delta.
inline ContinuousDistribution shifted(const ContinuousDistribution& d, double delta) {
  return ContinuousDistribution(
      d.label() + "+" + fmt(delta), [d, delta](double x) { return d.sf(x - delta); },
      [d, delta](double x) { return d.pdf(x - delta); },
      [d, delta](double u) { return d.sf_inverse(u) + delta; },
      Support{d.lower() + delta, d.upper() + delta}, d.mean() + delta,
      [d, delta](double s) { return d.quantile(s) + delta; });
}

/// Distribution of factor * X for factor > 0.
inline ContinuousDistribution scaled(const ContinuousDistribution& d, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "scaled: factor must be positive");
  return ContinuousDistribution(
      fmt(factor) + "*" + d.label(),
      [d, factor](double x) { return d.sf(x / factor); },
      [d, factor](double x) { return d.pdf(x / factor) / factor; },
      [d, factor](double u) { return factor * d.sf_inverse(u); },
      Support{factor * d.lower(), factor * d.upper()}, factor * d.mean(),
      [d, factor](double s) { return factor * d.quantile(s); });
}

// ---------------------------------------------------------------------------
// Gini quantities

/// integral_0^1 sf_inverse(u) du.
inline quadrature::Result mean_by_quadrature(const ContinuousDistribution& d,
                                             const quadrature::Options& opts = {}) {
  return quadrature::integrate_01_symmetric(
      [&d](double u, double s) { return u <= 0.5 ? d.sf_inverse(u) : d.quantile(s); }, opts);
}

/// E(X) - l = integral_0^1 dqdf(u) u du.
inline quadrature::Result mean_excess_over_lower(const ContinuousDistribution& d,
                                                 const quadrature::Options& opts = {}) {
  return quadrature::integrate_01_symmetric(
      [&d](double u, double s) { return dqdf_pair(d, u, s) * u; }, opts);
}

/// Builds a custom distribution and checks the stored mean against quadrature.
inline ContinuousDistribution make_distribution(std::string label, ContinuousDistribution::Fn sf,
                                                ContinuousDistribution::Fn pdf,
                                                ContinuousDistribution::Fn sf_inverse,
                                                Support support, double mean,
                                                ContinuousDistribution::Fn quantile = {},
                                                double mean_tolerance = 1e-7) {
  ContinuousDistribution d(std::move(label), std::move(sf), std::move(pdf), std::move(sf_inverse),
                           support, mean, std::move(quantile));
  quadrature::Options opts;
  opts.abs_tol = 1e-11;
  const auto check = mean_by_quadrature(d, opts);
  if (std::abs(check.value - mean) > mean_tolerance * std::max(1.0, std::abs(mean))) {
    throw Error(ErrorCode::InvalidDistribution,
                d.label() + ": stored mean " + std::to_string(mean) +
                    " disagrees with quadrature " + std::to_string(check.value));
  }
  return d;
}

/// Gini's mean difference 2 * integral F(x) sf(x) dx, evaluated in the u-domain.
inline double gmd(const ContinuousDistribution& d, const quadrature::Options& opts = {}) {
  try {
    return quadrature::integrate_01_symmetric(
               [&d](double u, double s) { return 2.0 * dqdf_pair(d, u, s) * u * s; }, opts)
        .value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MaxSubdivisions || e.code() == ErrorCode::NonFinite) {
      throw Error(ErrorCode::IntegrationFailure, std::string("gmd: ") + e.what());
    }
    throw;
  }
}

inline double gini_index(const ContinuousDistribution& d, const quadrature::Options& opts = {}) {
  if (std::abs(d.mean()) < 1e-12) throw Error(ErrorCode::ZeroMean, d.label() + ": zero mean");
  return gmd(d, opts) / (2.0 * d.mean());
}

// ---------------------------------------------------------------------------
// Aging classes

enum class Verdict { holds, fails, boundary };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::boundary: return "boundary";
  }
  return "?";
}

struct AgingWitness {
  std::string property;
  double x = 0.0;
  double t = 0.0;
};

struct AgingReport {
  Verdict ifr = Verdict::fails;
  Verdict dfr = Verdict::fails;
  Verdict nbu = Verdict::fails;
  Verdict nwu = Verdict::fails;
  /// First failing defining inequality, in the order ifr, dfr, nbu, nwu.
  std::optional<AgingWitness> witness;
};

struct AgingOptions {
  std::size_t hazard_grid = 2001;
  std::size_t pair_grid = 101;
  double tolerance = 1e-9;
};

inline AgingReport aging_class(const ContinuousDistribution& d, bool strict = false,
                               const AgingOptions& opts = {}) {
  AgingReport report;
  const double tol = opts.tolerance;

  // Hazard rate along increasing t = sf_inverse(u), u descending over (0,1).
  const std::size_t n = opts.hazard_grid - 1;
  std::vector<double> ts;
  std::vector<double> hazard;
  for (std::size_t i = n - 1; i >= 1; --i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    const double t = u <= 0.5 ? d.sf_inverse(u) : d.quantile(1.0 - u);
    ts.push_back(t);
    hazard.push_back(d.pdf(t) / u);
  }

  // Each pair (a, b) classifies one step of a monotone comparison.
  struct Scan {
    bool all_flat = true;
    bool up_ok = true;    // every step >= -tol (non-strict) or > tol (strict)
    bool down_ok = true;
    std::optional<AgingWitness> up_witness;
    std::optional<AgingWitness> down_witness;
  };
  auto classify = [&](const Scan& s, bool up) {
    if (s.all_flat) return strict ? Verdict::fails : Verdict::boundary;
    return (up ? s.up_ok : s.down_ok) ? Verdict::holds : Verdict::fails;
  };

  Scan hz;
  for (std::size_t i = 0; i + 1 < hazard.size(); ++i) {
    const double diff = hazard[i + 1] - hazard[i];
    const double scale = tol * std::max({1.0, std::abs(hazard[i]), std::abs(hazard[i + 1])});
    if (std::abs(diff) > scale) hz.all_flat = false;
    const bool up_fail = strict ? !(diff > scale) : diff < -scale;
    const bool down_fail = strict ? !(diff < -scale) : diff > scale;
    if (up_fail) {
      hz.up_ok = false;
      if (!hz.up_witness) hz.up_witness = AgingWitness{"ifr", ts[i], ts[i + 1]};
    }
    if (down_fail) {
      hz.down_ok = false;
      if (!hz.down_witness) hz.down_witness = AgingWitness{"dfr", ts[i], ts[i + 1]};
    }
  }
  report.ifr = classify(hz, true);
  report.dfr = classify(hz, false);

  // NBU: sf(x + t) <= sf(x) sf(t) on a quantile grid of (x, t).
  std::vector<double> xs;
  const std::size_t m = opts.pair_grid - 1;
  for (std::size_t j = 1; j < m; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(m);
    xs.push_back(u <= 0.5 ? d.sf_inverse(u) : d.quantile(1.0 - u));
  }
  Scan ag;
  for (double x : xs) {
    for (double t : xs) {
      const double diff = d.sf(x) * d.sf(t) - d.sf(x + t);
      if (std::abs(diff) > tol) ag.all_flat = false;
      const bool nbu_fail = strict ? !(diff > tol) : diff < -tol;
      const bool nwu_fail = strict ? !(diff < -tol) : diff > tol;
      if (nbu_fail) {
        ag.up_ok = false;
        if (!ag.up_witness) ag.up_witness = AgingWitness{"nbu", x, t};
      }
      if (nwu_fail) {
        ag.down_ok = false;
        if (!ag.down_witness) ag.down_witness = AgingWitness{"nwu", x, t};
      }
    }
  }
  report.nbu = classify(ag, true);
  report.nwu = classify(ag, false);

  if (report.ifr == Verdict::fails && hz.up_witness) {
    report.witness = hz.up_witness;
  } else if (report.dfr == Verdict::fails && hz.down_witness) {
    report.witness = hz.down_witness;
  } else if (report.nbu == Verdict::fails && ag.up_witness) {
    report.witness = ag.up_witness;
  } else if (report.nwu == Verdict::fails && ag.down_witness) {
    report.witness = ag.down_witness;
  }
  return report;
}

inline bool holds_non_strict(Verdict v) { return v != Verdict::fails; }

// ---------------------------------------------------------------------------
// Symmetry of the dual quantile-density

/// Grid test of dqdf(u) - dqdf(1-u) on (0, 1/2]. Direction `ge` means the
/// "dqdf(u) >= dqdf(1-u)" assumption holds, `le` the reverse one,
/// `both_boundary` a symmetric dqdf. The conclusion cross-checks
///   DFR  => dqdf(u) >= dqdf(1-u),
///   dqdf(u) <= dqdf(1-u)  =>  IFR  and  GMD <= E(X) - l.
inline ConditionReport assumption_2_3_2_4(const ContinuousDistribution& d,
                                          const quadrature::Options& opts = {}) {
  ConditionReport report;
  report.theorem_id = "A2.3/A2.4";
  const auto grid = half_grid();
  auto cmp = compare_on_grid(
      "dqdf(u) vs dqdf(1-u)", grid, [&d](double u) { return dqdf(d, u); },
      [&d](double u) { return dqdf_upper(d, u); });
  report.direction = cmp.direction;
  report.pointwise_violations = std::move(cmp.violations);
  report.hypotheses["A2.3"] = allows_ge(report.direction) ? "holds" : "fails";
  report.hypotheses["A2.4"] = allows_le(report.direction) ? "holds" : "fails";

  const AgingReport aging = aging_class(d, false);
  report.hypotheses["DFR"] = std::string(to_string(aging.dfr));
  report.hypotheses["IFR"] = std::string(to_string(aging.ifr));

  const double g = gmd(d, opts);
  const double excess = mean_excess_over_lower(d, opts).value;
  report.integral_terms["GMD"] = g;
  report.integral_terms["E(X)-l"] = excess;

  bool checked = false;
  bool ok = true;
  std::string conclusion;
  if (holds_non_strict(aging.dfr)) {
    checked = true;
    ok = ok && allows_ge(report.direction);
    conclusion += "DFR => A2.3; ";
  }
  if (allows_le(report.direction)) {
    checked = true;
    ok = ok && holds_non_strict(aging.ifr) && g <= excess + 1e-7;
    conclusion += "A2.4 => IFR and GMD <= E(X)-l; ";
  }
  if (!conclusion.empty()) conclusion.resize(conclusion.size() - 2);
  report.implied_conclusion = conclusion;
  report.conclusion_verified =
      checked ? (ok ? Confirmation::holds : Confirmation::fails) : Confirmation::not_checked;
  return report;
}

}  // namespace dgmd
