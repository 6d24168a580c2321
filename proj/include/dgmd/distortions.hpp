#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "dgmd/distributions.hpp"
#include "dgmd/error.hpp"
#include "dgmd/format.hpp"

namespace dgmd {

enum class ModelId { ph, prh, gah, pow, custom };

inline std::string_view to_string(ModelId m) {
  switch (m) {
    case ModelId::ph: return "ph";
    case ModelId::prh: return "prh";
    case ModelId::gah: return "gah";
    case ModelId::pow: return "pow";
    case ModelId::custom: return "custom";
  }
  return "?";
}

enum class Monotonicity { increasing, decreasing, neither, undeclared };

inline std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::neither: return "neither";
    case Monotonicity::undeclared: return "undeclared";
  }
  return "?";
}

/// Cumulative hazard increment K(t) = integral_0^t k(x) dx of the additive
/// hazard model. `k` may be left empty, in which case it is differenced.
struct KFunction {
  std::function<double(double)> K;
  std::function<double(double)> k;
  Monotonicity monotonicity = Monotonicity::undeclared;
  std::string label = "K";

  double rate(double t) const {
    if (k) return k(t);
    const double step = 1e-6 * std::max(1.0, std::abs(t));
    return (K(t + step) - K(t - step)) / (2.0 * step);
  }
};

/// Parametric family of distortion functions h(alpha, u) on the open
/// parameter interval (alpha_lo, alpha_hi).
struct DistortionFamily {
  using Fn2 = std::function<double(double alpha, double u)>;

  std::string label;
  ModelId model = ModelId::custom;
  Fn2 h;
  Fn2 dh_dalpha;
  Fn2 dh_du;
  /// Analytic inverse in u; empty means bisection.
  Fn2 h_inverse;
  double alpha_lo = 0.0;
  double alpha_hi = kInf;
  std::optional<double> alpha_identity;
  /// May be +inf or -inf.
  std::optional<double> alpha_degenerate;
  std::optional<KFunction> K;

  bool admits(double alpha) const { return alpha > alpha_lo && alpha < alpha_hi; }
  bool admits_closure(double alpha) const { return alpha >= alpha_lo && alpha <= alpha_hi; }
};

namespace detail {

inline void require_alpha(const DistortionFamily& f, double alpha) {
  if (!f.admits(alpha)) {
    throw Error(ErrorCode::AlphaOutOfRange, f.label + ": alpha=" + fmt(alpha) + " outside (" +
                                                fmt(f.alpha_lo) + "," + fmt(f.alpha_hi) + ")");
  }
}

inline void require_unit(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::UOutOfRange, "u=" + fmt(u) + " outside [0,1]");
}

/// Central difference in alpha, step 1e-5 (scaled), used when a family has no
/// analytic derivative.
inline double alpha_difference(const DistortionFamily::Fn2& h, double alpha, double u) {
  const double step = 1e-5 * std::max(1.0, std::abs(alpha));
  return (h(alpha + step, u) - h(alpha - step, u)) / (2.0 * step);
}

inline double u_difference(const DistortionFamily::Fn2& h, double alpha, double u) {
  const double step = 1e-6;
  const double lo = std::max(0.0, u - step);
  const double hi = std::min(1.0, u + step);
  return (h(alpha, hi) - h(alpha, lo)) / (hi - lo);
}

/// sf_inverse at u, switching to the quantile function above 1/2.
inline double inverse_sf(const ContinuousDistribution& d, double u) {
  return u <= 0.5 ? d.sf_inverse(u) : d.quantile(1.0 - u);
}

}  // namespace detail

/// Solves h(alpha, u) = v for u by bisection on [0, 1].
inline double bisect_inverse(const DistortionFamily& f, double alpha, double v,
                             int max_iterations = 60, double tolerance = 0.0) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double hm = f.h(alpha, mid);
    if (!std::isfinite(hm)) throw Error(ErrorCode::InverseFailure, f.label + ": non-finite h");
    if (hm < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// h(alpha, u) with range checks.
inline double evaluate(const DistortionFamily& f, double alpha, double u) {
  detail::require_alpha(f, alpha);
  detail::require_unit(u);
  return f.h(alpha, u);
}

inline double derivative_alpha(const DistortionFamily& f, double alpha, double u) {
  detail::require_alpha(f, alpha);
  detail::require_unit(u);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return f.dh_dalpha(alpha, u);
}

/// u with h(alpha, u) = v.
inline double inverse(const DistortionFamily& f, double alpha, double v, int max_iterations = 60,
                      double tolerance = 0.0) {
  detail::require_alpha(f, alpha);
  detail::require_unit(v);
  if (f.h_inverse) return f.h_inverse(alpha, v);
  return bisect_inverse(f, alpha, v, max_iterations, tolerance);
}

// ---------------------------------------------------------------------------
// Table of hazard models

inline DistortionFamily proportional_hazard() {
  DistortionFamily f;
  f.label = "ph";
  f.model = ModelId::ph;
  f.h = [](double a, double u) { return u <= 0.0 ? 0.0 : std::pow(u, a); };
  f.dh_dalpha = [](double a, double u) {
    return (u <= 0.0 || u >= 1.0) ? 0.0 : std::pow(u, a) * std::log(u);
  };
  f.dh_du = [](double a, double u) { return a * std::pow(u, a - 1.0); };
  f.h_inverse = [](double a, double v) { return v <= 0.0 ? 0.0 : std::pow(v, 1.0 / a); };
  f.alpha_identity = 1.0;
  f.alpha_degenerate = kInf;
  return f;
}

inline DistortionFamily proportional_reversed_hazard() {
  DistortionFamily f;
  f.label = "prh";
  f.model = ModelId::prh;
  f.h = [](double a, double u) { return u >= 1.0 ? 1.0 : -std::expm1(a * std::log1p(-u)); };
  f.dh_dalpha = [](double a, double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double l = std::log1p(-u);
    return -std::exp(a * l) * l;
  };
  f.dh_du = [](double a, double u) { return a * std::pow(1.0 - u, a - 1.0); };
  f.h_inverse = [](double a, double v) {
    return v >= 1.0 ? 1.0 : -std::expm1(std::log1p(-v) / a);
  };
  f.alpha_identity = 1.0;
  f.alpha_degenerate = 0.0;
  return f;
}

/// h(alpha, u) = u exp(-alpha K(sf_inverse(u))).
inline DistortionFamily generalized_additive_hazard(const ContinuousDistribution& base,
                                                    std::optional<KFunction> K) {
  if (!K || !K->K) throw Error(ErrorCode::MissingK, "gah requires a K function");
  const KFunction kf = *K;
  const double k0 = kf.K(0.0);
  if (!std::isfinite(k0) || std::abs(k0) > 1e-12) {
    throw Error(ErrorCode::InvalidModel, "gah: K(0) must be 0");
  }
  bool positive = true;
  for (int j = 1; j < 1000; ++j) {
    const double t = detail::inverse_sf(base, j / 1000.0);
    const double v = kf.K(t);
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidModel, "gah: K must be nonnegative");
    if (!(v > 0.0)) positive = false;
  }

  DistortionFamily f;
  f.label = "gah:K=" + kf.label;
  f.model = ModelId::gah;
  f.K = kf;
  f.h = [base, kf](double a, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * std::exp(-a * kf.K(detail::inverse_sf(base, u)));
  };
  f.dh_dalpha = [base, kf](double a, double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double kt = kf.K(detail::inverse_sf(base, u));
    return -kt * u * std::exp(-a * kt);
  };
  f.dh_du = [base, kf](double a, double u) {
    const double t = detail::inverse_sf(base, u);
    const double h = u * std::exp(-a * kf.K(t));
    const double q = 1.0 / base.pdf(t);
    return h * (1.0 / u + a * kf.rate(t) * q);
  };
  f.alpha_identity = 0.0;
  if (positive) f.alpha_degenerate = kInf;
  return f;
}

/// h(alpha, u) = sf((sf_inverse(u))^alpha); the base must be nonnegative.
inline DistortionFamily power_hazard(const ContinuousDistribution& base) {
  if (base.lower() < 0.0) {
    throw Error(ErrorCode::InvalidModel, "pow requires a nonnegative support");
  }
  // y = x^alpha evaluated through logarithms; +inf beyond the double range.
  auto power = [](double x, double a) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return kInf;
    const double e = a * std::log(x);
    return e > 709.0 ? kInf : std::exp(e);
  };
  DistortionFamily f;
  f.label = "pow";
  f.model = ModelId::pow;
  f.h = [base, power](double a, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double y = power(detail::inverse_sf(base, u), a);
    return std::isinf(y) ? 0.0 : base.sf(y);
  };
  f.dh_dalpha = [base, power](double a, double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double x = detail::inverse_sf(base, u);
    const double y = power(x, a);
    if (std::isinf(y) || y <= 0.0) return 0.0;
    return -base.pdf(y) * y * std::log(x);
  };
  f.dh_du = [base, power](double a, double u) {
    const double x = detail::inverse_sf(base, u);
    const double y = power(x, a);
    if (std::isinf(y) || y <= 0.0) return 0.0;
    return base.pdf(y) * a * (y / x) / base.pdf(x);
  };
  f.h_inverse = [base, power](double a, double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    const double y = power(detail::inverse_sf(base, v), 1.0 / a);
    return std::isinf(y) ? 0.0 : base.sf(y);
  };
  f.alpha_identity = 1.0;
  if (base.upper() <= 1.0) f.alpha_degenerate = 0.0;
  return f;
}

inline DistortionFamily make_family(ModelId model, const ContinuousDistribution& base,
                                    std::optional<KFunction> K = std::nullopt) {
  switch (model) {
    case ModelId::ph: return proportional_hazard();
    case ModelId::prh: return proportional_reversed_hazard();
    case ModelId::gah: return generalized_additive_hazard(base, std::move(K));
    case ModelId::pow: return power_hazard(base);
    case ModelId::custom: break;
  }
  throw Error(ErrorCode::InvalidModel, "make_family: use make_custom_family for custom models");
}

inline DistortionFamily make_family(std::string_view model_id, const ContinuousDistribution& base,
                                    std::optional<KFunction> K = std::nullopt) {
  if (model_id == "ph") return make_family(ModelId::ph, base, std::move(K));
  if (model_id == "prh") return make_family(ModelId::prh, base, std::move(K));
  if (model_id == "gah") return make_family(ModelId::gah, base, std::move(K));
  if (model_id == "pow") return make_family(ModelId::pow, base, std::move(K));
  throw Error(ErrorCode::InvalidModel, "unknown distortion model '" + std::string(model_id) + "'");
}

/// User-supplied family. Missing derivatives fall back to central differences
/// and a missing inverse to bisection.
inline DistortionFamily make_custom_family(std::string label, DistortionFamily::Fn2 h,
                                           double alpha_lo, double alpha_hi,
                                           std::optional<double> alpha_identity,
                                           std::optional<double> alpha_degenerate,
                                           DistortionFamily::Fn2 dh_dalpha = {},
                                           DistortionFamily::Fn2 h_inverse = {}) {
  if (!h) throw Error(ErrorCode::InvalidModel, "custom family needs h");
  DistortionFamily f;
  f.label = std::move(label);
  f.model = ModelId::custom;
  f.h = h;
  f.dh_dalpha = dh_dalpha ? std::move(dh_dalpha) : [h](double a, double u) {
    return detail::alpha_difference(h, a, u);
  };
  f.dh_du = [h](double a, double u) { return detail::u_difference(h, a, u); };
  f.h_inverse = std::move(h_inverse);
  f.alpha_lo = alpha_lo;
  f.alpha_hi = alpha_hi;
  f.alpha_identity = alpha_identity;
  f.alpha_degenerate = alpha_degenerate;
  return f;
}

// ---------------------------------------------------------------------------
// Distorted variable

/// X_alpha with survival function h_alpha(sf(x)), independent of how it is
/// coupled with X.
struct DistortedVariable {
  ContinuousDistribution base;
  DistortionFamily family;
  double alpha = 1.0;

  double sf(double x) const { return family.h(alpha, base.sf(x)); }
};

inline DistortedVariable distort(const ContinuousDistribution& base, const DistortionFamily& f,
                                 double alpha) {
  detail::require_alpha(f, alpha);
  return DistortedVariable{base, f, alpha};
}

/// Hazard rate -d/dx log h_alpha(sf(x)) of X_alpha.
inline double hazard_of_distorted(const DistortedVariable& v, double x) {
  if (!(x > v.base.lower() && x < v.base.upper())) {
    throw Error(ErrorCode::OutsideSupport, "x=" + fmt(x) + " outside the support");
  }
  const double u = v.base.sf(x);
  const double survival = v.family.h(v.alpha, u);
  if (!(survival > 0.0)) {
    throw Error(ErrorCode::OutsideSupport, "distorted survival vanishes at x=" + fmt(x));
  }
  return v.family.dh_du(v.alpha, u) * v.base.pdf(x) / survival;
}

// ---------------------------------------------------------------------------
// Limit assumptions

/// h(alpha, u) -> u as alpha -> alpha_identity, tested at alpha_identity +- 1e-6.
inline bool identity_limit_holds(const DistortionFamily& f, double tolerance = 1e-5) {
  if (!f.alpha_identity) return false;
  const double ai = *f.alpha_identity;
  for (double a : {ai - 1e-6, ai + 1e-6}) {
    if (!f.admits(a)) continue;
    for (int i = 0; i <= 100; ++i) {
      const double u = i / 100.0;
      if (std::abs(f.h(a, u) - u) > tolerance) return false;
    }
  }
  return true;
}

/// Surrogate parameter close to alpha_degenerate inside the interval.
inline std::optional<double> degenerate_surrogate(const DistortionFamily& f,
                                                  double infinite = 1e6, double offset = 1e-9) {
  if (!f.alpha_degenerate) return std::nullopt;
  const double a0 = *f.alpha_degenerate;
  if (a0 == kInf) return infinite;
  if (a0 == -kInf) return -infinite;
  if (f.admits(a0 + offset)) return a0 + offset;
  if (f.admits(a0 - offset)) return a0 - offset;
  return std::nullopt;
}

/// h(alpha, u) -> 0 for u < 1 as alpha -> alpha_degenerate: h < 1e-6 for
/// u <= 0.9 at the surrogate parameter.
inline bool degenerate_limit_holds(const DistortionFamily& f, double threshold = 1e-6) {
  const auto a = degenerate_surrogate(f);
  if (!a) return false;
  for (int i = 0; i <= 90; ++i) {
    if (!(f.h(*a, i / 100.0) < threshold)) return false;
  }
  return true;
}

}  // namespace dgmd
