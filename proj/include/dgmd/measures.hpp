#pragma once

// Distorted and copula-distorted Gini mean differences, evaluated in the
// quantile domain:
//
//   eta(alpha)      = int_0^1 q(u) { u + h(u) (1 - 2u) } du
//   nu(theta,alpha) = int_0^1 q(u) { u + h(u) - 2 C_theta(u, h(u)) } du
//
// where q is the dual quantile-density of X and h = h_alpha.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dgmd/copulas.hpp"
#include "dgmd/distortions.hpp"
#include "dgmd/distributions.hpp"
#include "dgmd/error.hpp"
#include "dgmd/quadrature.hpp"

namespace dgmd {

struct MeasureInputs {
  std::string distribution;
  std::string distortion;
  double alpha = 0.0;
  std::optional<std::string> copula;
  std::optional<double> theta;
};

struct MeasureResult {
  double value = 0.0;
  quadrature::Result quadrature;
  MeasureInputs inputs;
};

namespace detail {

using UnitFn = std::function<double(double)>;

inline quadrature::Result integrate_measure(const quadrature::SymmetricIntegrand& f,
                                            const quadrature::Options& opts,
                                            const char* what) {
  try {
    return quadrature::integrate_01_symmetric(f, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MaxSubdivisions || e.code() == ErrorCode::NonFinite) {
      throw Error(ErrorCode::IntegrationFailure, std::string(what) + ": " + e.what());
    }
    throw;
  }
}

// The *_with variants take h (and its alpha-derivative) already bound to a
// parameter, which lets limit computations use points on the closure of the
// parameter interval.

inline quadrature::Result eta_with(const ContinuousDistribution& d, const UnitFn& h,
                                   const quadrature::Options& opts) {
  return integrate_measure(
      [&](double u, double s) {
        const double hu = h(u);
        return dqdf_pair(d, u, s) * (u + hu * (1.0 - 2.0 * u));
      },
      opts, "eta");
}

inline quadrature::Result nu_with(const ContinuousDistribution& d, const UnitFn& h,
                                  const SurvivalCopulaFamily& c, double theta,
                                  const quadrature::Options& opts) {
  return integrate_measure(
      [&](double u, double s) {
        const double hu = h(u);
        return dqdf_pair(d, u, s) * (u + hu - 2.0 * c.c(theta, u, hu));
      },
      opts, "nu");
}

inline quadrature::Result eta_dalpha_with(const ContinuousDistribution& d, const UnitFn& dh,
                                          const quadrature::Options& opts) {
  return integrate_measure(
      [&](double u, double s) { return dqdf_pair(d, u, s) * dh(u) * (1.0 - 2.0 * u); }, opts,
      "eta_dalpha");
}

inline quadrature::Result nu_dalpha_with(const ContinuousDistribution& d, const UnitFn& h,
                                         const UnitFn& dh, const SurvivalCopulaFamily& c,
                                         double theta, const quadrature::Options& opts) {
  return integrate_measure(
      [&](double u, double s) {
        return dqdf_pair(d, u, s) * dh(u) * (1.0 - 2.0 * c.d2(theta, u, h(u)));
      },
      opts, "nu_dalpha");
}

inline UnitFn bind_h(const DistortionFamily& f, double alpha) {
  return [&f, alpha](double u) { return f.h(alpha, u); };
}

inline UnitFn bind_dh(const DistortionFamily& f, double alpha) {
  return [&f, alpha](double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : f.dh_dalpha(alpha, u); };
}

inline MeasureInputs inputs_of(const ContinuousDistribution& d, const DistortionFamily& f,
                               double alpha) {
  return MeasureInputs{d.label(), f.label, alpha, std::nullopt, std::nullopt};
}

}  // namespace detail

/// Distorted Gini mean difference E|X - X_alpha| for independent X, X_alpha.
inline MeasureResult eta(const ContinuousDistribution& d, const DistortionFamily& f, double alpha,
                         const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  MeasureResult r;
  r.quadrature = detail::eta_with(d, detail::bind_h(f, alpha), opts);
  r.value = r.quadrature.value;
  r.inputs = detail::inputs_of(d, f, alpha);
  return r;
}

/// Copula-distorted Gini mean difference E|X - X_alpha| under survival copula C_theta.
inline MeasureResult nu(const ContinuousDistribution& d, const DistortionFamily& f, double alpha,
                        const SurvivalCopulaFamily& c, double theta,
                        const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  detail::require_theta(c, theta);
  MeasureResult r;
  r.quadrature = detail::nu_with(d, detail::bind_h(f, alpha), c, theta, opts);
  r.value = r.quadrature.value;
  r.inputs = detail::inputs_of(d, f, alpha);
  r.inputs.copula = c.label;
  r.inputs.theta = theta;
  return r;
}

inline double eta_dalpha(const ContinuousDistribution& d, const DistortionFamily& f, double alpha,
                         const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  return detail::eta_dalpha_with(d, detail::bind_dh(f, alpha), opts).value;
}

inline double nu_dalpha(const ContinuousDistribution& d, const DistortionFamily& f, double alpha,
                        const SurvivalCopulaFamily& c, double theta,
                        const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  detail::require_theta(c, theta);
  return detail::nu_dalpha_with(d, detail::bind_h(f, alpha), detail::bind_dh(f, alpha), c, theta,
                                opts)
      .value;
}

/// E(X_alpha) = l + int_0^1 q(u) h(u) du. With an unbounded lower end the
/// equivalent E(X) + int_0^1 q(u) (h(u) - u) du is used.
inline double distorted_mean(const ContinuousDistribution& d, const DistortionFamily& f,
                             double alpha, const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  if (std::isfinite(d.lower())) {
    return d.lower() + detail::integrate_measure(
                           [&](double u, double s) { return dqdf_pair(d, u, s) * f.h(alpha, u); },
                           opts, "distorted_mean")
                           .value;
  }
  return d.mean() + detail::integrate_measure(
                        [&](double u, double s) {
                          return dqdf_pair(d, u, s) * (f.h(alpha, u) - u);
                        },
                        opts, "distorted_mean")
                        .value;
}

/// nu / (E(X) + E(X_alpha)).
inline double copula_gini_index(const ContinuousDistribution& d, const DistortionFamily& f,
                                double alpha, const SurvivalCopulaFamily& c, double theta,
                                const quadrature::Options& opts = {}) {
  const double num = nu(d, f, alpha, c, theta, opts).value;
  const double den = d.mean() + distorted_mean(d, f, alpha, opts);
  if (!(std::abs(den) > 1e-12)) {
    throw Error(ErrorCode::ZeroDenominator, "E(X) + E(X_alpha) vanishes");
  }
  return num / den;
}

/// eta by direct integration of sf(x) + h(sf(x)) (1 - 2 sf(x)) over a finite
/// support. Only used to cross-check the quantile-domain path.
inline MeasureResult eta_x_domain(const ContinuousDistribution& d, const DistortionFamily& f,
                                  double alpha, const quadrature::Options& opts = {}) {
  detail::require_alpha(f, alpha);
  if (!std::isfinite(d.lower()) || !std::isfinite(d.upper())) {
    throw Error(ErrorCode::InvalidArgument, "eta_x_domain needs a bounded support");
  }
  MeasureResult r;
  try {
    r.quadrature = quadrature::integrate(
        [&](double x) {
          const double u = d.sf(x);
          return u + f.h(alpha, u) * (1.0 - 2.0 * u);
        },
        d.lower(), d.upper(), opts);
  } catch (const Error& e) {
    throw Error(ErrorCode::IntegrationFailure, std::string("eta_x_domain: ") + e.what());
  }
  r.value = r.quadrature.value;
  r.inputs = detail::inputs_of(d, f, alpha);
  return r;
}

}  // namespace dgmd
