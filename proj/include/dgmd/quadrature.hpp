#pragma once

// Adaptive Gauss-Kronrod (7/15) integration on bounded intervals.
//
// The 15-point rule is open, so an integrand is never evaluated at a panel
// endpoint. Integrable endpoint singularities are resolved by repeated
// bisection of the panel carrying the largest error estimate. The error
// estimate follows the QUADPACK qk15 heuristic.
//
// integrate_01_symmetric() splits [0,1] at 1/2 and integrates the right half
// in the reflected variable s = 1 - u, so integrands that are singular at
// u = 1 can be resolved below the double spacing of 1.0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "dgmd/error.hpp"

namespace dgmd::quadrature {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  std::size_t max_panels = 2000;
  /// Throw MaxSubdivisions instead of returning an unconverged result.
  bool throw_on_budget = true;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  std::size_t segment = 0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::size_t id = 0;
};

struct PanelOrder {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.id > rhs.id;
  }
};

inline double checked(double y, double x) {
  if (!std::isfinite(y)) {
    throw Error(ErrorCode::NonFinite,
                "integrand returned " + std::to_string(y) + " at " + std::to_string(x));
  }
  return y;
}

template <class F>
void gauss_kronrod15(const F& f, Panel& panel) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (panel.a + panel.b);
  const double half = 0.5 * (panel.b - panel.a);
  const double abs_half = std::abs(half);

  const double fc = checked(f(center), center);
  double res_gauss = fc * kGaussWeights[3];
  double res_kronrod = fc * kKronrodWeights[7];
  double res_abs = std::abs(res_kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double x1 = center - dx;
    const double x2 = center + dx;
    f_left[j] = checked(f(x1), x1);
    f_right[j] = checked(f(x2), x2);
    const double sum = f_left[j] + f_right[j];
    res_kronrod += kKronrodWeights[j] * sum;
    res_abs += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) res_gauss += kGaussWeights[j / 2] * sum;
  }
  const double mean = 0.5 * res_kronrod;
  double res_asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    res_asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }
  res_asc *= abs_half;
  res_abs *= abs_half;

  double err = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);

  panel.value = res_kronrod * half;
  panel.error = err;
}

inline double neumaier_sum(const std::vector<double>& terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - next) + t;
    } else {
      comp += (t - next) + sum;
    }
    sum = next;
  }
  return sum + comp;
}

}  // namespace detail

/// One integration piece: f over [a, b].
struct Segment {
  std::function<double(double)> f;
  double a = 0.0;
  double b = 1.0;
};

/// Integrates the sum of all segments as a single adaptive problem with a
/// shared tolerance and panel budget. Deterministic for a given input.
inline Result integrate_segments(const std::vector<Segment>& segments, const Options& opts = {}) {
  using detail::Panel;
  if (segments.empty()) return Result{0.0, 0.0, 0, true};
  if (!(opts.abs_tol >= 0.0) || !(opts.rel_tol >= 0.0) || opts.max_panels < segments.size()) {
    throw Error(ErrorCode::InvalidArgument, "invalid quadrature options");
  }

  std::priority_queue<Panel, std::vector<Panel>, detail::PanelOrder> queue;
  std::vector<Panel> done;
  std::size_t next_id = 0;
  double total = 0.0;
  double total_err = 0.0;

  auto evaluate = [&](std::size_t seg, double a, double b) {
    Panel p{seg, a, b, 0.0, 0.0, next_id++};
    detail::gauss_kronrod15(segments[seg].f, p);
    return p;
  };

  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    if (!(seg.a <= seg.b) || !std::isfinite(seg.a) || !std::isfinite(seg.b)) {
      throw Error(ErrorCode::InvalidArgument, "segment bounds must be finite and ordered");
    }
    if (seg.a == seg.b) continue;
    Panel p = evaluate(s, seg.a, seg.b);
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }

  std::size_t panels = queue.size();
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  bool converged = total_err <= tolerance();
  while (!converged && !queue.empty()) {
    if (panels >= opts.max_panels) break;
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // A panel that cannot be split in floating point is final.
    if (!(mid > worst.a && mid < worst.b)) {
      queue.pop();
      done.push_back(worst);
      if (queue.empty()) break;
      continue;
    }
    queue.pop();
    Panel left = evaluate(worst.segment, worst.a, mid);
    Panel right = evaluate(worst.segment, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
    converged = total_err <= tolerance();
  }

  // Recompute the totals in a fixed order to shed drift from the running sums.
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& l, const Panel& r) {
    if (l.segment != r.segment) return l.segment < r.segment;
    return l.a < r.a;
  });
  std::vector<double> values;
  std::vector<double> errors;
  values.reserve(done.size());
  errors.reserve(done.size());
  for (const Panel& p : done) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  Result result;
  result.value = detail::neumaier_sum(values);
  result.error_estimate = detail::neumaier_sum(errors);
  result.subdivisions = done.size();
  result.converged =
      result.error_estimate <= std::max(opts.abs_tol, opts.rel_tol * std::abs(result.value));

  if (!result.converged && opts.throw_on_budget) {
    throw Error(ErrorCode::MaxSubdivisions,
                "no convergence after " + std::to_string(result.subdivisions) +
                    " panels (estimate " + std::to_string(result.error_estimate) + ")");
  }
  return result;
}

inline Result integrate(std::function<double(double)> f, double a, double b,
                        const Options& opts = {}) {
  std::vector<Segment> segs;
  segs.push_back(Segment{std::move(f), a, b});
  return integrate_segments(segs, opts);
}

/// Integrand evaluated at a point u of (0,1) together with its exact
/// complement 1 - u.
using SymmetricIntegrand = std::function<double(double u, double one_minus_u)>;

/// Points within kEndpointCut of 0 or 1 contribute nothing. Quantile densities
/// overflow there (1/f with f near the underflow threshold), and mass that far
/// into a tail is out of reach of doubles in this parametrization anyway.
inline constexpr double kEndpointCut = 1e-300;

inline Result integrate_01_symmetric(const SymmetricIntegrand& f, const Options& opts = {}) {
  constexpr double tiny = kEndpointCut;
  std::vector<Segment> segs;
  segs.push_back(Segment{[f](double u) { return u < tiny ? 0.0 : f(u, 1.0 - u); }, 0.0, 0.5});
  segs.push_back(Segment{[f](double s) { return s < tiny ? 0.0 : f(1.0 - s, s); }, 0.0, 0.5});
  return integrate_segments(segs, opts);
}

inline Result integrate_01(const std::function<double(double)>& f, const Options& opts = {}) {
  return integrate_01_symmetric([f](double u, double) { return f(u); }, opts);
}

}  // namespace dgmd::quadrature
