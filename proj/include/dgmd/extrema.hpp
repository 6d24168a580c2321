#pragma once

// Extremum search over the distortion parameter, and dense (theta, alpha)
// scans of eta / nu.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "dgmd/error.hpp"
#include "dgmd/format.hpp"
#include "dgmd/measures.hpp"

namespace dgmd {

enum class ExtremumKind { minimum, maximum, none_in_window };

inline std::string_view to_string(ExtremumKind k) {
  switch (k) {
    case ExtremumKind::minimum: return "minimum";
    case ExtremumKind::maximum: return "maximum";
    case ExtremumKind::none_in_window: return "none-in-window";
  }
  return "?";
}

struct ExtremumResult {
  double alpha_star = 0.0;
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::none_in_window;
  std::pair<double, double> bracket{0.0, 0.0};
  std::size_t evaluations = 0;
};

struct ExtremumOptions {
  std::size_t scan_points = 200;
  double x_tol = 1e-6;
  std::optional<ExtremumKind> kind_hint;
  /// Open parameter interval the window must lie in.
  std::optional<std::pair<double, double>> admissible;
  int max_iterations = 200;
};

namespace detail {

inline void require_window(std::pair<double, double> window, const ExtremumOptions& opts) {
  const auto [lo, hi] = window;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::WindowOutsideInterval,
                "window (" + fmt(lo) + "," + fmt(hi) + ") is empty or unbounded");
  }
  if (opts.admissible && !(lo > opts.admissible->first && hi < opts.admissible->second)) {
    throw Error(ErrorCode::WindowOutsideInterval,
                "window (" + fmt(lo) + "," + fmt(hi) + ") leaves the parameter interval (" +
                    fmt(opts.admissible->first) + "," + fmt(opts.admissible->second) + ")");
  }
}

/// Golden-section search for a minimum of `g` on [a, b].
inline std::pair<double, double> golden_section(const std::function<double(double)>& g, double a,
                                                double b, double x_tol, int max_iterations,
                                                std::size_t& evaluations) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = g(c);
  double gd = g(d);
  evaluations += 2;
  int it = 0;
  while ((b - a) > 2.0 * x_tol) {
    if (++it > max_iterations) {
      throw Error(ErrorCode::Nonconvergence,
                  "golden section did not reach x_tol=" + fmt(x_tol) + " in " +
                      std::to_string(max_iterations) + " iterations");
    }
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
    ++evaluations;
  }
  const double x = gc <= gd ? c : d;
  return {x, std::min(gc, gd)};
}

struct ScanData {
  std::vector<double> xs;
  std::vector<double> ys;
};

inline ScanData coarse_scan(const std::function<double(double)>& objective,
                            std::pair<double, double> window, std::size_t points) {
  ScanData s;
  points = std::max<std::size_t>(points, 3);
  s.xs.resize(points);
  s.ys.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    s.xs[i] = i + 1 == points ? window.second : window.first + t * (window.second - window.first);
    s.ys[i] = objective(s.xs[i]);
    if (!std::isfinite(s.ys[i])) {
      throw Error(ErrorCode::NonFinite, "objective non-finite at alpha=" + fmt(s.xs[i]));
    }
  }
  return s;
}

inline ExtremumResult refine(const std::function<double(double)>& objective, const ScanData& s,
                             std::size_t i, ExtremumKind kind, const ExtremumOptions& opts,
                             std::size_t& evaluations) {
  const double sign = kind == ExtremumKind::minimum ? 1.0 : -1.0;
  auto g = [&](double x) { return sign * objective(x); };
  ExtremumResult r;
  r.kind = kind;
  r.bracket = {s.xs[i - 1], s.xs[i + 1]};
  auto [x, gx] = golden_section(g, s.xs[i - 1], s.xs[i + 1], opts.x_tol, opts.max_iterations,
                                evaluations);
  r.alpha_star = x;
  r.value = sign * gx;
  // Never report something worse than the scan point that seeded the bracket.
  if (sign * s.ys[i] < gx) {
    r.alpha_star = s.xs[i];
    r.value = s.ys[i];
  }
  return r;
}

}  // namespace detail

/// Every interior local extremum visible on the coarse scan (sign changes of
/// the discrete differences), each refined by golden section.
inline std::vector<ExtremumResult> find_extrema(const std::function<double(double)>& objective,
                                                std::pair<double, double> window,
                                                const ExtremumOptions& opts = {}) {
  detail::require_window(window, opts);
  std::size_t evaluations = 0;
  const auto s = detail::coarse_scan(objective, window, opts.scan_points);
  evaluations += s.xs.size();
  std::vector<ExtremumResult> out;
  for (std::size_t i = 1; i + 1 < s.xs.size(); ++i) {
    const double left = s.ys[i] - s.ys[i - 1];
    const double right = s.ys[i + 1] - s.ys[i];
    std::optional<ExtremumKind> kind;
    if (left < 0.0 && right >= 0.0) kind = ExtremumKind::minimum;
    if (left > 0.0 && right <= 0.0) kind = ExtremumKind::maximum;
    if (!kind) continue;
    if (opts.kind_hint && *opts.kind_hint != *kind) continue;
    out.push_back(detail::refine(objective, s, i, *kind, opts, evaluations));
  }
  for (auto& r : out) r.evaluations = evaluations;
  return out;
}

/// The global extremum on the window. With a hint only that kind is sought;
/// otherwise an interior minimum is preferred over an interior maximum. When
/// the best scan point sits on the window boundary the kind is none_in_window.
inline ExtremumResult find_extremum(const std::function<double(double)>& objective,
                                    std::pair<double, double> window,
                                    const ExtremumOptions& opts = {}) {
  detail::require_window(window, opts);
  std::size_t evaluations = 0;
  const auto s = detail::coarse_scan(objective, window, opts.scan_points);
  evaluations += s.xs.size();
  const std::size_t last = s.xs.size() - 1;

  auto try_kind = [&](ExtremumKind kind) -> std::optional<ExtremumResult> {
    const auto it = kind == ExtremumKind::minimum ? std::min_element(s.ys.begin(), s.ys.end())
                                                  : std::max_element(s.ys.begin(), s.ys.end());
    const auto i = static_cast<std::size_t>(it - s.ys.begin());
    if (i == 0 || i == last) return std::nullopt;
    return detail::refine(objective, s, i, kind, opts, evaluations);
  };

  std::optional<ExtremumResult> found;
  if (opts.kind_hint && *opts.kind_hint != ExtremumKind::none_in_window) {
    found = try_kind(*opts.kind_hint);
  } else {
    found = try_kind(ExtremumKind::minimum);
    if (!found) found = try_kind(ExtremumKind::maximum);
  }
  ExtremumResult r;
  if (found) {
    r = *found;
  } else {
    const bool want_max = opts.kind_hint == ExtremumKind::maximum;
    const auto it = want_max ? std::max_element(s.ys.begin(), s.ys.end())
                             : std::min_element(s.ys.begin(), s.ys.end());
    const auto i = static_cast<std::size_t>(it - s.ys.begin());
    r.kind = ExtremumKind::none_in_window;
    r.alpha_star = s.xs[i];
    r.value = s.ys[i];
    r.bracket = window;
  }
  r.evaluations = evaluations;
  return r;
}

// ---------------------------------------------------------------------------
// Scans

/// lo, lo + step, ..., up to hi (inclusive within a 1e-9 step fraction).
inline std::vector<double> step_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidArgument,
                "bad range " + fmt(lo) + ":" + fmt(hi) + ":" + fmt(step));
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

/// Worker count: DGMD_THREADS if set and positive, else the hardware count.
inline unsigned default_threads() {
  if (const char* env = std::getenv("DGMD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for i in [0, n) on `threads` workers. Each index is written
/// by exactly one worker, so output order never depends on scheduling.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct ScanRow {
  std::optional<double> theta;
  double alpha = 0.0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double err_estimate = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  /// Empty unless the evaluation threw.
  std::string error;
};

using ScanObjective = std::function<MeasureResult(std::optional<double> theta, double alpha)>;

/// Evaluates the objective on alpha_grid (outer loop over theta_grid when
/// given). Rows are ordered theta-major; per-cell errors are recorded, not thrown.
inline std::vector<ScanRow> scan(const ScanObjective& objective, const std::vector<double>& alpha_grid,
                                 const std::optional<std::vector<double>>& theta_grid = std::nullopt,
                                 unsigned threads = default_threads()) {
  std::vector<ScanRow> rows;
  if (theta_grid) {
    for (double t : *theta_grid) {
      for (double a : alpha_grid) {
        ScanRow row;
        row.theta = t;
        row.alpha = a;
        rows.push_back(row);
      }
    }
  } else {
    for (double a : alpha_grid) {
      ScanRow row;
      row.alpha = a;
      rows.push_back(row);
    }
  }
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    ScanRow& row = rows[i];
    try {
      const MeasureResult r = objective(row.theta, row.alpha);
      row.value = r.value;
      row.err_estimate = r.quadrature.error_estimate;
      row.converged = r.quadrature.converged;
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  return rows;
}

inline std::vector<ScanRow> scan_eta(const ContinuousDistribution& d, const DistortionFamily& f,
                                     const std::vector<double>& alpha_grid,
                                     const quadrature::Options& opts = {},
                                     unsigned threads = default_threads()) {
  return scan([&](std::optional<double>, double a) { return eta(d, f, a, opts); }, alpha_grid,
              std::nullopt, threads);
}

inline std::vector<ScanRow> scan_nu(const ContinuousDistribution& d, const DistortionFamily& f,
                                    const SurvivalCopulaFamily& c,
                                    const std::vector<double>& theta_grid,
                                    const std::vector<double>& alpha_grid,
                                    const quadrature::Options& opts = {},
                                    unsigned threads = default_threads()) {
  return scan([&](std::optional<double> t, double a) { return nu(d, f, a, c, *t, opts); },
              alpha_grid, theta_grid, threads);
}

}  // namespace dgmd
