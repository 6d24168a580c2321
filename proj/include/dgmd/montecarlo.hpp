#pragma once

// Plain Monte Carlo estimate of nu = E|X - X_alpha| when (X, X_alpha) has
// survival copula C_theta. Used as an oracle independent of the quadrature.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "dgmd/copulas.hpp"
#include "dgmd/distortions.hpp"
#include "dgmd/distributions.hpp"
#include "dgmd/error.hpp"
#include "dgmd/extrema.hpp"
#include "dgmd/rng.hpp"

namespace dgmd {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// u with h(alpha, u) = v: the analytic inverse when the family has one,
/// otherwise bisection capped at 80 iterations / 1e-12 in u.
inline double distortion_inverse_for_sampling(const DistortionFamily& f, double alpha, double v) {
  if (f.h_inverse) return f.h_inverse(alpha, v);
  const double u = bisect_inverse(f, alpha, v, 80, 1e-12);
  if (!std::isfinite(u)) throw Error(ErrorCode::InverseFailure, f.label + ": inverse failed");
  return u;
}

/// One draw of (X, X_alpha). The uniforms (U, V) have joint distribution
/// C_theta, with V drawn from the conditional law given U; then
/// X = sf^-1(U) and X_alpha = sf^-1(h^-1(V)).
inline std::pair<double, double> sample_pair(const ContinuousDistribution& d,
                                             const DistortionFamily& f, double alpha,
                                             const SurvivalCopulaFamily& c, double theta,
                                             CounterRng& rng) {
  const double u = rng.uniform();
  const double w = rng.uniform();
  const double v = c.conditional_inverse ? c.conditional_inverse(theta, u, w)
                                         : bisect_conditional_inverse(c, theta, u, w);
  const double x = detail::inverse_sf(d, u);
  const double xa = detail::inverse_sf(d, distortion_inverse_for_sampling(f, alpha, v));
  return {x, xa};
}

namespace detail {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise update.
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }
};

inline constexpr std::uint64_t kChunks = 256;

}  // namespace detail

/// Mean of |X - X_alpha| over n pairs. Samples are split into 256 fixed
/// chunks, each with its own stream; chunk results are merged in index order,
/// so the estimate is bit-identical for any thread count.
inline McEstimate estimate_nu(const ContinuousDistribution& d, const DistortionFamily& f,
                              double alpha, const SurvivalCopulaFamily& c, double theta,
                              std::uint64_t n, std::uint64_t seed,
                              unsigned threads = default_threads()) {
  if (n < 1000) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs n >= 1000");
  detail::require_alpha(f, alpha);
  detail::require_theta(c, theta);
  std::vector<detail::Moments> parts(detail::kChunks);
  parallel_for(detail::kChunks, threads, [&](std::size_t chunk) {
    const std::uint64_t count = n / detail::kChunks + (chunk < n % detail::kChunks ? 1 : 0);
    CounterRng rng = CounterRng::stream(seed, chunk);
    detail::Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto [x, xa] = sample_pair(d, f, alpha, c, theta, rng);
      m.add(std::abs(x - xa));
    }
    parts[chunk] = m;
  });
  detail::Moments total;
  for (const auto& p : parts) total.merge(p);
  McEstimate e;
  e.mean = total.mean;
  e.n = n;
  e.seed = seed;
  e.std_error = std::sqrt(total.m2 / (total.n - 1.0)) / std::sqrt(total.n);
  return e;
}

}  // namespace dgmd
