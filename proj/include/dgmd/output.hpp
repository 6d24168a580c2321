#pragma once

// CSV tables for scans and small hand-written SVG plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgmd/extrema.hpp"
#include "dgmd/format.hpp"

namespace dgmd::output {

/// theta,alpha,value,err_estimate,converged; theta is dropped when no row has one.
inline void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  const bool with_theta = std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.theta.has_value(); });
  out << (with_theta ? "theta,alpha,value,err_estimate,converged\n" : "alpha,value,err_estimate,converged\n");
  for (const auto& r : rows) {
    if (with_theta) out << fmt(r.theta.value_or(std::nan(""))) << ',';
    out << fmt(r.alpha) << ',' << fmt(r.value) << ',' << fmt(r.err_estimate) << ','
        << (r.converged ? "true" : "false") << '\n';
  }
}

inline std::string csv(const std::vector<ScanRow>& rows) {
  std::ostringstream s;
  write_csv(s, rows);
  return s.str();
}

namespace detail {

inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 420.0;
inline constexpr double kMargin = 56.0;

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double span() const { return hi > lo ? hi - lo : 1.0; }
};

inline Range range_of(const std::vector<double>& v) {
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    r.lo = std::min(r.lo, x);
    r.hi = std::max(r.hi, x);
  }
  if (!(r.lo <= r.hi)) return {0.0, 1.0};
  return r;
}

inline void header(std::ostream& o, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\">" << escape(title)
    << "</text>\n";
}

inline void axes(std::ostream& o, Range x, Range y, const std::string& xlabel,
                 const std::string& ylabel) {
  const double x0 = kMargin;
  const double x1 = kWidth - kMargin;
  const double y0 = kHeight - kMargin;
  const double y1 = kMargin;
  o << "<path d=\"M" << num(x0) << ' ' << num(y1) << " L" << num(x0) << ' ' << num(y0) << " L"
    << num(x1) << ' ' << num(y0) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">"
    << fmt(x.lo) << "</text>\n";
  o << "<text x=\"" << num(x1) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">"
    << fmt(x.hi) << "</text>\n";
  o << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0) << "\" text-anchor=\"end\">"
    << fmt(y.lo) << "</text>\n";
  o << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y1 + 4) << "\" text-anchor=\"end\">"
    << fmt(y.hi) << "</text>\n";
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 14)
    << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  o << "<text x=\"14\" y=\"" << num((y0 + y1) / 2) << "\" transform=\"rotate(-90 14 "
    << num((y0 + y1) / 2) << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
}

}  // namespace detail

/// Line plot of value against alpha; one polyline per theta when present.
inline std::string svg_lines(const std::vector<ScanRow>& rows, const std::string& title) {
  using namespace detail;
  std::vector<double> xs;
  std::vector<double> ys;
  std::map<double, std::vector<const ScanRow*>> series;
  for (const auto& r : rows) {
    xs.push_back(r.alpha);
    ys.push_back(r.value);
    series[r.theta.value_or(0.0)].push_back(&r);
  }
  const Range xr = range_of(xs);
  const Range yr = range_of(ys);
  std::ostringstream o;
  header(o, title);
  axes(o, xr, yr, "alpha", "value");
  std::size_t k = 0;
  for (const auto& [theta, pts] : series) {
    const double shade = series.size() > 1 ? static_cast<double>(k) / static_cast<double>(series.size() - 1) : 0.0;
    const int red = static_cast<int>(std::lround(200.0 * shade));
    const int blue = static_cast<int>(std::lround(200.0 * (1.0 - shade)));
    o << "<polyline fill=\"none\" stroke=\"rgb(" << red << ",40," << blue << ")\" points=\"";
    for (const ScanRow* r : pts) {
      if (!std::isfinite(r->value)) continue;
      const double px = kMargin + (r->alpha - xr.lo) / xr.span() * (kWidth - 2 * kMargin);
      const double py = kHeight - kMargin - (r->value - yr.lo) / yr.span() * (kHeight - 2 * kMargin);
      o << num(px) << ',' << num(py) << ' ';
    }
    o << "\"/>\n";
    ++k;
  }
  o << "</svg>\n";
  return o.str();
}

/// Heatmap over (alpha, theta); rows must come from a theta-major scan.
inline std::string svg_heatmap(const std::vector<ScanRow>& rows, const std::string& title) {
  using namespace detail;
  std::vector<double> alphas;
  std::vector<double> thetas;
  std::vector<double> values;
  for (const auto& r : rows) {
    alphas.push_back(r.alpha);
    thetas.push_back(r.theta.value_or(0.0));
    values.push_back(r.value);
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  const Range ar = range_of(alphas);
  const Range tr = range_of(thetas);
  const Range vr = range_of(values);
  const double cw = (kWidth - 2 * kMargin) / static_cast<double>(std::max<std::size_t>(alphas.size(), 1));
  const double ch = (kHeight - 2 * kMargin) / static_cast<double>(std::max<std::size_t>(thetas.size(), 1));
  std::ostringstream o;
  header(o, title);
  for (const auto& r : rows) {
    const auto ia = static_cast<double>(std::lower_bound(alphas.begin(), alphas.end(), r.alpha) - alphas.begin());
    const auto it = static_cast<double>(std::lower_bound(thetas.begin(), thetas.end(), r.theta.value_or(0.0)) - thetas.begin());
    const double t = std::isfinite(r.value) ? (r.value - vr.lo) / vr.span() : 0.0;
    const int red = static_cast<int>(std::lround(255.0 * t));
    const int blue = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    o << "<rect x=\"" << num(kMargin + ia * cw) << "\" y=\""
      << num(kHeight - kMargin - (it + 1.0) * ch) << "\" width=\"" << num(cw + 0.05)
      << "\" height=\"" << num(ch + 0.05) << "\" fill=\"rgb(" << red << ",60," << blue
      << ")\"/>\n";
  }
  axes(o, ar, tr, "alpha", "theta");
  o << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"40\" text-anchor=\"end\">value "
    << fmt(vr.lo) << " (blue) .. " << fmt(vr.hi) << " (red)</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace dgmd::output
