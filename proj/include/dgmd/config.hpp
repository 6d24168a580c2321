#pragma once

// Text specifications of models and runs.
//
//   dist        exp(r) | uniform(a,b) | weibull(k[,s]) | powerlaw(k)
//   distortion  ph | prh | pow | gah:K=<expr in t>[;increasing|decreasing|neither]
//   copula      independence | fgm
//   ranges      value | lo:hi:step        windows  lo:hi
//
// Config files hold `key = value` lines under [model], [grid], [mc],
// [quadrature] and [output] headers; `#` starts a comment.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "dgmd/copulas.hpp"
#include "dgmd/distortions.hpp"
#include "dgmd/distributions.hpp"
#include "dgmd/error.hpp"
#include "dgmd/expression.hpp"
#include "dgmd/extrema.hpp"
#include "dgmd/quadrature.hpp"

namespace dgmd::config {

/// Shortest decimal text that reads back to the same double.
inline std::string exact(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  if (s.empty()) throw Error(ErrorCode::ConfigError, std::string(what) + ": empty number");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ConfigError, std::string(what) + ": bad number '" + s + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// ---------------------------------------------------------------------------
// Distributions

struct DistributionSpec {
  std::string family;
  std::vector<double> params;
};

inline DistributionSpec parse_distribution_spec(std::string_view text) {
  const std::string_view s = trim(text);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw Error(ErrorCode::ConfigError, "distribution '" + std::string(s) + "' is not name(args)");
  }
  DistributionSpec spec;
  spec.family = std::string(trim(s.substr(0, open)));
  for (auto arg : split(s.substr(open + 1, s.size() - open - 2), ',')) {
    spec.params.push_back(parse_number(arg, "distribution '" + std::string(s) + "'"));
  }
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (spec.params.size() < lo || spec.params.size() > hi) {
      throw Error(ErrorCode::ConfigError, spec.family + ": wrong number of parameters");
    }
  };
  if (spec.family == "exp" || spec.family == "powerlaw") {
    arity(1, 1);
  } else if (spec.family == "uniform") {
    arity(2, 2);
  } else if (spec.family == "weibull") {
    arity(1, 2);
    if (spec.params.size() == 1) spec.params.push_back(1.0);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown distribution '" + spec.family + "'");
  }
  return spec;
}

inline std::string to_text(const DistributionSpec& spec) {
  std::string out = spec.family + "(";
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    if (i) out += ",";
    out += exact(spec.params[i]);
  }
  return out + ")";
}

inline ContinuousDistribution build_distribution(const DistributionSpec& spec) {
  const auto& p = spec.params;
  if (spec.family == "exp") return exponential(p[0]);
  if (spec.family == "uniform") return uniform(p[0], p[1]);
  if (spec.family == "weibull") return weibull(p[0], p[1]);
  if (spec.family == "powerlaw") return power_law(p[0]);
  throw Error(ErrorCode::ConfigError, "unknown distribution '" + spec.family + "'");
}

inline ContinuousDistribution parse_distribution(std::string_view text) {
  return build_distribution(parse_distribution_spec(text));
}

// ---------------------------------------------------------------------------
// Distortions

struct DistortionSpec {
  std::string model;
  std::optional<std::string> K;
  Monotonicity monotonicity = Monotonicity::undeclared;
};

inline DistortionSpec parse_distortion_spec(std::string_view text) {
  const std::string_view s = trim(text);
  DistortionSpec spec;
  const auto colon = s.find(':');
  spec.model = std::string(trim(s.substr(0, colon)));
  if (spec.model != "ph" && spec.model != "prh" && spec.model != "pow" && spec.model != "gah") {
    throw Error(ErrorCode::ConfigError, "unknown distortion '" + spec.model + "'");
  }
  if (colon == std::string_view::npos) {
    if (spec.model == "gah") throw Error(ErrorCode::ConfigError, "gah needs K=<expression>");
    return spec;
  }
  if (spec.model != "gah") {
    throw Error(ErrorCode::ConfigError, spec.model + " takes no options");
  }
  const auto parts = split(s.substr(colon + 1), ';');
  const std::string_view k = trim(parts[0]);
  if (k.substr(0, 2) != "K=") throw Error(ErrorCode::ConfigError, "gah option must be K=<expression>");
  const std::string expr(trim(k.substr(2)));
  expr::parse(expr);  // validate early
  spec.K = expr;
  if (parts.size() > 2) throw Error(ErrorCode::ConfigError, "gah: too many options");
  if (parts.size() == 2) {
    const std::string_view m = trim(parts[1]);
    if (m == "increasing") {
      spec.monotonicity = Monotonicity::increasing;
    } else if (m == "decreasing") {
      spec.monotonicity = Monotonicity::decreasing;
    } else if (m == "neither") {
      spec.monotonicity = Monotonicity::neither;
    } else {
      throw Error(ErrorCode::ConfigError, "gah: unknown monotonicity '" + std::string(m) + "'");
    }
  }
  return spec;
}

inline std::string to_text(const DistortionSpec& spec) {
  if (!spec.K) return spec.model;
  std::string out = spec.model + ":K=" + *spec.K;
  if (spec.monotonicity != Monotonicity::undeclared) {
    out += ";" + std::string(to_string(spec.monotonicity));
  }
  return out;
}

inline KFunction k_function(const std::string& text, Monotonicity m) {
  const expr::Expression e = expr::parse(text);
  return KFunction{[e](double t) { return e.value(t); }, [e](double t) { return e.derivative(t); },
                   m, text};
}

inline DistortionFamily build_distortion(const DistortionSpec& spec,
                                         const ContinuousDistribution& base) {
  std::optional<KFunction> K;
  if (spec.K) K = k_function(*spec.K, spec.monotonicity);
  return make_family(spec.model, base, K);
}

// ---------------------------------------------------------------------------
// Parameters

/// A single value or an inclusive lo:hi:step range.
struct ParamSpec {
  double lo = 0.0;
  std::optional<double> hi;
  std::optional<double> step;

  bool is_range() const { return hi.has_value(); }
  std::vector<double> values() const { return is_range() ? step_range(lo, *hi, *step) : std::vector<double>{lo}; }
};

inline ParamSpec parse_param(std::string_view text, std::string_view what) {
  const auto parts = split(trim(text), ':');
  ParamSpec p;
  if (parts.size() == 1) {
    p.lo = parse_number(parts[0], what);
    return p;
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::ConfigError, std::string(what) + ": expected value or lo:hi:step");
  }
  p.lo = parse_number(parts[0], what);
  p.hi = parse_number(parts[1], what);
  p.step = parse_number(parts[2], what);
  if (!(*p.step > 0.0) || *p.hi < p.lo) {
    throw Error(ErrorCode::ConfigError, std::string(what) + ": need lo <= hi and step > 0");
  }
  return p;
}

inline std::string to_text(const ParamSpec& p) {
  if (!p.is_range()) return exact(p.lo);
  return exact(p.lo) + ":" + exact(*p.hi) + ":" + exact(*p.step);
}

inline std::pair<double, double> parse_window(std::string_view text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() != 2) throw Error(ErrorCode::ConfigError, "window: expected lo:hi");
  const double lo = parse_number(parts[0], "window");
  const double hi = parse_number(parts[1], "window");
  if (!(lo < hi)) throw Error(ErrorCode::ConfigError, "window: need lo < hi");
  return {lo, hi};
}

inline std::uint64_t parse_count(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    // Accept 1e6-style counts when they are exact integers.
    const double d = parse_number(s, what);
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
      throw Error(ErrorCode::ConfigError, std::string(what) + ": bad count '" + s + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  DistributionSpec dist{"exp", {1.0}};
  DistortionSpec distortion{"ph", std::nullopt, Monotonicity::undeclared};
  std::optional<std::string> copula;
  std::optional<ParamSpec> alpha;
  std::optional<ParamSpec> theta;
  std::optional<std::pair<double, double>> window;
  std::uint64_t n = 1000000;
  std::uint64_t seed = 20240917;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<unsigned> threads;

  quadrature::Options quadrature() const {
    quadrature::Options o;
    o.abs_tol = abs_tol;
    o.rel_tol = rel_tol;
    return o;
  }
};

/// Applies one `key = value` setting. Keys are section-qualified.
inline void apply(RunConfig& cfg, std::string_view section, std::string_view key,
                  std::string_view value) {
  const std::string k(key);
  const std::string sec(section);
  auto in = [&](std::string_view expected) {
    if (!section.empty() && section != expected) {
      throw Error(ErrorCode::ConfigError,
                  "key '" + k + "' belongs in [" + std::string(expected) + "], not [" + sec + "]");
    }
  };
  if (k == "dist") {
    in("model");
    cfg.dist = parse_distribution_spec(value);
  } else if (k == "distortion") {
    in("model");
    cfg.distortion = parse_distortion_spec(value);
  } else if (k == "copula") {
    in("model");
    const std::string c(trim(value));
    make_copula(c);
    cfg.copula = c;
  } else if (k == "alpha") {
    in("grid");
    cfg.alpha = parse_param(value, "alpha");
  } else if (k == "theta") {
    in("grid");
    cfg.theta = parse_param(value, "theta");
  } else if (k == "window") {
    in("grid");
    cfg.window = parse_window(value);
  } else if (k == "n") {
    in("mc");
    cfg.n = parse_count(value, "n");
  } else if (k == "seed") {
    in("mc");
    cfg.seed = parse_count(value, "seed");
  } else if (k == "abs_tol") {
    in("quadrature");
    cfg.abs_tol = parse_number(value, "abs_tol");
  } else if (k == "rel_tol") {
    in("quadrature");
    cfg.rel_tol = parse_number(value, "rel_tol");
  } else if (k == "out") {
    in("output");
    cfg.out = std::string(trim(value));
  } else if (k == "svg") {
    in("output");
    cfg.svg = std::string(trim(value));
  } else if (k == "threads") {
    in("output");
    const auto t = parse_count(value, "threads");
    if (t == 0) throw Error(ErrorCode::ConfigError, "threads must be positive");
    cfg.threads = static_cast<unsigned>(t);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown key '" + k + "'");
  }
}

/// Parses config text on top of `base`. Errors carry "line:column".
inline RunConfig parse(std::string_view text, RunConfig base = {}) {
  static constexpr std::string_view kSections[] = {"model", "grid", "mc", "quadrature", "output"};
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    auto fail = [&](std::size_t col, const std::string& msg) {
      throw Error(ErrorCode::ConfigError,
                  std::to_string(line_no) + ":" + std::to_string(col) + ": " + msg);
    };
    // Strip a comment that is not inside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string_view::npos) fail(first + 1, "missing ']'");
      if (!trim(line.substr(close + 1)).empty()) fail(close + 2, "text after section header");
      section = std::string(trim(line.substr(first + 1, close - first - 1)));
      bool known = false;
      for (auto s : kSections) known = known || s == section;
      if (!known) fail(first + 2, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=', first);
    if (eq == std::string_view::npos) fail(first + 1, "expected key = value");
    const std::string_view key = trim(line.substr(first, eq - first));
    if (key.empty()) fail(first + 1, "empty key");
    std::string_view value = trim(line.substr(eq + 1));
    const std::size_t value_col = line.find_first_not_of(" \t", eq + 1) + 1;
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') fail(value_col, "unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    try {
      apply(base, section, key, value);
    } catch (const Error& e) {
      std::string msg = e.what();
      const std::string prefix = std::string(to_string(e.code())) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      fail(value_col, msg);
    }
  }
  return base;
}

/// Canonical text: fixed section order, shortest round-trip numbers.
inline std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  o << "[model]\n";
  o << "dist = \"" << to_text(c.dist) << "\"\n";
  o << "distortion = \"" << to_text(c.distortion) << "\"\n";
  if (c.copula) o << "copula = \"" << *c.copula << "\"\n";
  o << "\n[grid]\n";
  if (c.alpha) o << "alpha = " << to_text(*c.alpha) << "\n";
  if (c.theta) o << "theta = " << to_text(*c.theta) << "\n";
  if (c.window) o << "window = " << exact(c.window->first) << ":" << exact(c.window->second) << "\n";
  o << "\n[mc]\n";
  o << "n = " << c.n << "\n";
  o << "seed = " << c.seed << "\n";
  o << "\n[quadrature]\n";
  o << "abs_tol = " << exact(c.abs_tol) << "\n";
  o << "rel_tol = " << exact(c.rel_tol) << "\n";
  if (c.out || c.svg || c.threads) {
    o << "\n[output]\n";
    if (c.out) o << "out = \"" << *c.out << "\"\n";
    if (c.svg) o << "svg = \"" << *c.svg << "\"\n";
    if (c.threads) o << "threads = " << *c.threads << "\n";
  }
  return o.str();
}

}  // namespace dgmd::config
