#pragma once

// Command-line front end:
//
//   dgmd eval     --dist "exp(1)" --distortion ph --alpha 2 [--copula fgm --theta 1]
//   dgmd scan     --alpha 0.1:10:0.1 [--copula fgm --theta -1:1:0.1] [--out f.csv] [--svg f.svg]
//   dgmd extrema  --window 0.1:10 [--kind min|max] [--all]
//   dgmd check    [T3.1|...|A2.4] [--csv violations.csv]
//   dgmd mc       --alpha 1 --copula fgm --theta 1 [--n 1000000 --seed 7]
//   dgmd figures  [--out figures]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgmd/conditions.hpp"
#include "dgmd/config.hpp"
#include "dgmd/copulas.hpp"
#include "dgmd/distortions.hpp"
#include "dgmd/distributions.hpp"
#include "dgmd/error.hpp"
#include "dgmd/extrema.hpp"
#include "dgmd/format.hpp"
#include "dgmd/measures.hpp"
#include "dgmd/montecarlo.hpp"
#include "dgmd/output.hpp"

namespace dgmd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

inline bool is_config_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDistribution:
    case ErrorCode::InvalidModel:
    case ErrorCode::MissingK:
    case ErrorCode::InvalidFamilyId:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::ThetaOutOfRange:
    case ErrorCode::UOutOfRange:
    case ErrorCode::OutsideSupport:
    case ErrorCode::MissingContext:
    case ErrorCode::WindowOutsideInterval:
      return true;
    default:
      return false;
  }
}

/// Fully built model objects for one run.
struct Model {
  ContinuousDistribution dist;
  DistortionFamily family;
  std::optional<SurvivalCopulaFamily> copula;
};

inline Model build_model(const config::RunConfig& cfg) {
  auto d = config::build_distribution(cfg.dist);
  auto f = config::build_distortion(cfg.distortion, d);
  std::optional<SurvivalCopulaFamily> c;
  if (cfg.copula) c = make_copula(*cfg.copula);
  return Model{std::move(d), std::move(f), std::move(c)};
}

inline double single(const std::optional<config::ParamSpec>& p, const char* name,
                     const char* command) {
  if (!p) throw Error(ErrorCode::ConfigError, std::string(command) + " needs --" + name);
  if (p->is_range()) {
    throw Error(ErrorCode::ConfigError, std::string(command) + " needs a single --" + name);
  }
  return p->lo;
}

/// theta for a copula run: the given value, else the independence point.
inline double theta_or_default(const config::RunConfig& cfg, const SurvivalCopulaFamily& c,
                               const char* command) {
  if (cfg.theta) return single(cfg.theta, "theta", command);
  if (c.theta_independence) return *c.theta_independence;
  throw Error(ErrorCode::ConfigError, std::string(command) + " needs --theta");
}

inline void print_kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << ": " << value << '\n';
}

inline void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  f << text;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_eval(const config::RunConfig& cfg, std::ostream& out) {
  const Model m = build_model(cfg);
  const double a = single(cfg.alpha, "alpha", "eval");
  const auto opts = cfg.quadrature();
  MeasureResult r;
  double slope = 0.0;
  if (m.copula) {
    const double th = theta_or_default(cfg, *m.copula, "eval");
    r = nu(m.dist, m.family, a, *m.copula, th, opts);
    slope = nu_dalpha(m.dist, m.family, a, *m.copula, th, opts);
  } else {
    r = eta(m.dist, m.family, a, opts);
    slope = eta_dalpha(m.dist, m.family, a, opts);
  }
  print_kv(out, "measure", m.copula ? "nu" : "eta");
  print_kv(out, "dist", r.inputs.distribution);
  print_kv(out, "distortion", r.inputs.distortion);
  if (r.inputs.copula) print_kv(out, "copula", *r.inputs.copula);
  if (r.inputs.theta) print_kv(out, "theta", fmt(*r.inputs.theta));
  print_kv(out, "alpha", fmt(r.inputs.alpha));
  print_kv(out, "value", fmt(r.value));
  print_kv(out, "dvalue_dalpha", fmt(slope));
  print_kv(out, "err_estimate", fmt(r.quadrature.error_estimate));
  print_kv(out, "subdivisions", std::to_string(r.quadrature.subdivisions));
  print_kv(out, "converged", r.quadrature.converged ? "true" : "false");
  return kExitOk;
}

inline int cmd_scan(const config::RunConfig& cfg, std::ostream& out) {
  const Model m = build_model(cfg);
  if (!cfg.alpha) throw Error(ErrorCode::ConfigError, "scan needs --alpha lo:hi:step");
  const auto alphas = cfg.alpha->values();
  const auto opts = cfg.quadrature();
  const unsigned threads = cfg.threads.value_or(default_threads());
  std::vector<ScanRow> rows;
  bool surface = false;
  if (m.copula) {
    std::vector<double> thetas =
        cfg.theta ? cfg.theta->values()
                  : std::vector<double>{theta_or_default(cfg, *m.copula, "scan")};
    surface = thetas.size() > 1;
    rows = scan_nu(m.dist, m.family, *m.copula, thetas, alphas, opts, threads);
  } else {
    rows = scan_eta(m.dist, m.family, alphas, opts, threads);
  }
  const std::string text = output::csv(rows);
  if (cfg.out) {
    write_file(*cfg.out, text);
  } else {
    out << text;
  }
  if (cfg.svg) {
    const std::string title = m.dist.label() + " / " + m.family.label +
                              (m.copula ? " / " + m.copula->label : std::string());
    write_file(*cfg.svg, surface ? output::svg_heatmap(rows, title) : output::svg_lines(rows, title));
  }
  for (const auto& r : rows) {
    if (!r.error.empty()) return kExitNumeric;
  }
  return kExitOk;
}

inline int cmd_extrema(const config::RunConfig& cfg, std::optional<std::string> kind, bool all,
                       std::ostream& out) {
  const Model m = build_model(cfg);
  if (!cfg.window) throw Error(ErrorCode::ConfigError, "extrema needs --window lo:hi");
  const auto opts = cfg.quadrature();
  std::function<double(double)> objective;
  std::function<double(double)> slope;
  std::optional<double> theta;
  if (m.copula) {
    theta = theta_or_default(cfg, *m.copula, "extrema");
    objective = [&](double a) { return nu(m.dist, m.family, a, *m.copula, *theta, opts).value; };
    slope = [&](double a) { return nu_dalpha(m.dist, m.family, a, *m.copula, *theta, opts); };
  } else {
    objective = [&](double a) { return eta(m.dist, m.family, a, opts).value; };
    slope = [&](double a) { return eta_dalpha(m.dist, m.family, a, opts); };
  }
  ExtremumOptions eo;
  eo.admissible = std::pair{m.family.alpha_lo, m.family.alpha_hi};
  if (kind) {
    if (*kind == "min" || *kind == "minimum") {
      eo.kind_hint = ExtremumKind::minimum;
    } else if (*kind == "max" || *kind == "maximum") {
      eo.kind_hint = ExtremumKind::maximum;
    } else {
      throw Error(ErrorCode::ConfigError, "--kind must be min or max");
    }
  }
  auto print = [&](const ExtremumResult& r) {
    print_kv(out, "alpha_star", fmt(r.alpha_star));
    print_kv(out, "value", fmt(r.value));
    print_kv(out, "kind", std::string(to_string(r.kind)));
    print_kv(out, "bracket", fmt(r.bracket.first) + ":" + fmt(r.bracket.second));
    print_kv(out, "evaluations", std::to_string(r.evaluations));
    if (r.kind != ExtremumKind::none_in_window) {
      print_kv(out, "dvalue_dalpha", fmt(slope(r.alpha_star)));
    }
  };
  print_kv(out, "measure", m.copula ? "nu" : "eta");
  print_kv(out, "dist", m.dist.label());
  print_kv(out, "distortion", m.family.label);
  if (m.copula) {
    print_kv(out, "copula", m.copula->label);
    print_kv(out, "theta", fmt(*theta));
  }
  if (all) {
    const auto found = find_extrema(objective, *cfg.window, eo);
    print_kv(out, "count", std::to_string(found.size()));
    for (const auto& r : found) {
      out << "--\n";
      print(r);
    }
  } else {
    print(find_extremum(objective, *cfg.window, eo));
  }
  return kExitOk;
}

inline int cmd_check(const config::RunConfig& cfg, const std::optional<std::string>& id,
                     const std::optional<std::string>& csv_path, std::ostream& out) {
  const Model m = build_model(cfg);
  CheckContext ctx;
  ctx.distribution = m.dist;
  ctx.distortion = m.family;
  ctx.copula = m.copula;
  if (cfg.alpha) ctx.alpha = single(cfg.alpha, "alpha", "check");
  if (cfg.theta) ctx.theta = single(cfg.theta, "theta", "check");
  ctx.window = cfg.window;
  ctx.quadrature = cfg.quadrature();

  std::string csv_text = "theorem,condition,reading,u,lhs,rhs\n";
  bool failed = false;
  auto run_one = [&](std::string_view tid) {
    const ConditionReport r = check(tid, ctx);
    out << to_text(r);
    csv_text += to_csv(r, false);
    if (r.conclusion_verified == Confirmation::fails) failed = true;
  };
  if (id) {
    run_one(*id);
  } else {
    bool first = true;
    for (auto tid : kTheoremIds) {
      if (!first) out << "--\n";
      first = false;
      try {
        run_one(tid);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MissingContext && e.code() != ErrorCode::AlphaOutOfRange) throw;
        out << "theorem: " << tid << "\nskipped: " << e.what() << '\n';
      }
    }
  }
  if (csv_path) write_file(*csv_path, csv_text);
  return failed ? kExitNumeric : kExitOk;
}

inline int cmd_mc(const config::RunConfig& cfg, std::ostream& out) {
  const Model m = build_model(cfg);
  const double a = single(cfg.alpha, "alpha", "mc");
  const SurvivalCopulaFamily c = m.copula.value_or(independence_copula());
  const double th = theta_or_default(cfg, c, "mc");
  const McEstimate e = estimate_nu(m.dist, m.family, a, c, th, cfg.n, cfg.seed,
                                   cfg.threads.value_or(default_threads()));
  const double q = nu(m.dist, m.family, a, c, th, cfg.quadrature()).value;
  print_kv(out, "dist", m.dist.label());
  print_kv(out, "distortion", m.family.label);
  print_kv(out, "copula", c.label);
  print_kv(out, "theta", fmt(th));
  print_kv(out, "alpha", fmt(a));
  print_kv(out, "mean", fmt(e.mean));
  print_kv(out, "std_error", fmt(e.std_error));
  print_kv(out, "n", std::to_string(e.n));
  print_kv(out, "seed", std::to_string(e.seed));
  print_kv(out, "quadrature", fmt(q));
  print_kv(out, "z", fmt((e.mean - q) / e.std_error));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Figures

struct FigureFile {
  std::string name;
  std::vector<ScanRow> rows;
  std::string title;
  bool surface = false;
};

/// The scans behind the published figures, at default tolerances.
inline std::vector<FigureFile> figure_data(unsigned threads = default_threads()) {
  const auto e1 = exponential(1.0);
  const auto u01 = uniform(0.0, 1.0);
  const auto p2 = power_law(2.0);
  const auto fgm = fgm_copula();
  const auto K = config::k_function("t^2/2", Monotonicity::increasing);
  const auto thetas = step_range(-1.0, 1.0, 0.1);
  const auto alphas10 = step_range(0.1, 10.0, 0.1);
  const auto alphas20 = step_range(0.5, 20.0, 0.5);
  const quadrature::Options opts{};

  std::vector<FigureFile> files;
  const auto ph = proportional_hazard();
  files.push_back({"fig1", scan_nu(e1, ph, fgm, thetas, alphas10, opts, threads),
                   "nu: exp(1) / ph / fgm", true});
  files.push_back({"fig1_eta", scan_eta(e1, ph, alphas10, opts, threads), "eta: exp(1) / ph", false});
  files.push_back({"fig2", scan_eta(u01, generalized_additive_hazard(u01, K), alphas20, opts, threads),
                   "eta: uniform(0,1) / gah K=t^2/2", false});
  files.push_back({"fig2_exp", scan_eta(e1, generalized_additive_hazard(e1, K), alphas20, opts, threads),
                   "eta: exp(1) / gah K=t^2/2", false});
  files.push_back({"fig3",
                   scan_nu(p2, proportional_reversed_hazard(), fgm, thetas, alphas10, opts, threads),
                   "nu: powerlaw(2) / prh / fgm", true});
  return files;
}

inline int cmd_figures(const std::string& dir, unsigned threads, std::ostream& out) {
  bool ok = true;
  for (const auto& f : figure_data(threads)) {
    const std::string base = (std::filesystem::path(dir) / f.name).string();
    write_file(base + ".csv", output::csv(f.rows));
    write_file(base + ".svg", f.surface ? output::svg_heatmap(f.rows, f.title)
                                        : output::svg_lines(f.rows, f.title));
    out << base << ".csv\n" << base << ".svg\n";
    for (const auto& r : f.rows) ok = ok && r.error.empty();
  }
  return ok ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Distorted and copula-distorted Gini mean differences"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> flags;
  const std::vector<std::pair<const char*, const char*>> value_flags = {
      {"dist", "Base distribution, e.g. exp(1), uniform(0,1), weibull(2,1), powerlaw(2)"},
      {"distortion", "ph | prh | pow | gah:K=<expr>[;increasing|decreasing|neither]"},
      {"copula", "independence | fgm"},
      {"alpha", "Distortion parameter: value or lo:hi:step"},
      {"theta", "Copula parameter: value or lo:hi:step"},
      {"window", "Extremum search window lo:hi"},
      {"n", "Monte Carlo sample size"},
      {"seed", "Monte Carlo seed"},
      {"abs_tol", "Quadrature absolute tolerance"},
      {"rel_tol", "Quadrature relative tolerance"},
      {"out", "Output path (CSV file, or directory for figures)"},
      {"svg", "SVG output path for scan"},
      {"threads", "Worker threads (default: DGMD_THREADS or hardware count)"},
  };
  for (const auto& [name, help] : value_flags) {
    std::string flag = std::string("--") + name;
    if (std::string(name).find('_') != std::string::npos) {
      std::string dashed = name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      flag += ",--" + dashed;
    }
    app.add_option_function<std::string>(
        flag, [&flags, key = std::string(name)](const std::string& v) { flags[key] = v; }, help);
  }
  std::string config_path;
  app.add_option("--config", config_path, "Config file; its settings override flags");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate eta (or nu with --copula)");
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate eta or nu over an alpha (and theta) grid");
  auto* extrema_cmd = app.add_subcommand("extrema", "Locate an extremum over alpha");
  std::optional<std::string> kind;
  bool all = false;
  extrema_cmd->add_option("--kind", kind, "min or max");
  extrema_cmd->add_flag("--all", all, "Report every local extremum on the window");
  auto* check_cmd = app.add_subcommand("check", "Run condition checkers");
  std::optional<std::string> theorem;
  std::optional<std::string> csv_path;
  check_cmd->add_option("theorem", theorem, "T3.1..T3.4, T4.1..T4.4, A2.3, A2.4 (default: all)");
  check_cmd->add_option("--csv", csv_path, "Write grid violations as CSV");
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of nu");
  auto* fig_cmd = app.add_subcommand("figures", "Regenerate figure CSV and SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    config::RunConfig cfg;
    for (const auto& [k, v] : flags) config::apply(cfg, "", k, v);
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw Error(ErrorCode::ConfigError, "cannot read config '" + config_path + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      try {
        cfg = config::parse(buf.str(), cfg);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, config_path + ":" +
                                                std::string(e.what()).substr(std::string("ConfigError: ").size()));
      }
    }
    if (eval_cmd->parsed()) return cmd_eval(cfg, out);
    if (scan_cmd->parsed()) return cmd_scan(cfg, out);
    if (extrema_cmd->parsed()) return cmd_extrema(cfg, kind, all, out);
    if (check_cmd->parsed()) return cmd_check(cfg, theorem, csv_path, out);
    if (mc_cmd->parsed()) return cmd_mc(cfg, out);
    if (fig_cmd->parsed()) {
      return cmd_figures(cfg.out.value_or("figures"), cfg.threads.value_or(default_threads()), out);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace dgmd::cli
