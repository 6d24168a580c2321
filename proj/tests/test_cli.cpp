#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dgmd/cli.hpp"
#include "dgmd/config.hpp"
#include "oracles.hpp"

using namespace dgmd;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dgmd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgmd_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string field(const std::string& text, const std::string& key) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return {};
}

}  // namespace

TEST(Config, ParsesSectionsCommentsAndQuotes) {
  const auto cfg = config::parse(R"(
# comment
[model]
dist = weibull(2)        # default scale
distortion = "gah:K=t^2/2;increasing"
copula = fgm

[grid]
alpha = 0.5:2:0.5
theta = -0.25
window = 0.1:10

[mc]
n = 1e5
seed = 7

[quadrature]
abs_tol = 1e-12
rel_tol = 1e-10

[output]
out = "a b.csv"
threads = 2
)");
  EXPECT_EQ(config::to_text(cfg.dist), "weibull(2,1)");
  EXPECT_EQ(config::to_text(cfg.distortion), "gah:K=t^2/2;increasing");
  EXPECT_EQ(*cfg.copula, "fgm");
  EXPECT_EQ(cfg.alpha->values().size(), 4u);
  EXPECT_EQ(cfg.theta->lo, -0.25);
  EXPECT_EQ(cfg.window->second, 10.0);
  EXPECT_EQ(cfg.n, 100000u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.quadrature().abs_tol, 1e-12);
  EXPECT_EQ(*cfg.out, "a b.csv");
  EXPECT_EQ(*cfg.threads, 2u);
}

TEST(Config, SerializeIsCanonicalAndStable) {
  const char* texts[] = {
      "[model]\ndist=exp(1)\ndistortion=ph\n[grid]\nalpha=2\n",
      "[grid]\ntheta = -1:1:0.1\nalpha=0.1:10:0.1\n[model]\ncopula=\"fgm\"\ndist = powerlaw(2)\n"
      "distortion = prh\n[mc]\nseed=1\n",
      "[model]\ndist = uniform(0, 1)\ndistortion = gah:K=t^2/2\n[quadrature]\nabs_tol = 0.1e-9\n",
  };
  for (const char* t : texts) {
    const std::string once = config::serialize(config::parse(t));
    EXPECT_EQ(config::serialize(config::parse(once)), once) << t;
  }
  // Reordered input with the same content normalizes to the same text.
  EXPECT_EQ(config::serialize(config::parse("[grid]\nalpha=2\n[model]\ndistortion=ph\ndist=exp(1)\n")),
            config::serialize(config::parse(texts[0])));
}

TEST(Config, ErrorsCarryLineAndColumn) {
  auto message = [](const char* text) {
    try {
      config::parse(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("[model]\ndist = bogus(1)\n").find("2:8:"), std::string::npos);
  EXPECT_NE(message("[model]\nalpha = 2\n").find("2:9:"), std::string::npos);
  EXPECT_NE(message("[nope]\n").find("1:2:"), std::string::npos);
  EXPECT_NE(message("[grid]\nalpha 2\n").find("2:1:"), std::string::npos);
  EXPECT_NE(message("[grid]\nalpha = 2:1:0.1\n").find("2:9:"), std::string::npos);
  EXPECT_NE(message("[model]\ncopula = clayton\n").find("2:10:"), std::string::npos);
  EXPECT_NE(message("[model]\ndistortion = \"ph\n").find("2:14:"), std::string::npos);
}

TEST(Cli, EvalExample) {
  const auto r = run({"eval", "--dist", "exp(1)", "--distortion", "ph", "--alpha", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "value"), "0.833333333");
  EXPECT_EQ(field(r.out, "converged"), "true");
  EXPECT_EQ(field(r.out, "measure"), "eta");
}

TEST(Cli, EvalNuWithCopula) {
  const auto r = run({"eval", "--dist", "exp(1)", "--distortion", "ph", "--alpha", "1", "--copula",
                      "fgm", "--theta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "measure"), "nu");
  EXPECT_NEAR(std::stod(field(r.out, "value")), 5.0 / 6.0, 1e-9);
}

TEST(Cli, ExtremaExample) {
  const auto r = run({"extrema", "--dist", "exp(1)", "--distortion", "ph", "--window", "0.1:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(field(r.out, "alpha_star")), oracle::kExpPhArgmin, 1e-6);
  EXPECT_EQ(field(r.out, "kind"), "minimum");
}

TEST(Cli, ExtremaAllAndKind) {
  const auto r = run({"extrema", "--dist", "exp(1)", "--distortion", "ph", "--window", "0.1:10",
                      "--kind", "max"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "kind"), "none-in-window");
  const auto all = run({"extrema", "--dist", "exp(1)", "--distortion", "ph", "--window", "0.1:10", "--all"});
  EXPECT_EQ(field(all.out, "count"), "1");
  EXPECT_EQ(run({"extrema", "--dist", "exp(1)", "--distortion", "ph"}).code, 2);
}

TEST(Cli, CheckExample) {
  const auto r = run({"check", "T4.4", "--dist", "powerlaw(2)", "--distortion", "prh", "--copula", "fgm"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "conclusion_verified"), "holds");
  EXPECT_NEAR(std::stod(field(r.out, "integral.int_{1/2}^1 q(u)(4u-3) du")), 0.23570226, 1e-8);
}

TEST(Cli, CheckAllSkipsMissingContextAndWritesCsv) {
  const auto dir = scratch("check");
  const auto csv = (dir / "v.csv").string();
  const auto r = run({"check", "--dist", "exp(1)", "--distortion", "prh", "--alpha", "2", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("theorem: T3.4\nskipped: MissingContext"), std::string::npos);
  EXPECT_NE(r.out.find("theorem: T4.1\nskipped"), std::string::npos);
  EXPECT_NE(r.out.find("theorem: A2.4\n"), std::string::npos);
  EXPECT_EQ(slurp(csv).rfind("theorem,condition,reading,u,lhs,rhs\n", 0), 0u);
}

TEST(Cli, ScanWritesCsvAndSvg) {
  const auto dir = scratch("scan");
  const auto r = run({"scan", "--dist", "powerlaw(2)", "--distortion", "prh", "--copula", "fgm",
                      "--theta", "-1:1:0.5", "--alpha", "0.5:2:0.5", "--out", (dir / "s.csv").string(),
                      "--svg", (dir / "s.svg").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "s.csv");
  EXPECT_EQ(csv.rfind("theta,alpha,value,err_estimate,converged\n", 0), 0u);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, 1u + 5u * 4u);
  EXPECT_NE(slurp(dir / "s.svg").find("<svg"), std::string::npos);
  EXPECT_NE(slurp(dir / "s.svg").find("<rect x="), std::string::npos);
}

TEST(Cli, ScanEtaToStdoutOmitsTheta) {
  const auto r = run({"scan", "--alpha", "1:2:0.5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("alpha,value,err_estimate,converged\n1,1,", 0), 0u);
}

TEST(Cli, McPrintsEstimate) {
  const auto r = run({"mc", "--alpha", "1", "--n", "20000", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "copula"), "independence");
  EXPECT_EQ(field(r.out, "n"), "20000");
  EXPECT_LE(std::abs(std::stod(field(r.out, "z"))), 4.0);
}

TEST(Cli, ConfigOverridesFlags) {
  const auto dir = scratch("config");
  std::ofstream(dir / "run.conf") << "[model]\ndistortion = prh\n[grid]\nalpha = 2\n";
  const auto r = run({"eval", "--distortion", "ph", "--alpha", "3", "--config", (dir / "run.conf").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "distortion"), "prh");
  EXPECT_EQ(field(r.out, "alpha"), "2");
}

TEST(Cli, ConfigErrorsReportFileLineColumn) {
  const auto dir = scratch("badconf");
  std::ofstream(dir / "bad.conf") << "[model]\n\ndist = nope(1)\n";
  const auto r = run({"eval", "--config", (dir / "bad.conf").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.conf:3:8:"), std::string::npos) << r.err;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"eval", "--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"eval", "--bogus-flag"}).code, 2);
  EXPECT_EQ(run({"eval", "--dist", "exp(-1)", "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"eval", "--alpha", "-1"}).code, 2);
  EXPECT_EQ(run({"eval", "--alpha", "1", "--copula", "fgm", "--theta", "3"}).code, 2);
  EXPECT_EQ(run({"eval"}).code, 2);
  EXPECT_EQ(run({"mc", "--alpha", "1", "--n", "10"}).code, 2);
  EXPECT_EQ(run({"extrema", "--window", "-1:2"}).code, 2);
  const auto numeric = run({"eval", "--dist", "weibull(0.3)", "--alpha", "0.2", "--abs-tol", "1e-300",
                            "--rel-tol", "0"});
  EXPECT_EQ(numeric.code, 3);
  EXPECT_NE(numeric.err.find("IntegrationFailure"), std::string::npos) << numeric.err;
}

TEST(Cli, FiguresAreDeterministic) {
  const auto a = scratch("figs_a");
  const auto b = scratch("figs_b");
  ASSERT_EQ(run({"figures", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"figures", "--out", b.string(), "--threads", "1"}).code, 0);
  for (const char* name : {"fig1", "fig1_eta", "fig2", "fig2_exp", "fig3"}) {
    for (const char* ext : {".csv", ".svg"}) {
      const std::string f = std::string(name) + ext;
      ASSERT_TRUE(fs::exists(a / f)) << f;
      EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
  }
}
