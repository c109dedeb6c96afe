#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "auctionval/cli.hpp"
#include "auctionval/plot.hpp"

using namespace auctionval;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "auctionval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "auctionval_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, SimulateIsReproducible) {
  const auto a = cli({"simulate", "--dist", "uniform:1,20", "--K", "20", "--seed", "3"});
  const auto b = cli({"simulate", "--dist", "uniform:1,20", "--K", "20", "--seed", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# seed=3"), std::string::npos);
  EXPECT_NE(cli({"simulate", "--dist", "uniform:1,20", "--K", "20", "--seed", "4"}).out, a.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({"simulate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"nonsense"}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--dist", "uniform:1,20", "--K", "abc"}).code, kExitUsage);
}

TEST(Cli, ValidationAndIoErrors) {
  EXPECT_EQ(cli({"simulate", "--dist", "uniform:5,1"}).code, kExitValidation);
  const auto empty = scratch("empty.csv");
  std::ofstream(empty).close();
  EXPECT_EQ(cli({"estimate", "--data", empty.string()}).code, kExitValidation);
  EXPECT_EQ(cli({"estimate", "--data", scratch("missing.csv").string()}).code, kExitIo);
}

TEST(Cli, EstimateBandsPlotPipeline) {
  const auto data = scratch("data.csv");
  ASSERT_EQ(cli({"simulate", "--dist", "uniform:1,20", "--K", "60", "--seed", "1", "--out", data.string()}).code,
            kExitOk);
  const auto curves = scratch("curves.csv");
  auto est = cli({"estimate", "--data", data.string(), "--g-reps", "100000", "--out", curves.string()});
  ASSERT_EQ(est.code, kExitOk) << est.err;
  EXPECT_NE(slurp(curves).find("x,init,cmle"), std::string::npos);

  const auto band = scratch("band.csv");
  auto b = cli({"bands", "--data", data.string(), "--alpha", "0.10", "--g-reps", "100000", "--out", band.string()});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_NE(slurp(band).find("batches=5"), std::string::npos);

  const auto svg = scratch("plot.svg");
  auto p = cli({"plot", "--curves", curves.string(), "--band", band.string(), "--svg", svg.string()});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  EXPECT_NE(p.out.find("x,series,value"), std::string::npos);
  EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);

  auto m = cli({"metrics", "--curves", curves.string(), "--dist", "uniform:1,20"});
  ASSERT_EQ(m.code, kExitOk) << m.err;
}

TEST(Cli, ConfigFileAndOverride) {
  const auto cfg = scratch("run.cfg");
  std::ofstream(cfg) << "# comment\ndist=uniform:1,20\nK=15\nseed=8\n";
  const auto a = cli({"simulate", "--config", cfg.string()});
  const auto b = cli({"simulate", "--dist", "uniform:1,20", "--K", "15", "--seed", "8"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  // Drop the config echo, which names the config file.
  auto body = [](const std::string& s) { return std::regex_replace(s, std::regex("# config=[^\n]*\n"), ""); };
  EXPECT_EQ(body(a.out), body(b.out));
  const auto c = cli({"simulate", "--config", cfg.string(), "--K", "5"});
  EXPECT_NE(c.out.find("# K=5"), std::string::npos);
}

TEST(Cli, IngestRoundTrip) {
  const auto data = scratch("rt_data.csv");
  const auto trace = scratch("rt_trace.csv");
  ASSERT_EQ(cli({"simulate", "--dist", "uniform:1,20", "--K", "25", "--tau", "7", "--seed", "2", "--out",
                 data.string(), "--trace", trace.string()})
                .code,
            kExitOk);
  const auto again = scratch("rt_again.csv");
  const auto r = cli({"ingest", trace.string(), "--duration", "7", "--noise", "0", "--reserve-jitter", "0", "--out",
                      again.string(), "--report", scratch("rt_report.txt").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto rows = [](const std::string& s) {
    std::string out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line[0] != '#') out += line + "\n";
    }
    return out;
  };
  EXPECT_EQ(rows(slurp(again)), rows(slurp(data)));
}

TEST(Plot, SeriesCounts) {
  const MonotoneCurve a({1, 2, 3}, {0.1, 0.5, 1}, CurveKind::PiecewiseLinear);
  const MonotoneCurve b({1, 2, 3}, {0.2, 0.4, 1}, CurveKind::Step);
  std::vector<std::pair<std::string, MonotoneCurve>> curves{{"init", a}, {"cmle", b}};
  ConfidenceBand band;
  band.knots = {1, 2, 3};
  band.lower = {0, 0.3, 0.9};
  band.upper = {0.2, 0.6, 1};
  std::vector<std::pair<std::string, ConfidenceBand>> bands{{"cmle", band}};
  EXPECT_EQ(plot_series(curves, bands).size(), 4u);
  std::vector<std::pair<std::string, ConfidenceBand>> empty{{"cmle", ConfidenceBand{}}};
  EXPECT_EQ(plot_series(curves, empty).size(), 2u);
  EXPECT_EQ(plot_series(curves, {}).size(), 2u);
}

TEST(Plot, SvgCoordinatesFinite) {
  Series s{"s", {0, 0.25, 0.5, 1, NAN}, {0, 0.5, 0.75, 1, 0.3}};
  Series flat{"flat", {0.5, 0.5}, {0.2, 0.2}};
  const std::vector<Series> all{s, flat};
  std::ostringstream out;
  write_plot_svg(all, out, "t");
  const std::string svg = out.str();
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
  const std::regex num(R"(points="([^"]*)\")");
  std::size_t polylines = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), num); it != std::sregex_iterator(); ++it) {
    ++polylines;
    std::istringstream pts((*it)[1].str());
    for (std::string p; pts >> p;) {
      const auto comma = p.find(',');
      ASSERT_NE(comma, std::string::npos);
      const double x = std::stod(p.substr(0, comma)), y = std::stod(p.substr(comma + 1));
      EXPECT_TRUE(std::isfinite(x) && std::isfinite(y));
      EXPECT_GE(x, 0);
      EXPECT_LE(x, 720);
      EXPECT_GE(y, 0);
      EXPECT_LE(y, 480);
    }
  }
  EXPECT_EQ(polylines, 2u);
}
