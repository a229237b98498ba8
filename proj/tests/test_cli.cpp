#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "trajadv/commands.hpp"
#include "trajadv/svg_plot.hpp"
#include "trajadv/telemetry.hpp"

using namespace trajadv;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = TRAJADV_SOURCE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "trajadv");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("trajadv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream f(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(f, line)) ++n;
  return n;
}

const std::string kSlider = (kRoot / "configs" / "slider_assist.yaml").string();
const std::string kTable = (kRoot / "configs" / "table1_slider.yaml").string();

}  // namespace

TEST(Telemetry, HeaderAndNumberFormat) {
  const auto h = csv_header(3);
  EXPECT_EQ(h.front(), "t");
  EXPECT_EQ(h[4], "x_x");
  EXPECT_EQ(h[9], "x_rz");
  EXPECT_NE(std::find(h.begin(), h.end(), "tau_2"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "f_ext_rx"), h.end());
  EXPECT_EQ(h.back(), "sdot_residual");
  EXPECT_EQ(h.size(), 4u + 5 * 6 + 3 + 6 + 4);
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  EXPECT_EQ(format_number(-0.0), "0");
}

TEST(Telemetry, RoundTrip) {
  std::vector<LogRecord> log(2);
  log[0].tau = Eigen::Vector2d(1.5, -2);
  log[1].tau = Eigen::Vector2d(0.25, 3);
  log[1].t = 0.001;
  log[1].psi = 0.001;
  log[1].wrench_class = WrenchClass::Assistive;
  std::stringstream s;
  write_csv(s, log);
  const CsvTable t = parse_csv(s, "mem");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.column("tau_1")[0], -2.0);
  EXPECT_EQ(t.column("psi")[1], 0.001);
  EXPECT_TRUE(std::isnan(t.column("wrench_class")[1]));
  EXPECT_NE(s.str().find(",Assistive,"), std::string::npos);
}

TEST(Svg, DeterministicWithLegend) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<PlotSeries> s = {{"psi", {0, 1, 2, 3}}, {"a<b", {1, 1, 1, 1}}};
  const std::string a = render_svg(x, s), b = render_svg(x, s);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find(">psi<"), std::string::npos);
  EXPECT_NE(a.find("a&lt;b"), std::string::npos);
  const std::regex poly("<polyline");
  EXPECT_EQ(std::distance(std::sregex_iterator(a.begin(), a.end(), poly), std::sregex_iterator()), 2);
}

TEST_F(Cli, SimulateWritesOneRowPerStep) {
  const auto csv = dir_ / "run.csv";
  const auto r = cli({"simulate", "--config", kSlider, "--out", csv.string(), "--set", "duration=2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(csv), 2001u + 1u);
  EXPECT_NE(r.out.find("delta_psi"), std::string::npos);
  EXPECT_NE(r.out.find("rms_err"), std::string::npos);
  EXPECT_NE(r.out.find("peak_psidot"), std::string::npos);
}

TEST_F(Cli, FrozenOverrideGivesBaseline) {
  const auto csv = dir_ / "frozen.csv";
  const auto r = cli({"simulate", "--config", kSlider, "--out", csv.string(), "--set", "advancement.law=frozen",
                      "--set", "controller.variant=classical"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = read_csv(csv);
  const auto psi = t.column("psi"), time = t.column("t"), pd = t.column("psidot"), alpha = t.column("alpha");
  for (std::size_t i = 0; i < psi.size(); ++i) {
    ASSERT_NEAR(psi[i], time[i], 1e-8);
    ASSERT_EQ(pd[i], 1.0);
  }
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({"simulate", "--config", (dir_ / "missing.yaml").string()}).code, 2);
  std::ofstream(dir_ / "bad.yaml") << "schema_version: 1\nmodel: slider\ndurration: 3\n";
  const auto r = cli({"simulate", "--config", (dir_ / "bad.yaml").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"sweep", "--config", kTable, "--preset", "nope", "--out", dir_.string()}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"simulate"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--config", kSlider, "--set", "nokey"}).code, 2);
}

TEST_F(Cli, RuntimeFailureExitsOne) {
  const auto r = cli({"simulate", "--config", kSlider, "--out", (dir_ / "no" / "such" / "dir.csv").string(),
                      "--set", "duration=0.1"});
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, SweepWritesCasesAndSummary) {
  const auto r = cli({"sweep", "--config", kTable, "--preset", "table1", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* l : {"a", "b", "c", "d", "e", "f"}) {
    EXPECT_TRUE(fs::exists(dir_ / (std::string(l) + ".csv"))) << l;
  }
  const auto s = read_csv(dir_ / "summary.csv");
  ASSERT_EQ(s.rows.size(), 6u);
  const auto dpsi = s.column("delta_psi");
  EXPECT_GT(dpsi[0], dpsi[1]);
  EXPECT_GT(dpsi[0], dpsi[2]);
  for (int i = 3; i < 6; ++i) EXPECT_LT(std::abs(dpsi[static_cast<std::size_t>(i)]), 1e-2);

  // psidot on row (a): flat 1 with one bump during the pulse.
  const auto a = read_csv(dir_ / "a.csv");
  const auto t = a.column("t"), pd = a.column("psidot");
  double before = 0, during = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 9.6) before = std::max(before, std::abs(pd[i] - 1.0));
    if (t[i] > 9.625 && t[i] < 10.375) during = std::max(during, pd[i]);
  }
  EXPECT_LT(before, 1e-9);
  EXPECT_GT(during, 1.1);
}

TEST_F(Cli, Classify) {
  auto r = cli({"classify", "--force", "10,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Assistive\n");
  r = cli({"classify", "--force", "0,-10,0"});
  EXPECT_EQ(r.out, "Agnostic\n");
  r = cli({"classify", "--force", "0,0,1", "--direction", "0,0,-1,0,0,0"});
  EXPECT_EQ(r.out, "Agnostic\n");
  r = cli({"classify", "--force", "0,0,0", "--torque", "0,0.5,0", "--direction", "0,0,0,0,1,0"});
  EXPECT_EQ(r.out, "Assistive\n");
  EXPECT_EQ(cli({"classify", "--force", "1,0,0", "--direction", "0,0,0,0,0,0"}).code, 2);
  EXPECT_EQ(cli({"classify", "--force", "1,0"}).code, 2);
}

TEST_F(Cli, Plot) {
  const auto csv = dir_ / "frozen.csv";
  ASSERT_EQ(cli({"simulate", "--config", kSlider, "--out", csv.string(), "--set", "advancement.law=frozen",
                 "--set", "duration=2"})
                .code,
            0);
  const auto svg = dir_ / "psi.svg";
  auto r = cli({"plot", csv.string(), "--columns", "psi", "--out", svg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(svg);
  ASSERT_EQ(cli({"plot", csv.string(), "--columns", "psi", "--out", (dir_ / "again.svg").string()}).code, 0);
  EXPECT_EQ(text, slurp(dir_ / "again.svg"));

  // psi = t: every polyline vertex lies on one straight line.
  const auto begin = text.find("points=\"");
  ASSERT_NE(begin, std::string::npos);
  const auto end = text.find('"', begin + 8);
  std::istringstream pts(text.substr(begin + 8, end - begin - 8));
  std::vector<std::pair<double, double>> p;
  std::string tok;
  while (pts >> tok) {
    const auto comma = tok.find(',');
    p.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
  }
  ASSERT_GT(p.size(), 100u);
  const double slope = (p.back().second - p.front().second) / (p.back().first - p.front().first);
  for (const auto& [x, y] : p) ASSERT_NEAR(y, p.front().second + slope * (x - p.front().first), 0.02);

  r = cli({"plot", csv.string(), "--columns", "psi,bogus", "--out", svg.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  std::ofstream(dir_ / "empty.csv").close();
  EXPECT_EQ(cli({"plot", (dir_ / "empty.csv").string(), "--columns", "psi", "--out", svg.string()}).code, 2);
  std::ofstream(dir_ / "header.csv") << "t,psi\n";
  EXPECT_EQ(cli({"plot", (dir_ / "header.csv").string(), "--columns", "psi", "--out", svg.string()}).code, 2);
}
