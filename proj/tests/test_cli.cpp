#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "magic_bullet/cli.hpp"
#include "magic_bullet/errors.hpp"

using namespace magic_bullet;
using namespace magic_bullet::cli;

namespace {

struct Output {
  std::string primary;
  std::string info;
};

Output run_args(const std::vector<std::string>& args,
                const std::optional<std::string>& config_text = std::nullopt) {
  const RunConfig cfg = parse_config(args, config_text);
  std::ostringstream out, info;
  EXPECT_EQ(run(cfg, out, info), 0);
  return {out.str(), info.str()};
}

std::string first_lines(const std::string& text, int n) {
  std::istringstream in(text);
  std::string line, out;
  for (int i = 0; i < n && std::getline(in, line); ++i) out += line + "\n";
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // schema comment
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string c;
    while (std::getline(cs, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int exit_status(const std::string& args) {
  const std::string cmd = std::string(MAGIC_BULLET_BIN) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* key, const std::string& value) : key_(key) { setenv(key, value.c_str(), 1); }
  ~ScopedEnv() { unsetenv(key_); }

 private:
  const char* key_;
};

}  // namespace

TEST(ParseConfig, Fig3Echo) {
  const auto cfg = parse_config({"fig3", "--g2", "0.01", "--dx", "0", "--gc-grid", "1e-3:1e1:25"});
  EXPECT_EQ(cfg.command, Command::kFig3);
  EXPECT_EQ(cfg.real("g2"), 0.01);
  EXPECT_EQ(cfg.reals("dx"), std::vector<double>{0.0});
  const auto g = cfg.grid("gc-grid");
  EXPECT_EQ(g.lo, 1e-3);
  EXPECT_EQ(g.hi, 10.0);
  EXPECT_EQ(g.n, 25);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_FALSE(cfg.with_oracle);
}

TEST(ParseConfig, FiltersOrder) {
  const auto cfg = parse_config({"filters", "--k", "4", "--wc-over-g", "1e-3"});
  EXPECT_EQ(cfg.integers("k"), std::vector<int>{4});
  EXPECT_EQ(cfg.reals("wc-over-g"), std::vector<double>{1e-3});
}

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config({"pairs"});
  EXPECT_EQ(cfg.real("g2"), 0.01);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_FALSE(cfg.with_oracle);
  EXPECT_EQ(cfg.params.at("phi"), "gaussian");
}

TEST(ParseConfig, RejectionsNameTheKey) {
  auto message = [](const std::vector<std::string>& args) -> std::string {
    try {
      parse_config(args);
    } catch (const Error& e) {
      EXPECT_EQ(e.exit_code(), 2);
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message({"fig3", "--g2", "1.5"}).find("g2"), std::string::npos);
  EXPECT_NE(message({"filters", "--k", "0"}).find("'k'"), std::string::npos);
  EXPECT_NE(message({"quadrature", "--nbar", "abc"}).find("nbar"), std::string::npos);
  EXPECT_NE(message({"pairs", "--modes", "200"}).find("modes"), std::string::npos);
  EXPECT_NE(message({"fig3", "--bogus", "1"}).find("bogus"), std::string::npos);
  EXPECT_FALSE(message({"nope"}).empty());
  EXPECT_FALSE(message({}).empty());
  EXPECT_NE(message({"pairs", "--with-oracle"}).find("with-oracle"), std::string::npos);
}

TEST(ParseConfig, ConfigFileFillsAndFlagsWin) {
  const std::string text = "# sweep\ng2 = 0.2\ndx = 1\nseed = 7\n\ngc-grid = 1e-2:1:3\n";
  const auto cfg = parse_config({"fig3", "--dx", "2"}, text);
  EXPECT_EQ(cfg.real("g2"), 0.2);
  EXPECT_EQ(cfg.reals("dx"), std::vector<double>{2.0});
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.grid("gc-grid").n, 3);
}

TEST(ParseConfig, ConfigFileUnknownKeyRejected) {
  try {
    parse_config({"fig3"}, "g2 = 0.1\nk = 4\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'k'"), std::string::npos);
  }
  EXPECT_THROW(parse_config({"fig3"}, "just text\n"), ValidationError);
}

TEST(ParseConfig, ConfigFileFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "mb_cfg_test.conf";
  std::ofstream(path) << "nbar = 3\ntrials = 5\n";
  const auto cfg = parse_config({"quadrature", "--config", path.string()});
  EXPECT_EQ(cfg.real("nbar"), 3.0);
  EXPECT_EQ(cfg.integer("trials"), 5);
  std::filesystem::remove(path);
  EXPECT_THROW(parse_config({"quadrature", "--config", "/nonexistent/x.conf"}), ValidationError);
}

TEST(ParseConfig, HelpIsReported) {
  EXPECT_THROW(parse_config({"--help"}), HelpRequested);
  EXPECT_THROW(parse_config({"fig3", "--help"}), HelpRequested);
}

TEST(ReadFlatConfig, CommentsAndWhitespace) {
  const auto m = read_flat_config("  a = 1  # trailing\n# full\n\nb=x y\n");
  EXPECT_EQ(m.at("a"), "1");
  EXPECT_EQ(m.at("b"), "x y");
  EXPECT_EQ(m.size(), 2u);
}

// Golden schema lines: the first two lines of every CSV are pinned.
class GoldenHeader : public ::testing::TestWithParam<std::pair<std::string, std::vector<std::string>>> {};

TEST_P(GoldenHeader, MatchesPinnedSchema) {
  const auto& [name, args] = GetParam();
  const std::string expected =
      read_file(std::filesystem::path(MAGIC_BULLET_GOLDEN_DIR) / (name + ".header"));
  ASSERT_FALSE(expected.empty()) << name;
  EXPECT_EQ(first_lines(run_args(args).primary, 2), expected);
}

INSTANTIATE_TEST_SUITE_P(
    Schemas, GoldenHeader,
    ::testing::Values(
        std::make_pair(std::string("spectra"), std::vector<std::string>{"spectra"}),
        std::make_pair(std::string("quadrature"), std::vector<std::string>{"quadrature"}),
        std::make_pair(std::string("pairs"), std::vector<std::string>{"pairs"}),
        std::make_pair(std::string("fig3"), std::vector<std::string>{"fig3"}),
        std::make_pair(std::string("filters"), std::vector<std::string>{"filters"}),
        std::make_pair(std::string("fig3_oracle"),
                       std::vector<std::string>{"fig3", "--with-oracle", "--gc-grid", "1:1:1"}),
        std::make_pair(std::string("filters_oracle"),
                       std::vector<std::string>{"filters", "--with-oracle", "--k", "1"})),
    [](const auto& info) { return info.param.first; });

TEST(Run, ByteIdenticalReruns) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"quadrature", "--seed", "5", "--trials", "2000"},
           {"fig3", "--gc-grid", "1e-3:1:7"},
           {"epr-demo", "--d", "6", "--trials", "3000", "--seed", "2"},
           {"pairs", "--phi", "flat", "--phi-width", "0.2"},
           {"spectra", "--gamma-hz", "2.5e6"}}) {
    const auto a = run_args(args);
    const auto b = run_args(args);
    EXPECT_EQ(a.primary, b.primary) << args[0];
    EXPECT_EQ(a.info, b.info) << args[0];
  }
  EXPECT_NE(run_args({"quadrature", "--seed", "5", "--trials", "20"}).primary,
            run_args({"quadrature", "--seed", "6", "--trials", "20"}).primary);
}

TEST(Run, Fig3DefaultReachesMagicBulletRegime) {
  const auto rows = csv_rows(run_args({"fig3"}).primary);
  ASSERT_EQ(rows.size(), 75u);
  EXPECT_EQ(std::stod(rows[0][0]), 0.0);
  EXPECT_EQ(std::stod(rows[0][1]), 1e-3);
  EXPECT_LT(std::stod(rows[0][2]), 0.05);
}

TEST(Run, FiltersFollowHalfOverK) {
  const auto rows = csv_rows(run_args({"filters", "--with-oracle"}).primary);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    const double ratio = std::stod(r[2]) / std::stod(r[3]);
    EXPECT_GE(ratio, 0.95);
    EXPECT_LE(ratio, 1.05);
    EXPECT_EQ(r.back(), "pass");
  }
}

TEST(Run, Fig3OracleColumnsPass) {
  const auto rows = csv_rows(run_args({"fig3", "--with-oracle", "--gc-grid", "1e-2:10:4"}).primary);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) EXPECT_EQ(r.back(), "pass");
}

TEST(Run, EprDemoSummary) {
  const auto j = nlohmann::json::parse(run_args({"epr-demo", "--d", "4", "--trials", "10000"}).primary);
  EXPECT_EQ(j.at("match_fraction").get<double>(), 1.0);
  EXPECT_EQ(j.at("command"), "epr-demo");
}

TEST(Run, QuadratureOracleAgrees) {
  const auto out = run_args({"quadrature", "--nbar", "10", "--trials", "100", "--with-oracle"});
  const auto j = nlohmann::json::parse(out.info);
  EXPECT_TRUE(j.at("oracle").at("agree").get<bool>());
  EXPECT_NEAR(j.at("analytic").at("cond_var").get<double>(), 1.0 / 84.0, 1e-15);
}

TEST(Run, PairsSummary) {
  const auto out = run_args({"pairs"});
  const auto j = nlohmann::json::parse(out.info);
  EXPECT_GT(j.at("conjugate_fidelity").get<double>(), 0.999);
  EXPECT_EQ(csv_rows(out.primary).size(), 201u);
}

TEST(Run, OutputDirectoryFromEnvironment) {
  const auto dir = std::filesystem::temp_directory_path() / "mb_out_env_test";
  std::filesystem::create_directories(dir);
  {
    ScopedEnv env(kOutputDirEnv, dir.string());
    const auto cfg = parse_config({"spectra", "--x-grid", "0:1:3"});
    EXPECT_EQ(resolve_output_path(cfg), (dir / "spectra.csv").string());
    std::ostringstream out, info;
    run(cfg, out, info);
    EXPECT_TRUE(out.str().empty());
    EXPECT_EQ(csv_rows(read_file(dir / "spectra.csv")).size(), 3u);
    // Explicit path wins over the environment.
    const auto explicit_cfg = parse_config({"spectra", "-o", (dir / "x.csv").string()});
    EXPECT_EQ(resolve_output_path(explicit_cfg), (dir / "x.csv").string());
  }
  std::filesystem::remove_all(dir);
}

TEST(ExitCodes, ByErrorFamily) {
  EXPECT_EQ(exit_status("fig3 --gc-grid 1:1:1"), 0);
  EXPECT_EQ(exit_status("fig3 --g2 1.5"), 2);
  EXPECT_EQ(exit_status("filters --k x"), 2);
  EXPECT_EQ(exit_status("frobnicate"), 2);
  EXPECT_EQ(exit_status("--help"), 0);
  // Oracle discretization needs more than the dense Fock cap at this pump.
  EXPECT_EQ(exit_status("fig3 --g2 0.99 --gc-grid 1e-3:1e-3:1 --dx 0 --with-oracle"), 4);
}
