#include <fngon/cli.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace {

using fngon::cli::cli_run;
namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fngon");
  std::ostringstream out, err;
  const int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fngon_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, OmegaFourJson) {
  const auto r = run({"omega", "--n", "4", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], fngon::cli::kSchemaVersion);
  EXPECT_EQ(j["set"]["elements"].size(), 9u);
  EXPECT_TRUE(j["polar_equal"].get<bool>());
}

TEST(Cli, CheckStarTwo) {
  const auto r = run({"check-star", "--n", "2", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["certificate"]["verdict"], "satisfied");
}

TEST(Cli, RenderTwoPixelNearPointThree) {
  const auto img = scratch("m2.ppm"), dump = scratch("m2.json");
  const auto r = run({"render", "--n", "2", "--width", "256", "--height", "256", "-o", img.string(),
                      "--dump", dump.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(img).substr(0, 15), "P6\n256 256\n255\n");
  const auto j = nlohmann::json::parse(slurp(dump));
  // Column of the pixel whose center is nearest 0.3 on the real axis.
  const int x = static_cast<int>((0.3 + 1) / 2 * 256), y = 128;
  EXPECT_EQ(j["codes"][y * 256 + x], 0);
}

TEST(Cli, RenderIndependentOfWorkers) {
  const auto a = scratch("w1.ppm"), b = scratch("w3.ppm");
  ASSERT_EQ(run({"render", "--n", "3", "--width", "48", "--height", "40", "--workers", "1", "-o",
                 a.string()}).code, 0);
  ASSERT_EQ(run({"render", "--n", "3", "--width", "48", "--height", "40", "--workers", "3", "-o",
                 b.string()}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, AttractorDeterministic) {
  const auto a = scratch("a1.csv"), b = scratch("a2.csv");
  for (const auto& p : {a, b})
    ASSERT_EQ(run({"attractor", "--n", "3", "--re", "0.4", "--im", "0.1", "--count", "200", "--seed",
                   "9", "-o", p.string()}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("re,im\n", 0), 0u);
}

TEST(Cli, EverySubcommandSpeaksJson) {
  const auto csv = scratch("z.csv"), pts = scratch("p.csv"), img = scratch("j.ppm");
  const std::vector<std::vector<std::string>> cmds{
      {"omega", "--n", "3"},
      {"check-star", "--n", "3"},
      {"lemmas", "--max-odd", "11", "--max-even", "10"},
      {"roots", "--n", "3", "--indices", "1,2"},
      {"zeroset", "--n", "2", "--N", "4", "-o", csv.string()},
      {"join", "--n", "3", "--a", "0,1,2", "--b", "6,5,4"},
      {"chain", "--n", "2", "--indices", "0,0,0,0,0,0,0,0,0"},
      {"render", "--n", "2", "--width", "8", "--height", "8", "-o", img.string()},
      {"attractor", "--n", "2", "--count", "10", "-o", pts.string()},
  };
  for (auto cmd : cmds) {
    cmd.push_back("--json");
    const auto r = run(cmd);
    EXPECT_EQ(r.code, 0) << cmd[0] << ": " << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], fngon::cli::kSchemaVersion) << cmd[0];
    EXPECT_EQ(j["command"], cmd[0]);
  }
}

TEST(Cli, ZeroSetCsvRows) {
  const auto csv = scratch("z2.csv");
  ASSERT_EQ(run({"zeroset", "--n", "2", "--N", "3", "-o", csv.string()}).code, 0);
  const auto text = slurp(csv);
  EXPECT_EQ(text.rfind("index,coefficients,degree,re,im,residual,multiplicity\n", 0), 0u);
  // Omega_2 = {-1, 0, 1}: 9 polynomials of degree <= 2, degrees sum to 2*6 + 1*2 = 14.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 14);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"render", "--widht", "3"}).code, 2);
  EXPECT_EQ(run({"omega", "--n", "1"}).code, 2);
  EXPECT_EQ(run({"roots", "--n", "3", "--indices", "99"}).code, 2);
  EXPECT_EQ(run({"join", "--n", "3", "--a", "0,1", "--b", "0"}).code, 2);
  EXPECT_EQ(run({"attractor", "--n", "2", "--re", "1.5"}).code, 2);
  EXPECT_EQ(run({"render", "--region", "1,-1,-1,1"}).code, 2);
}

TEST(Cli, NumericFailure) {
  const auto r = run({"roots", "--n", "3", "--indices", "1,2,3,4", "--tol", "1e-40"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("numeric"), std::string::npos);
}

TEST(Cli, HelpIsSuccess) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, WorkersPrecedence) {
  EXPECT_EQ(fngon::cli::resolve_workers(5), 5u);
  EXPECT_GE(fngon::cli::resolve_workers(std::nullopt), 1u);
}

}  // namespace
