#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ptwell_cli/cli.hpp"

namespace ptwell::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ptwell");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ptwell_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, BoundStatesListsLowestLevel) {
  const Result r = invoke({"boundstates", "--k-max", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("index,k,E,c1_sq,alpha_r,alpha_i,J_d_at_0\n1,1.44661", 0), 0u) << r.out;
}

TEST(Cli, OutputIsDeterministicAcrossJobCounts) {
  const Result a = invoke({"--jobs", "1", "scatter", "--steps", "50"});
  const Result b = invoke({"--jobs", "3", "scatter", "--steps", "50"});
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  const Result c = invoke({"--jobs", "1", "spectrum", "--steps", "41"});
  const Result d = invoke({"--jobs", "2", "spectrum", "--steps", "41"});
  ASSERT_EQ(c.code, kOk) << c.err;
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, JsonScatterHasAllColumns) {
  const Result r = invoke({"--format", "json", "scatter", "--steps", "10"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* c : {"k", "T", "R_plus", "R_minus", "abs_r_prod", "unitarity_residual", "sign_used",
                        "singular_flag"}) {
    ASSERT_TRUE(j["columns"].contains(c)) << c;
    EXPECT_EQ(j["columns"][c].size(), 10u);
  }
  for (const auto& v : j["columns"]["unitarity_residual"]) EXPECT_LT(v.get<double>(), 1e-9);
}

TEST(Cli, SpectrumWritesExceptionalPointsBesideOutput) {
  const auto path = temp_path("spectrum.csv");
  const Result r = invoke({"-o", path.string(), "spectrum", "--steps", "41"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string eps = slurp(path.string() + ".eps.csv");
  EXPECT_EQ(eps.rfind("lambda_star,k_star,kappa_bound,residual,branch_a,branch_b\n7.1558", 0), 0u) << eps;
  EXPECT_EQ(slurp(path).rfind("lambda,branch_id,k_re,k_im,E_re,E_im,J_d_at_0\n", 0), 0u);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".eps.csv");
}

TEST(Cli, TransportByIndexCarriesMetadata) {
  const Result r = invoke({"transport", "--k-index", "2", "--points", "11"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("# k=2.5955", 0), 0u) << r.out;
  int lines = 0;
  for (char ch : r.out) lines += ch == '\n';
  EXPECT_EQ(lines, 13);
}

TEST(Cli, TransportWithoutBoundStateIsComputeError) {
  EXPECT_EQ(invoke({"transport", "--k-index", "50"}).code, kComputeError);
  EXPECT_EQ(invoke({"transport", "--k-value", "2.0"}).code, kComputeError);
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  const auto cfg = temp_path("config.ini");
  {
    std::ofstream f(cfg);
    f << "v0=9\nvI=0.000001\nLambda=0\n";
  }
  const Result from_file = invoke({"--config", cfg.string(), "boundstates", "--k-max", "2.9"});
  ASSERT_EQ(from_file.code, kOk) << from_file.err;
  const Result flags = invoke({"--config", cfg.string(), "--v0", "25", "boundstates", "--k-max", "2.9"});
  ASSERT_EQ(flags.code, kOk) << flags.err;
  EXPECT_NE(from_file.out, flags.out);
  const Result explicit_run = invoke({"--v0", "25", "--vI", "0.000001", "--Lambda", "0", "boundstates", "--k-max", "2.9"});
  EXPECT_EQ(flags.out, explicit_run.out);
  std::filesystem::remove(cfg);
}

TEST(Cli, InvalidParametersExitWithUsageCode) {
  EXPECT_EQ(invoke({"--b", "-1", "boundstates"}).code, kBadArguments);
  EXPECT_EQ(invoke({"--vI", "-2", "scatter"}).code, kBadArguments);
  EXPECT_EQ(invoke({"scatter", "--steps", "1"}).code, kBadArguments);
  EXPECT_EQ(invoke({"--format", "xml", "scatter"}).code, kBadArguments);
  EXPECT_EQ(invoke({"nonsense"}).code, kBadArguments);
  EXPECT_EQ(invoke({}).code, kBadArguments);
}

TEST(Cli, UnwritableOutputIsIoError) {
  EXPECT_EQ(invoke({"-o", "/nonexistent-dir/x.csv", "boundstates"}).code, kIoError);
}

TEST(Cli, HelpExitsCleanly) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("spectrum"), std::string::npos);
}

TEST(Cli, QuickValidationPasses) {
  const Result r = invoke({"validate", "--level", "quick"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("ALL CHECKS PASSED"), std::string::npos);
}

}  // namespace
}  // namespace ptwell::cli
