#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "optseq/cli.hpp"
#include "optseq/errors.hpp"
#include "optseq/report.hpp"

using namespace optseq;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + "optseq_" + name;
}

}  // namespace

TEST(Cli, NormOfVector) {
  const auto r = run({"norm", "lp:p=2", "--vec", "3,4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "norm");
  EXPECT_EQ(j["inputs"]["space"], "lp:p=2");
  EXPECT_EQ(j["result"]["value"], 5.0);
  EXPECT_EQ(j["config"]["seed"], "20240531");
}

TEST(Cli, VectorFromFile) {
  const auto path = temp_path("vec.txt");
  std::ofstream(path) << "# entries\n3\n\n-4\n";
  const auto r = run({"norm", "lp:p=2", "--file", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["result"]["value"], 5.0);
  std::remove(path.c_str());
}

TEST(Cli, ParseErrorsNameToken) {
  auto r = run({"norm", "lp:p=x", "--vec", "1"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("'x'"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
  r = run({"norm", "lp:p=2", "--vec", "1,zz,3"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("'zz'"), std::string::npos) << r.err;
  r = run({"--seed", "3", "bogus"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("'bogus'"), std::string::npos) << r.err;
  r = run({"--caps", "nope=1", "describe", "lp:p=2"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("'nope'"), std::string::npos) << r.err;
  EXPECT_EQ(run({"describe", "lorentz:q=2,w=invlog", "--format", "xml"}).code, kExitParse);
}

TEST(Cli, ResourceLimit) {
  const auto r = run({"phi", "lorentz:q=1,w=explicit(1;0.5)", "--n", "5"});
  EXPECT_EQ(r.code, kExitResource) << r.out << r.err;
}

TEST(Cli, InconclusiveCriterion) {
  const auto r =
      run({"criteria", "lorentz:q=1,w=power(0.5)", "--criterion", "lorentz_did"});
  EXPECT_EQ(r.code, kExitInconclusive) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["criteria"][0]["verdict"], "inconclusive");
}

TEST(Cli, ConclusiveCriterion) {
  const auto r = run({"criteria", "orlicz:power(p=2)", "--criterion",
                      "orlicz_submultiplicative"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(Cli, IndicesCsv) {
  const auto r = run({"indices", "lorentz:q=2,w=power(0.5)"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line, header, row;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty())
      header = line;
    else
      row = line;
  }
  EXPECT_EQ(header, "family,parameters,mu,nu,delta,sigma,method,residual");
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : row) {
    if (ch == '"') quoted = !quoted;
    else if (ch == ',' && !quoted) cells.push_back(std::exchange(cell, {}));
    else cell += ch;
  }
  cells.push_back(cell);
  ASSERT_EQ(cells.size(), 8u) << row;
  EXPECT_EQ(cells[0], "lorentz");
  EXPECT_EQ(cells[1], "q=2,w=power(0.5)");
  EXPECT_NEAR(std::stod(cells[2]), 0.25, 0.02);
  EXPECT_NEAR(std::stod(cells[3]), 0.25, 0.02);
  EXPECT_EQ(std::stod(cells[4]), 2.0);
  EXPECT_EQ(std::stod(cells[5]), 4.0);
}

TEST(Cli, ClassifyOrliczPowerLog) {
  const auto r = run({"classify", "orlicz:powerlog(p=2,a=1)"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["X_U"]["space"], "l_N");
  EXPECT_EQ(j["result"]["X_L"]["space"], "l_2");
}

TEST(Cli, DescribeRoundTrip) {
  const auto r = run({"describe", "lpq:q=inf,p=2", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string canonical = Json::parse(r.out)["result"]["canonical"];
  EXPECT_EQ(canonical, "lpq:p=2,q=inf");
  const auto again = run({"describe", canonical});
  EXPECT_EQ(Json::parse(again.out)["result"]["canonical"], canonical);
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto path = temp_path("run.cfg");
  std::ofstream(path) << "seed = 5\nformat = csv\nL_max = 3\n";
  const auto r = run({"--config", path, "--seed", "9", "describe", "lp:p=2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("# config.seed=9\n"), std::string::npos);
  EXPECT_NE(r.out.find("# config.L_max=3\n"), std::string::npos);
  EXPECT_NE(r.out.find("# config.format=csv\n"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Cli, OutFileAndDeterminism) {
  const auto path = temp_path("report.json");
  const std::vector<std::string> args{"--out", path, "optimal", "lpq:p=2,q=1", "--vec",
                                      "1,0.5,0.25", "--caps", "restarts=2,max_evals=80"};
  ASSERT_EQ(run(args).code, kExitOk);
  std::ifstream in(path);
  const std::string first((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(run(args).code, kExitOk);
  std::ifstream in2(path);
  const std::string second((std::istreambuf_iterator<char>(in2)), {});
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
  const auto j = Json::parse(first);
  EXPECT_EQ(j["result"]["direction"], "lower_bound_of_sup");
  std::remove(path.c_str());
}

TEST(Cli, SerialMatchesParallel) {
  const std::vector<std::string> args{"dilation", "lorentz:q=1,w=invlog", "--n", "2,8",
                                      "--m-cap", "2000"};
  auto serial = args;
  serial.insert(serial.begin(), "--serial");
  EXPECT_EQ(run(args).out, run(serial).out);
}

TEST(Cli, ParseVector) {
  EXPECT_EQ(parse_vector("1, -2.5,3e-1"), (std::vector<double>{1, -2.5, 0.3}));
  EXPECT_THROW(parse_vector(""), ParseError);
  EXPECT_THROW(parse_vector("1,,2"), ParseError);
}
