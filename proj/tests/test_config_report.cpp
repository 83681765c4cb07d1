#include <cmath>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "optseq/config.hpp"
#include "optseq/errors.hpp"
#include "optseq/report.hpp"

using namespace optseq;

TEST(Config, Defaults) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  const auto e = config_entries(c);
  EXPECT_EQ(e.front().first, "n_cap");
  EXPECT_EQ(e.back(), (std::pair<std::string, std::string>{"format", "json"}));
  const auto s = search_config(c);
  EXPECT_EQ(s.L_max, 6u);
  EXPECT_EQ(s.restarts, 8u);
  EXPECT_EQ(s.max_evals, 500u);
  EXPECT_EQ(s.tol, 1e-7);
}

TEST(Config, TextAndCaps) {
  RunConfig c;
  apply_config_text(c, "# comment\n n_cap = 10 \n\nseed=7  # trailing\nformat = csv\n");
  EXPECT_EQ(c.n_cap, 10u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.format, OutputFormat::csv);
  apply_caps(c, "L_max=3,grid=400");
  EXPECT_EQ(c.L_max, 3u);
  EXPECT_EQ(c.grid, 400u);
  EXPECT_EQ(criteria_config(c).orlicz_grid, 400u);
}

TEST(Config, Errors) {
  RunConfig c;
  auto token = [&](const char* key, const char* value) {
    try {
      apply_setting(c, key, value);
      validate(c);
    } catch (const ParseError& e) {
      return e.token();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(token("bogus", "1"), "bogus");
  EXPECT_EQ(token("n_cap", "x"), "x");
  EXPECT_EQ(token("n_cap", "-3"), "-3");
  EXPECT_EQ(token("format", "xml"), "xml");
  c = RunConfig{};
  EXPECT_NE(token("verdict_tol", "1.5"), "<no error>");
  c = RunConfig{};
  EXPECT_NE(token("L_max", "0"), "<no error>");
  EXPECT_THROW(apply_config_text(c, "n_cap 3\n"), ParseError);
  EXPECT_THROW(apply_config_file(c, "/nonexistent/optseq.cfg"), ParseError);
}

TEST(Config, RoundTripThroughEntries) {
  RunConfig c;
  c.bisection_tol = 3e-11;
  c.seed = 99;
  std::string text;
  for (const auto& [k, v] : config_entries(c)) text += k + " = " + v + "\n";
  RunConfig d;
  apply_config_text(d, text);
  EXPECT_EQ(config_entries(c), config_entries(d));
}

TEST(Report, Numbers) {
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(INFINITY), "inf");
  EXPECT_EQ(json_number(-INFINITY), "-inf");
  EXPECT_EQ(json_number(NAN), "nan");
  EXPECT_EQ(json_number(0.25), 0.25);
}

TEST(Report, JsonLayout) {
  Report r;
  r.command = "norm";
  r.inputs = {{"space", "lp:p=2"}};
  r.result["value"] = 5.0;
  const auto j = Json::parse(render(r, OutputFormat::json));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "inputs", "config", "result"}));
  EXPECT_EQ(j["config"]["seed"], "20240531");
  EXPECT_EQ(j["result"]["value"], 5.0);
}

TEST(Report, CsvLayout) {
  Report r;
  r.command = "phi";
  r.inputs = {{"space", "lpq:p=2,q=1"}};
  r.table.header = {"n", "phi"};
  r.table.rows = {{"1", "1"}, {"2", csv_number(std::sqrt(2.0))}};
  const auto text = render(r, OutputFormat::csv);
  EXPECT_EQ(text.rfind("# command=phi\n# input.space=lpq:p=2,q=1\n# config.n_cap=14\n", 0), 0u);
  EXPECT_NE(text.find("\nn,phi\n1,1\n2,1.4142135623730951\n"), std::string::npos);
}
