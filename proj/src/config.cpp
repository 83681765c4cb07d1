#include "optseq/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "optseq/errors.hpp"
#include "optseq/space.hpp"

namespace optseq {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_count(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end)
    throw ParseError("config: " + std::string(key) + " expects a nonnegative integer",
                     std::string(v));
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  try {
    return parse_number(v);
  } catch (const ParseError&) {
    throw ParseError("config: " + std::string(key) + " expects a number", std::string(v));
  }
}

using Setter = void (*)(RunConfig&, std::string_view, std::string_view);

#define OPTSEQ_COUNT(name) \
  {#name, [](RunConfig& c, std::string_view k, std::string_view v) { c.name = parse_count(k, v); }}
#define OPTSEQ_REAL(name) \
  {#name, [](RunConfig& c, std::string_view k, std::string_view v) { c.name = parse_real(k, v); }}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      OPTSEQ_COUNT(n_cap),
      OPTSEQ_COUNT(m_cap),
      OPTSEQ_COUNT(l_cap),
      OPTSEQ_COUNT(L_max),
      OPTSEQ_COUNT(K_max),
      OPTSEQ_COUNT(grid),
      OPTSEQ_COUNT(index_grid),
      OPTSEQ_COUNT(enumeration_cap),
      OPTSEQ_COUNT(restarts),
      OPTSEQ_COUNT(max_evals),
      OPTSEQ_COUNT(equal_norm_n_cap),
      OPTSEQ_COUNT(did_n_cap),
      OPTSEQ_COUNT(assump_n_cap),
      OPTSEQ_COUNT(tensor_samples),
      OPTSEQ_COUNT(holder_samples),
      OPTSEQ_REAL(bisection_tol),
      OPTSEQ_REAL(optimizer_tol),
      OPTSEQ_REAL(verdict_tol),
      OPTSEQ_REAL(growth),
      OPTSEQ_COUNT(seed),
      {"format",
       [](RunConfig& c, std::string_view, std::string_view v) {
         if (v == "json")
           c.format = OutputFormat::json;
         else if (v == "csv")
           c.format = OutputFormat::csv;
         else
           throw ParseError("config: format must be json or csv", std::string(v));
       }},
  };
  return table;
}

#undef OPTSEQ_COUNT
#undef OPTSEQ_REAL

void require(bool ok, const char* key, const std::string& value) {
  if (!ok) throw ParseError(std::string("config: ") + key + " out of range", value);
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

void validate(const RunConfig& c) {
  const std::pair<const char*, std::uint64_t> caps[] = {
      {"n_cap", c.n_cap},
      {"m_cap", c.m_cap},
      {"l_cap", c.l_cap},
      {"L_max", c.L_max},
      {"K_max", c.K_max},
      {"grid", c.grid},
      {"index_grid", c.index_grid},
      {"enumeration_cap", c.enumeration_cap},
      {"restarts", c.restarts},
      {"max_evals", c.max_evals},
      {"equal_norm_n_cap", c.equal_norm_n_cap},
      {"did_n_cap", c.did_n_cap},
      {"assump_n_cap", c.assump_n_cap},
      {"tensor_samples", c.tensor_samples},
      {"holder_samples", c.holder_samples}};
  for (const auto& [key, v] : caps) require(v >= 1, key, std::to_string(v));
  require(c.n_cap >= 2 && c.n_cap <= 60, "n_cap", std::to_string(c.n_cap));
  require(c.m_cap >= 2, "m_cap", std::to_string(c.m_cap));
  require(c.l_cap <= 960, "l_cap", std::to_string(c.l_cap));
  require(c.grid >= 100, "grid", std::to_string(c.grid));
  require(c.index_grid >= 10, "index_grid", std::to_string(c.index_grid));
  const std::pair<const char*, double> tols[] = {{"bisection_tol", c.bisection_tol},
                                                 {"optimizer_tol", c.optimizer_tol},
                                                 {"verdict_tol", c.verdict_tol}};
  for (const auto& [key, v] : tols) require(v > 0.0 && v < 1.0, key, format_number(v));
  require(c.growth > 1.0 && std::isfinite(c.growth), "growth", format_number(c.growth));
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  const auto it = setters().find(key);
  if (it == setters().end()) throw ParseError("config: unknown key", std::string(key));
  it->second(cfg, key, value);
}

void apply_caps(RunConfig& cfg, std::string_view list) {
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = trim(list.substr(0, comma));
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("caps: expected key=value", std::string(item));
    apply_setting(cfg, item.substr(0, eq), item.substr(eq + 1));
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value",
                       std::string(line));
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  auto u = [](std::uint64_t v) { return std::to_string(v); };
  return {{"n_cap", u(c.n_cap)},
          {"m_cap", u(c.m_cap)},
          {"l_cap", u(c.l_cap)},
          {"L_max", u(c.L_max)},
          {"K_max", u(c.K_max)},
          {"grid", u(c.grid)},
          {"index_grid", u(c.index_grid)},
          {"enumeration_cap", u(c.enumeration_cap)},
          {"restarts", u(c.restarts)},
          {"max_evals", u(c.max_evals)},
          {"equal_norm_n_cap", u(c.equal_norm_n_cap)},
          {"did_n_cap", u(c.did_n_cap)},
          {"assump_n_cap", u(c.assump_n_cap)},
          {"tensor_samples", u(c.tensor_samples)},
          {"holder_samples", u(c.holder_samples)},
          {"bisection_tol", format_number(c.bisection_tol)},
          {"optimizer_tol", format_number(c.optimizer_tol)},
          {"verdict_tol", format_number(c.verdict_tol)},
          {"growth", format_number(c.growth)},
          {"seed", u(c.seed)},
          {"format", to_string(c.format)}};
}

SearchConfig search_config(const RunConfig& c, Exec exec) {
  SearchConfig s;
  s.L_max = c.L_max;
  s.K_max = c.K_max;
  s.restarts = c.restarts;
  s.max_evals = c.max_evals;
  s.tol = c.optimizer_tol;
  s.enumeration_cap = c.enumeration_cap;
  s.seed = c.seed;
  s.exec = exec;
  return s;
}

IndexOptions index_options(const RunConfig& c, Exec exec) {
  IndexOptions o;
  o.n_cap = unsigned(c.n_cap);
  o.m_cap = c.m_cap;
  o.exec = exec;
  return o;
}

OrliczIndexOptions orlicz_index_options(const RunConfig& c, Exec exec) {
  OrliczIndexOptions o;
  o.grid = unsigned(c.index_grid);
  o.exec = exec;
  return o;
}

CriteriaConfig criteria_config(const RunConfig& c, Exec exec) {
  CriteriaConfig k;
  k.rules.agreement = c.verdict_tol;
  k.rules.growth = c.growth;
  k.equal_norm_n_cap = c.equal_norm_n_cap;
  k.did_n_cap = c.did_n_cap;
  k.assump_n_cap = c.assump_n_cap;
  k.assump_l_cap_log2 = unsigned(c.l_cap);
  k.orlicz_grid = unsigned(c.grid);
  k.tensor_samples = c.tensor_samples;
  k.holder_samples = c.holder_samples;
  k.search = search_config(c, exec);
  k.indices = index_options(c, exec);
  k.orlicz_indices = orlicz_index_options(c, exec);
  k.seed = c.seed;
  k.exec = exec;
  return k;
}

}  // namespace optseq
