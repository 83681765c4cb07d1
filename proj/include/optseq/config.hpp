#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optseq/criteria.hpp"
#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"

namespace optseq {

enum class OutputFormat { json, csv };

// Every knob that can change a report.  Defaults reproduce the module
// defaults; a report embeds the full config it was produced with.
struct RunConfig {
  // caps
  std::uint64_t n_cap = 14;  // log2 of the largest n in the index regression
  std::uint64_t m_cap = 4096;
  std::uint64_t l_cap = 64;  // log2 of the largest dilation l in the assump check
  std::uint64_t L_max = 6;
  std::uint64_t K_max = 2;
  std::uint64_t grid = 200;  // Orlicz criteria grid
  std::uint64_t index_grid = 1000;
  std::uint64_t enumeration_cap = 4096;
  std::uint64_t restarts = 8;
  std::uint64_t max_evals = 500;
  std::uint64_t equal_norm_n_cap = std::uint64_t{1} << 24;
  std::uint64_t did_n_cap = 100000;
  std::uint64_t assump_n_cap = 1024;
  std::uint64_t tensor_samples = 256;
  std::uint64_t holder_samples = 1000;
  // tolerances
  double bisection_tol = 1e-12;
  double optimizer_tol = 1e-7;
  double verdict_tol = 0.05;
  double growth = 10.0;

  std::uint64_t seed = 20240531;
  OutputFormat format = OutputFormat::json;
};

// Throws ParseError naming the key whose value is out of range.
void validate(const RunConfig& cfg);

// Sets one key; throws ParseError on unknown keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
// "k=v,k=v" as given to --caps.
void apply_caps(RunConfig& cfg, std::string_view list);
// One `key = value` per line, `#` starts a comment.
void apply_config_text(RunConfig& cfg, std::string_view text);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Keys and canonical values in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

std::string to_string(OutputFormat f);

SearchConfig search_config(const RunConfig& cfg, Exec exec = Exec::parallel);
IndexOptions index_options(const RunConfig& cfg, Exec exec = Exec::parallel);
OrliczIndexOptions orlicz_index_options(const RunConfig& cfg, Exec exec = Exec::parallel);
CriteriaConfig criteria_config(const RunConfig& cfg, Exec exec = Exec::parallel);

}  // namespace optseq
