#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optseq/config.hpp"
#include "optseq/criteria.hpp"
#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"

namespace optseq {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// What a subcommand emits.  `result` feeds the JSON form and `table` the CSV
// form; both carry the config that produced them.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  RunConfig config;
  Json result = Json::object();
  Table table;
};

std::string render(const Report& report, OutputFormat format);
std::string render(const Report& report);  // report.config.format

// Shortest round-trip form for JSON-facing strings, 17 significant digits for
// CSV.  Non-finite values print as inf, -inf, nan.
std::string csv_number(double x);
Json json_number(double x);

Json to_json(const IndexEstimate& e);
Json to_json(const IndexPair& p);
Json to_json(const GroblerDodds& g);
Json to_json(const Dilation& d);
Json to_json(const BoundedEstimate& e);
Json to_json(const CriterionReport& r);
Json to_json(const Identification& id);
Json to_json(const Classification& c);

void append_rows(Table& t, const CriterionReport& r);

}  // namespace optseq
