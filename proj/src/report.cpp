#include "optseq/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "optseq/space.hpp"

namespace optseq {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json to_json(const IndexEstimate& e) {
  Json caps = Json::object();
  for (const auto& [k, v] : e.caps) caps[k] = v;
  return Json{{"value", json_number(e.value)},
              {"method", to_string(e.method)},
              {"caps", caps},
              {"residual", json_number(e.residual)},
              {"unclamped", json_number(e.unclamped)}};
}

Json to_json(const IndexPair& p) { return Json{{"mu", to_json(p.mu)}, {"nu", to_json(p.nu)}}; }

Json to_json(const GroblerDodds& g) {
  return Json{{"delta", json_number(g.delta)},
              {"sigma", json_number(g.sigma)},
              {"delta_closed_form", g.delta_closed_form},
              {"sigma_closed_form", g.sigma_closed_form},
              {"note", g.note}};
}

Json to_json(const Dilation& d) {
  return Json{{"M0", json_number(d.m0)}, {"Minf", json_number(d.minf)}};
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

struct WitnessJson {
  Json operator()(const BlockConfiguration& c) const {
    Json blocks = Json::array();
    for (const Block& b : c.blocks())
      blocks.push_back(Json{{"entries", numbers(b.entries)}, {"repeat", b.repeat}});
    return Json{{"kind", "blocks"}, {"blocks", blocks}};
  }
  Json operator()(const Decomposition& d) const {
    Json parts = Json::array();
    for (std::size_t i = 0; i < d.parts.size(); ++i)
      parts.push_back(Json{{"coefficients", numbers(d.parts[i])},
                           {"value", json_number(d.part_values[i])}});
    return Json{{"kind", "decomposition"}, {"parts", parts}};
  }
};

}  // namespace

Json to_json(const BoundedEstimate& e) {
  return Json{{"value", json_number(e.reported_value())},
              {"direction", to_string(e.direction())},
              {"evaluations", e.evaluations()},
              {"witness", std::visit(WitnessJson{}, e.witness())}};
}

Json to_json(const CriterionReport& r) {
  Json trend = Json::array();
  for (const auto& t : r.trend) trend.push_back(Json{{"cap", t.cap}, {"value", json_number(t.value)}});
  Json prov = Json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  return Json{{"id", r.id},
              {"constant", r.constant ? json_number(*r.constant) : Json("diverging")},
              {"verdict", to_string(r.verdict)},
              {"trend", trend},
              {"provenance", prov}};
}

Json to_json(const Identification& id) {
  return Json{{"space", id.space.empty() ? Json(nullptr) : Json(id.space)},
              {"status", id.status},
              {"exponent", id.exponent ? json_number(*id.exponent) : Json(nullptr)},
              {"justified_by", id.justified_by}};
}

Json to_json(const Classification& c) {
  Json crit = Json::array();
  for (const auto& r : c.criteria) crit.push_back(to_json(r));
  return Json{{"space", c.space},
              {"X_U", to_json(c.upper)},
              {"X_L", to_json(c.lower)},
              {"indices", to_json(c.indices)},
              {"grobler_dodds", to_json(c.grobler_dodds)},
              {"criteria", crit},
              {"notes", c.notes},
              {"inconclusive", c.any_inconclusive()}};
}

void append_rows(Table& t, const CriterionReport& r) {
  if (t.header.empty()) t.header = {"criterion", "cap", "value", "verdict", "constant"};
  const std::string constant = r.constant ? csv_number(*r.constant) : "diverging";
  for (const auto& p : r.trend)
    t.rows.push_back(
        {r.id, std::to_string(p.cap), csv_number(p.value), to_string(r.verdict), constant});
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::ostringstream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

}  // namespace

std::string render(const Report& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    Json inputs = Json::object();
    for (const auto& [k, v] : report.inputs) inputs[k] = v;
    Json config = Json::object();
    for (const auto& [k, v] : config_entries(report.config)) config[k] = v;
    const Json doc{{"command", report.command},
                   {"inputs", inputs},
                   {"config", config},
                   {"result", report.result}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# command=" << report.command << '\n';
  for (const auto& [k, v] : report.inputs) out << "# input." << k << '=' << v << '\n';
  for (const auto& [k, v] : config_entries(report.config)) out << "# config." << k << '=' << v << '\n';
  csv_line(out, report.table.header);
  for (const auto& row : report.table.rows) csv_line(out, row);
  return out.str();
}

std::string render(const Report& report) { return render(report, report.config.format); }

}  // namespace optseq
