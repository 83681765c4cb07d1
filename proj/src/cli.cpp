#include "optseq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "optseq/acceptance.hpp"
#include "optseq/config.hpp"
#include "optseq/criteria.hpp"
#include "optseq/errors.hpp"
#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"
#include "optseq/report.hpp"
#include "optseq/seq.hpp"
#include "optseq/space.hpp"

namespace optseq {

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.remove_suffix(1);
    try {
      v.push_back(parse_number(item));
    } catch (const ParseError&) {
      throw ParseError("vector: malformed entry", std::string(item));
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  for (double x : v)
    if (!std::isfinite(x)) throw ParseError("vector: entries must be finite", format_number(x));
  return v;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("vector file: cannot open", path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const auto token = line.substr(b, e - b + 1);
    double x = 0.0;
    try {
      x = parse_number(token);
    } catch (const ParseError&) {
      throw ParseError("vector file: malformed line", token);
    }
    if (!std::isfinite(x)) throw ParseError("vector file: entries must be finite", token);
    v.push_back(x);
  }
  if (v.empty()) throw ParseError("vector file: no entries", path);
  return v;
}

namespace {

struct Options {
  std::string config_path;
  std::string caps;
  std::optional<std::uint64_t> grid;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string out_path;
  bool strict = false;
  bool serial = false;

  std::string space;
  std::string vec, vec_file, vec_b;
  std::vector<std::uint64_t> ns;
  std::uint64_t n = 0;
  std::uint64_t m_cap = 0;
  std::string estimate = "upper";
  std::vector<std::string> criteria;
  std::optional<double> p;
  std::optional<double> mu;
  bool skip_determinism = false;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

class Runner {
 public:
  explicit Runner(const Options& o) : o_(o), cfg_(load(o, OutputFormat::json)) {
    // The format counts as chosen when it does not depend on the default.
    explicit_format_ = load(o, OutputFormat::csv).format == cfg_.format;
    validate(cfg_);
    exec_ = o.serial ? Exec::serial : Exec::parallel;
  }

  // Tabular commands default to CSV unless a format was chosen.
  void prefer_csv() {
    if (!explicit_format_) cfg_.format = OutputFormat::csv;
  }

  SpaceDescriptor space() const {
    return parse_space(o_.space).with_bisection_tol(cfg_.bisection_tol);
  }

  std::vector<double> vector() const {
    if (!o_.vec.empty() && !o_.vec_file.empty())
      throw ParseError("give either --vec or --file", "--file");
    if (!o_.vec.empty()) return parse_vector(o_.vec);
    if (!o_.vec_file.empty()) return read_vector_file(o_.vec_file);
    throw ParseError("a vector is required", "--vec");
  }

  Report report(std::string command) const {
    Report r;
    r.command = std::move(command);
    r.config = cfg_;
    return r;
  }

  const RunConfig& config() const { return cfg_; }
  Exec exec() const { return exec_; }
  const Options& options() const { return o_; }

 private:
  static RunConfig load(const Options& o, OutputFormat default_format) {
    RunConfig c;
    c.format = default_format;
    if (!o.config_path.empty()) apply_config_file(c, o.config_path);
    if (!o.caps.empty()) apply_caps(c, o.caps);
    if (o.grid) c.grid = *o.grid;
    if (o.seed) c.seed = *o.seed;
    if (!o.format.empty()) apply_setting(c, "format", o.format);
    return c;
  }

  Options o_;
  RunConfig cfg_;
  bool explicit_format_ = false;
  Exec exec_ = Exec::parallel;
};

struct Outcome {
  Report report;
  int code = kExitOk;
};

Outcome cmd_describe(Runner& r) {
  const auto s = r.space();
  auto rep = r.report("describe");
  rep.inputs = {{"space", r.options().space}};
  static const char* names[] = {"lp", "lpq", "lorentz", "orlicz"};
  Json res{{"canonical", describe(s)}, {"family", names[int(s.family())]}};
  switch (s.family()) {
    case SpaceDescriptor::Family::Lp:
      res["p"] = json_number(s.p());
      break;
    case SpaceDescriptor::Family::Lpq:
      res["p"] = json_number(s.p());
      res["q"] = json_number(s.q());
      break;
    case SpaceDescriptor::Family::LorentzLambda:
      res["q"] = json_number(s.q());
      res["weights"] = describe(s.weights());
      res["degenerate"] = s.degenerate();
      break;
    case SpaceDescriptor::Family::Orlicz:
      res["function"] = describe(s.orlicz_function());
      if (s.orlicz_function().kind() == OrliczGenerator::Kind::Conjugate)
        res["conjugate_scale"] = json_number(s.orlicz_function().conjugate_scale());
      break;
  }
  try {
    res["kothe_dual"] = describe(kothe_dual(s));
  } catch (const UnsupportedOperation&) {
    res["kothe_dual"] = nullptr;
  }
  if (auto cf = closed_form_indices(s))
    res["closed_form_indices"] = Json{{"mu", json_number(cf->mu.value)}, {"nu", json_number(cf->nu.value)}};
  rep.result = res;
  rep.table.header = {"key", "value"};
  for (const auto& [k, v] : res.items())
    rep.table.rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
  return {rep};
}

Outcome cmd_norm(Runner& r) {
  const auto s = r.space();
  const auto v = r.vector();
  auto rep = r.report("norm");
  rep.inputs = {{"space", describe(s)}, {"vector", join(v)}};
  const double value = norm(s, v);
  rep.result = Json{{"value", json_number(value)}};
  rep.table = {{"space", "value"}, {{describe(s), csv_number(value)}}};
  return {rep};
}

Outcome cmd_rearrange(Runner& r) {
  const auto v = r.vector();
  auto rep = r.report("rearrange");
  rep.inputs = {{"vector", join(v)}};
  const auto re = rearrange(v);
  rep.result = Json{{"entries", numbers(re.entries())}};
  rep.table.header = {"k", "value"};
  for (std::size_t i = 0; i < re.size(); ++i)
    rep.table.rows.push_back({std::to_string(i + 1), csv_number(re[i])});
  return {rep};
}

Outcome cmd_tensor(Runner& r) {
  const FiniteSeq a(r.vector());
  if (r.options().vec_b.empty()) throw ParseError("tensor needs a second vector", "--with");
  const FiniteSeq b(parse_vector(r.options().vec_b));
  auto rep = r.report("tensor");
  rep.inputs = {{"a", join({a.entries().begin(), a.entries().end()})},
                {"b", join({b.entries().begin(), b.entries().end()})}};
  const auto t = tensor(a, b);
  const auto sorted = rearrange(t);
  Json res{{"entries", numbers(t.entries())}, {"rearranged", numbers(sorted.entries())}};
  rep.table.header = {"k", "value", "rearranged"};
  for (std::size_t i = 0; i < t.size(); ++i)
    rep.table.rows.push_back({std::to_string(i + 1), csv_number(t[i]), csv_number(sorted[i])});
  if (!r.options().space.empty()) {
    const auto s = r.space();
    rep.inputs.push_back({"space", describe(s)});
    const double na = norm(s, a), nb = norm(s, b), nt = norm(s, t);
    res["norms"] = Json{{"a", json_number(na)}, {"b", json_number(nb)}, {"tensor", json_number(nt)},
                        {"ratio", json_number(nt / (na * nb))}};
  }
  rep.result = res;
  return {rep};
}

std::vector<std::uint64_t> n_list(const Runner& r) {
  auto ns = r.options().ns;
  if (ns.empty()) {
    const std::uint64_t top = r.options().n ? r.options().n : 1024;
    for (std::uint64_t n = 1; n <= top && n != 0; n <<= 1) ns.push_back(n);
  }
  for (auto n : ns)
    if (n == 0) throw ParseError("n must be >= 1", "0");
  return ns;
}

Outcome cmd_phi(Runner& r) {
  r.prefer_csv();
  const auto s = r.space();
  const auto ns = n_list(r);
  auto rep = r.report("phi");
  rep.inputs = {{"space", describe(s)}};
  Json rows = Json::array();
  rep.table.header = {"n", "phi"};
  for (auto n : ns) {
    const double v = fundamental_function(s, n);
    rows.push_back(Json{{"n", n}, {"phi", json_number(v)}});
    rep.table.rows.push_back({std::to_string(n), csv_number(v)});
  }
  rep.result = Json{{"rows", rows}};
  return {rep};
}

Outcome cmd_dilation(Runner& r) {
  r.prefer_csv();
  const auto s = r.space();
  const auto ns = n_list(r);
  const std::uint64_t m_cap = r.options().m_cap ? r.options().m_cap : r.config().m_cap;
  auto rep = r.report("dilation");
  rep.inputs = {{"space", describe(s)}, {"m_cap", std::to_string(m_cap)}};
  DilationOptions opts;
  opts.exec = r.exec();
  Json rows = Json::array();
  rep.table.header = {"n", "M0", "Minf"};
  for (auto n : ns) {
    const auto d = dilation_functions(s, n, m_cap, opts);
    rows.push_back(Json{{"n", n}, {"M0", json_number(d.m0)}, {"Minf", json_number(d.minf)}});
    rep.table.rows.push_back({std::to_string(n), csv_number(d.m0), csv_number(d.minf)});
  }
  rep.result = Json{{"rows", rows}};
  return {rep};
}

Outcome cmd_indices(Runner& r) {
  r.prefer_csv();
  const auto s = r.space();
  auto rep = r.report("indices");
  rep.inputs = {{"space", describe(s)}};
  const auto ix = s.family() == SpaceDescriptor::Family::Orlicz
                      ? orlicz_indices(s.orlicz_function(), orlicz_index_options(r.config(), r.exec()))
                      : fundamental_indices(s, index_options(r.config(), r.exec()));
  const auto gd = grobler_dodds(s, index_options(r.config(), r.exec()),
                                orlicz_index_options(r.config(), r.exec()));
  rep.result = Json{{"indices", to_json(ix)}, {"grobler_dodds", to_json(gd)}};
  const auto text = describe(s);
  const auto colon = text.find(':');
  rep.table.header = {"family", "parameters", "mu", "nu", "delta", "sigma", "method", "residual"};
  rep.table.rows.push_back({text.substr(0, colon), text.substr(colon + 1),
                            csv_number(ix.mu.value), csv_number(ix.nu.value),
                            csv_number(gd.delta), csv_number(gd.sigma), to_string(ix.mu.method),
                            csv_number(std::max(ix.mu.residual, ix.nu.residual))});
  return {rep};
}

Outcome cmd_optimal(Runner& r) {
  const auto s = r.space();
  const auto search = search_config(r.config(), r.exec());
  auto rep = r.report("optimal");
  const auto& o = r.options();
  if (o.vec.empty() && o.vec_file.empty()) {
    const auto ns = n_list(r);
    rep.inputs = {{"space", describe(s)}, {"vector", "ones"}};
    const auto rows = optimal_fundamental(s, ns, search);
    Json arr = Json::array();
    rep.table.header = {"n", "phi_upper", "phi_n", "evaluations"};
    for (const auto& row : rows) {
      arr.push_back(Json{{"n", row.n},
                         {"phi_upper", json_number(row.phi_upper)},
                         {"phi_n", json_number(row.phi_n)},
                         {"evaluations", row.evaluations}});
      rep.table.rows.push_back({std::to_string(row.n), csv_number(row.phi_upper),
                                csv_number(row.phi_n), std::to_string(row.evaluations)});
    }
    rep.result = Json{{"rows", arr}};
    return {rep};
  }
  auto v = r.vector();
  if (o.n) {
    if (o.n < v.size()) throw ParseError("--n is shorter than the vector", std::to_string(o.n));
    v.resize(o.n, 0.0);
  }
  const FiniteSeq a(v);
  rep.inputs = {{"space", describe(s)}, {"vector", join(v)}, {"estimate", o.estimate}};
  std::optional<BoundedEstimate> e;
  if (o.estimate == "upper")
    e = upper_norm_estimate(s, a, search);
  else if (o.estimate == "phi")
    e = phi_n_estimate(s, a, search);
  else if (o.estimate == "lower")
    e = lower_norm_estimate(s, a, search);
  else
    throw ParseError("--estimate must be upper, phi or lower", o.estimate);
  rep.result = to_json(*e);
  rep.table = {{"estimate", "value", "direction", "evaluations"},
               {{o.estimate, csv_number(e->reported_value()), to_string(e->direction()),
                 std::to_string(e->evaluations())}}};
  return {rep};
}

std::vector<std::string> default_criteria(const SpaceDescriptor& s) {
  switch (s.family()) {
    case SpaceDescriptor::Family::Lp:
    case SpaceDescriptor::Family::Lpq:
      return {"equal_norm_upper", "equal_norm_lower", "tensor_upper", "tensor_lower",
              "holder_pairing"};
    case SpaceDescriptor::Family::LorentzLambda:
      return {"lorentz_assump", "lorentz_did", "tensor_upper", "tensor_lower"};
    case SpaceDescriptor::Family::Orlicz:
      return {"orlicz_submultiplicative", "orlicz_supermultiplicative", "orlicz_upper_estimate",
              "orlicz_lower_estimate", "tensor_upper", "tensor_lower"};
  }
  return {};
}

CriterionReport run_criterion(const std::string& id, const SpaceDescriptor& s,
                              const std::optional<double>& p_opt,
                              const std::optional<double>& mu_opt, const CriteriaConfig& cfg) {
  auto need_family = [&](SpaceDescriptor::Family f) {
    if (s.family() != f)
      throw UnsupportedOperation("criterion " + id + " does not apply to " + describe(s));
  };
  auto indices = [&] { return working_indices(s, cfg); };
  auto default_p = [&](bool upper) {
    if (p_opt) return *p_opt;
    switch (s.family()) {
      case SpaceDescriptor::Family::Lp:
        return s.p();
      case SpaceDescriptor::Family::Lpq:
        return upper ? std::min(s.p(), s.q()) : std::max(s.p(), s.q());
      default: {
        const auto ix = indices();
        const double v = upper ? ix.nu.value : ix.mu.value;
        return v > 0.0 ? 1.0 / v : INFINITY;
      }
    }
  };
  if (id == "equal_norm_upper") return equal_norm_upper_constant(s, default_p(true), cfg);
  if (id == "equal_norm_lower") return equal_norm_lower_constant(s, default_p(false), cfg);
  if (id == "tensor_upper") return tensor_inequality_check(s, EstimateDirection::upper, cfg);
  if (id == "tensor_lower") return tensor_inequality_check(s, EstimateDirection::lower, cfg);
  if (id == "holder_pairing") return holder_pairing_check(s, cfg);
  if (id == "lorentz_did") {
    need_family(SpaceDescriptor::Family::LorentzLambda);
    return lorentz_did_ratio(s.weights(), cfg);
  }
  if (id == "lorentz_assump") {
    need_family(SpaceDescriptor::Family::LorentzLambda);
    const double mu = mu_opt ? *mu_opt : indices().mu.value;
    return lorentz_assump_constant(s.q(), s.weights(), mu, cfg);
  }
  if (id == "orlicz_submultiplicative") {
    need_family(SpaceDescriptor::Family::Orlicz);
    return orlicz_submultiplicative_constant(s.orlicz_function(), cfg);
  }
  if (id == "orlicz_supermultiplicative") {
    need_family(SpaceDescriptor::Family::Orlicz);
    return orlicz_supermultiplicative_constant(s.orlicz_function(), cfg);
  }
  if (id == "orlicz_upper_estimate") {
    need_family(SpaceDescriptor::Family::Orlicz);
    return orlicz_estimate_constant(s.orlicz_function(), default_p(true), EstimateDirection::upper, cfg);
  }
  if (id == "orlicz_lower_estimate") {
    need_family(SpaceDescriptor::Family::Orlicz);
    return orlicz_estimate_constant(s.orlicz_function(), default_p(false), EstimateDirection::lower, cfg);
  }
  throw ParseError("unknown criterion", id);
}

Outcome cmd_criteria(Runner& r) {
  const auto s = r.space();
  const auto cfg = criteria_config(r.config(), r.exec());
  const auto& o = r.options();
  std::vector<std::string> ids;
  for (const auto& c : o.criteria) {
    std::string_view rest = c;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      if (auto item = rest.substr(0, comma); !item.empty()) ids.emplace_back(item);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  if (ids.empty()) ids = default_criteria(s);
  auto rep = r.report("criteria");
  std::string list;
  for (const auto& id : ids) list += (list.empty() ? "" : ",") + id;
  rep.inputs = {{"space", describe(s)}, {"criteria", list}};
  if (o.p) rep.inputs.push_back({"p", format_number(*o.p)});
  if (o.mu) rep.inputs.push_back({"mu", format_number(*o.mu)});
  Json arr = Json::array();
  bool inconclusive = false;
  for (const auto& id : ids) {
    const auto c = run_criterion(id, s, o.p, o.mu, cfg);
    inconclusive = inconclusive || c.verdict == Verdict::inconclusive;
    arr.push_back(to_json(c));
    append_rows(rep.table, c);
  }
  rep.result = Json{{"criteria", arr}, {"all_conclusive", !inconclusive}};
  return {rep, inconclusive ? kExitInconclusive : kExitOk};
}

Outcome cmd_classify(Runner& r) {
  const auto s = r.space();
  const auto c = classify_optimal_spaces(s, criteria_config(r.config(), r.exec()));
  auto rep = r.report("classify");
  rep.inputs = {{"space", describe(s)}};
  rep.result = to_json(c);
  rep.table.header = {"side", "space", "status", "exponent", "justified_by"};
  auto row = [&](const char* side, const Identification& id) {
    std::string just;
    for (const auto& j : id.justified_by) just += (just.empty() ? "" : ";") + j;
    rep.table.rows.push_back({side, id.space, id.status, id.exponent ? csv_number(*id.exponent) : "",
                              just});
  };
  row("X_U", c.upper);
  row("X_L", c.lower);
  const bool bad = c.any_inconclusive() && r.options().strict;
  return {rep, bad ? kExitInconclusive : kExitOk};
}

Outcome cmd_verify(Runner& r) {
  const auto acc = run_acceptance(r.config(), r.exec(), !r.options().skip_determinism);
  auto rep = r.report("verify");
  rep.result = to_json(acc);
  rep.table.header = {"id", "name", "pass", "detail"};
  for (const auto& l : acc.lines)
    rep.table.rows.push_back({std::to_string(l.id), l.name, l.pass ? "true" : "false", l.detail});
  return {rep, acc.all_pass() ? kExitOk : kExitFailure};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Optimal upper and lower sequence spaces: norms, indices, criteria", "optseq"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "key = value configuration file");
  app.add_option("--caps", o.caps, "comma-separated key=value overrides");
  app.add_option("--grid", o.grid, "Orlicz criteria grid size");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--format", o.format, "json or csv");
  app.add_option("--out", o.out_path, "write the report to this file");
  app.add_flag("--strict", o.strict, "exit 4 when any verdict is inconclusive");
  app.add_flag("--serial", o.serial, "run kernels without OpenMP (same output)");

  auto space_arg = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("space", o.space, "space descriptor, e.g. lpq:p=2,q=1");
    if (required) opt->required();
  };
  auto vec_args = [&](CLI::App* sub) {
    sub->add_option("--vec", o.vec, "comma-separated entries");
    sub->add_option("--file", o.vec_file, "file with one entry per line");
  };

  auto* describe_cmd = app.add_subcommand("describe", "canonical form and basic data of a space");
  space_arg(describe_cmd);
  auto* norm_cmd = app.add_subcommand("norm", "norm of a finite vector");
  space_arg(norm_cmd);
  vec_args(norm_cmd);
  auto* rearrange_cmd = app.add_subcommand("rearrange", "decreasing rearrangement");
  vec_args(rearrange_cmd);
  auto* tensor_cmd = app.add_subcommand("tensor", "tensor product a (x) b");
  vec_args(tensor_cmd);
  tensor_cmd->add_option("--with", o.vec_b, "second factor, comma-separated")->required();
  tensor_cmd->add_option("--space", o.space, "also report norms in this space");
  auto* phi_cmd = app.add_subcommand("phi", "fundamental function");
  space_arg(phi_cmd);
  phi_cmd->add_option("--n", o.ns, "values of n (default powers of two up to --n-max)")->delimiter(',');
  phi_cmd->add_option("--n-max", o.n, "largest power of two");
  auto* dil_cmd = app.add_subcommand("dilation", "dilation functions M0 and Minf");
  space_arg(dil_cmd);
  dil_cmd->add_option("--n", o.ns, "dilation factors")->delimiter(',');
  dil_cmd->add_option("--m-cap", o.m_cap, "largest m in the supremum");
  auto* idx_cmd = app.add_subcommand("indices", "fundamental indices and Grobler-Dodds indices");
  space_arg(idx_cmd);
  auto* opt_cmd = app.add_subcommand("optimal", "optimal upper/lower norm estimates");
  space_arg(opt_cmd);
  vec_args(opt_cmd);
  opt_cmd->add_option("--n", o.n, "pad the vector to length n, or use 1^n without a vector");
  opt_cmd->add_option("--estimate", o.estimate, "upper, phi or lower");
  auto* crit_cmd = app.add_subcommand("criteria", "criterion reports");
  space_arg(crit_cmd);
  crit_cmd->add_option("--criterion", o.criteria, "criterion ids (default: all for the family)")->delimiter(',');
  crit_cmd->add_option("--p", o.p, "exponent for equal-norm and Orlicz estimate criteria");
  crit_cmd->add_option("--mu", o.mu, "index for lorentz_assump (default estimated)");
  auto* cls_cmd = app.add_subcommand("classify", "identify the optimal spaces X_U and X_L");
  space_arg(cls_cmd);
  auto* ver_cmd = app.add_subcommand("verify", "run the acceptance suite");
  ver_cmd->add_flag("--skip-determinism", o.skip_determinism, "run the checks once");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    bool any_sub = false;
    for (const auto* sub : app.get_subcommands({})) any_sub = any_sub || sub->parsed();
    if (!any_sub) {
      static const std::set<std::string> takes_value{"--config", "--caps", "--grid",
                                                     "--seed",   "--format", "--out"};
      for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (takes_value.count(a)) {
          ++i;
          continue;
        }
        if (!a.empty() && a[0] != '-' && !app.get_subcommand_no_throw(a)) {
          err << "error: unknown subcommand '" << a << "'\n";
          return kExitParse;
        }
      }
    }
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    Runner runner(o);
    Outcome result;
    if (describe_cmd->parsed())
      result = cmd_describe(runner);
    else if (norm_cmd->parsed())
      result = cmd_norm(runner);
    else if (rearrange_cmd->parsed())
      result = cmd_rearrange(runner);
    else if (tensor_cmd->parsed())
      result = cmd_tensor(runner);
    else if (phi_cmd->parsed())
      result = cmd_phi(runner);
    else if (dil_cmd->parsed())
      result = cmd_dilation(runner);
    else if (idx_cmd->parsed())
      result = cmd_indices(runner);
    else if (opt_cmd->parsed())
      result = cmd_optimal(runner);
    else if (crit_cmd->parsed())
      result = cmd_criteria(runner);
    else if (cls_cmd->parsed())
      result = cmd_classify(runner);
    else
      result = cmd_verify(runner);

    const std::string text = render(result.report);
    if (o.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out_path, std::ios::binary);
      if (!f) throw ParseError("cannot write output file", o.out_path);
      f << text;
    }
    return result.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what();
    if (std::string(e.what()).find("'" + e.token() + "'") == std::string::npos)
      err << " at '" << e.token() << "'";
    err << "\n";
    return kExitParse;
  } catch (const ResourceLimitError& e) {
    err << "error: resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const UnsupportedOperation& e) {
    err << "error: unsupported: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid argument: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace optseq
