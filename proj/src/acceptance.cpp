#include "optseq/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "optseq/criteria.hpp"
#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"
#include "optseq/seq.hpp"
#include "optseq/space.hpp"

namespace optseq {

namespace {

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt),
                    std::uint32_t(salt >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t max_len, bool signed_entries) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> u(signed_entries ? -1.0 : 0.0, 1.0);
  std::vector<double> v(len(rng));
  for (auto& x : v) x = u(rng);
  if (max_abs(v) == 0.0) v[0] = 1.0;
  return v;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

const char* const kSweepSpaces[] = {
    "lp:p=1",
    "lp:p=2",
    "lp:p=inf",
    "lpq:p=2,q=1",
    "lpq:p=2,q=3",
    "lpq:p=3,q=inf",
    "lorentz:q=2,w=power(0.5)",
    "lorentz:q=1,w=invlog",
    "lorentz:q=2,w=const",
    "orlicz:power(p=3)",
    "orlicz:powerlog(p=2,a=1)",
    "orlicz:powerlog(p=2,a=-1)",
    "orlicz:conjugate(power(p=3))",
};

}  // namespace

bool AcceptanceReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const AcceptanceLine& l) { return l.pass; });
}

SearchConfig sweep_search_config(const RunConfig& cfg, Exec exec) {
  SearchConfig s;
  s.restarts = 2;
  s.max_evals = 100;
  s.refine_top = 2;
  s.enumeration_cap = 256;
  s.partition_n_max = 6;
  s.seed = cfg.seed;
  s.exec = exec;
  return s;
}

AcceptanceLine check_lp_exactness(const RunConfig& cfg, Exec exec) {
  auto search = sweep_search_config(cfg, exec);
  search.lp_shortcut = false;
  double worst = 0.0;
  std::string worst_at;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto space = SpaceDescriptor::lp(p);
    auto rng = stream(cfg.seed, 100 + std::uint64_t(p * 10));
    for (int i = 0; i < 50; ++i) {
      const FiniteSeq a(random_vector(rng, 16, true));
      const double exact = norm(space, a);
      const double errs[] = {
          rel_err(upper_norm_estimate(space, a, search).lower_bound_of_sup(), exact),
          rel_err(phi_n_estimate(space, a, search).upper_bound_of_inf(), exact),
          rel_err(lower_norm_estimate(space, a, search).upper_bound_of_inf(), exact)};
      const double e = *std::max_element(std::begin(errs), std::end(errs));
      if (e > worst) {
        worst = e;
        worst_at = "p=" + g(p) + " n=" + std::to_string(a.size());
      }
    }
  }
  return {1, "lp_exactness", worst <= 1e-6,
          "max relative deviation " + g(worst) + (worst_at.empty() ? "" : " at " + worst_at) +
              " (tolerance 1e-6, 4 x 50 vectors)"};
}

AcceptanceLine check_embedding_chain(const RunConfig& cfg, Exec exec) {
  const auto search = sweep_search_config(cfg, exec);
  std::size_t violations = 0, total = 0;
  std::string first;
  double min_slack = INFINITY;
  for (std::size_t s = 0; s < std::size(kSweepSpaces); ++s) {
    const auto space = parse_space(kSweepSpaces[s]);
    auto rng = stream(cfg.seed, 200 + s);
    for (int i = 0; i < 200; ++i) {
      const FiniteSeq a(random_vector(rng, 6, true));
      const double inf_norm = max_abs(a.entries()), l1 = sum_abs(a.entries());
      const double up = upper_norm_estimate(space, a, search).lower_bound_of_sup();
      const double phi = phi_n_estimate(space, a, search).upper_bound_of_inf();
      const double low = lower_norm_estimate(space, a, search).upper_bound_of_inf();
      const double slacks[] = {low - (inf_norm - 1e-9), phi - low, std::min(up, l1 + 1e-9) - phi};
      const double slack = *std::min_element(std::begin(slacks), std::end(slacks));
      min_slack = std::min(min_slack, slack);
      ++total;
      if (slack < 0.0) {
        if (!violations) first = std::string(kSweepSpaces[s]) + " vector " + std::to_string(i);
        ++violations;
      }
    }
  }
  return {2, "embedding_chain", violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(total) +
              " cases, min slack " + g(min_slack) + (first.empty() ? "" : ", first at " + first)};
}

AcceptanceLine check_oracle_equivalence(const RunConfig& cfg, Exec exec) {
  SearchConfig search;
  search.L_max = 2;
  search.seed = cfg.seed;
  search.exec = exec;
  const std::vector<FiniteSeq> cases{{1.0},           {1.0, 1.0},      {1.0, 0.5},
                                     {1.0, 1.0, 1.0}, {1.0, 0.5, 0.2}, {3.0, 1.0, 1.0},
                                     {0.7, -0.7, 0.1}};
  double worst = 0.0;
  std::string worst_at;
  std::size_t count = 0;
  for (const char* text : kSweepSpaces) {
    const auto space = parse_space(text);
    for (const auto& a : cases) {
      const auto [omax, omin] = brute_force_oracle(space, a);
      const double up = upper_norm_estimate(space, a, search).lower_bound_of_sup();
      const double phi = phi_n_estimate(space, a, search).upper_bound_of_inf();
      const double e = std::max(rel_err(up, omax), rel_err(phi, omin));
      ++count;
      if (e > worst) {
        worst = e;
        worst_at = std::string(text) + " n=" + std::to_string(a.size());
      }
    }
  }
  return {3, "oracle_equivalence", worst <= 0.02,
          "max relative gap " + g(worst) + " over " + std::to_string(count) + " cases" +
              (worst_at.empty() ? "" : " (at " + worst_at + ")") + ", tolerance 0.02"};
}

AcceptanceLine check_index_recovery(const RunConfig& cfg, Exec exec) {
  struct Case {
    std::string space;
    double expected;
    double tol;
  };
  std::vector<Case> cases;
  for (double alpha : {0.5, 0.8})
    for (double q : {1.0, 2.0})
      cases.push_back({"lorentz:q=" + format_number(q) + ",w=power(" + format_number(alpha) + ")",
                       alpha / q, 0.02});
  for (double q : {1.0, 2.0}) cases.push_back({"lorentz:q=" + format_number(q) + ",w=invlog", 1.0 / q, 0.03});
  for (double p : {2.0, 3.0})
    for (double a : {-1.0, 0.0, 1.0})
      cases.push_back({"orlicz:powerlog(p=" + format_number(p) + ",a=" + format_number(a) + ")",
                       1.0 / p, 0.02});
  for (double p : {1.0, 1.5, 2.0, 3.0}) cases.push_back({"lp:p=" + format_number(p), 1.0 / p, 1e-6});

  auto idx = index_options(cfg, exec);
  auto orl = orlicz_index_options(cfg, exec);
  std::size_t failures = 0;
  double worst_ratio = 0.0;
  std::string worst;
  for (const auto& c : cases) {
    const auto space = parse_space(c.space);
    const auto est = space.family() == SpaceDescriptor::Family::Orlicz
                         ? orlicz_indices(space.orlicz_function(), orl)
                         : fundamental_indices(space, idx);
    const double dev = std::max(std::fabs(est.mu.value - c.expected),
                                std::fabs(est.nu.value - c.expected));
    if (dev > c.tol) ++failures;
    if (dev / c.tol > worst_ratio) {
      worst_ratio = dev / c.tol;
      worst = c.space + " mu=" + g(est.mu.value) + " nu=" + g(est.nu.value) + " expected " +
              g(c.expected) + " +- " + g(c.tol);
    }
  }
  return {4, "index_recovery", failures == 0,
          std::to_string(failures) + " of " + std::to_string(cases.size()) +
              " outside tolerance; tightest: " + worst};
}

AcceptanceLine check_classification(const RunConfig& cfg, Exec exec) {
  const auto ccfg = criteria_config(cfg, exec);
  struct Expect {
    std::string space;
    std::string upper;  // "l_<r>", "l_N" or "lambda_q(w)"
    std::string lower;
  };
  const std::vector<Expect> cases{
      {"lpq:p=2,q=1", "l_1", "l_2"},
      {"lpq:p=2,q=3", "l_2", "l_3"},
      {"lpq:p=3,q=1.5", "l_1.5", "l_3"},
      {"lorentz:q=1,w=power(0.5)", "l_1", "l_2"},
      {"lorentz:q=2,w=power(0.5)", "l_2", "l_4"},
      {"lorentz:q=2,w=power(0.8)", "l_2", "l_2.5"},
      {"lorentz:q=1,w=invlog", "l_1", "lambda_q(w)"},
      {"lorentz:q=2,w=invlog", "l_2", "lambda_q(w)"},
      {"orlicz:powerlog(p=2,a=1)", "l_N", "l_2"},
      {"orlicz:powerlog(p=3,a=1)", "l_N", "l_3"},
      {"orlicz:powerlog(p=2,a=-1)", "l_2", "l_N"},
      {"orlicz:powerlog(p=3,a=-1)", "l_3", "l_N"},
      {"orlicz:powerlog(p=1,a=-1)", "l_1", "l_N"},
  };
  std::vector<std::string> problems;
  for (const auto& e : cases) {
    const auto c = classify_optimal_spaces(parse_space(e.space), ccfg);
    std::vector<std::string> local;
    if (c.upper.space != e.upper) local.push_back("X_U=" + c.upper.space + " (expected " + e.upper + ")");
    if (c.lower.space != e.lower) local.push_back("X_L=" + c.lower.space + " (expected " + e.lower + ")");
    for (const auto& r : c.criteria) {
      if (r.verdict == Verdict::inconclusive) local.push_back(r.id + " inconclusive");
      const auto& w = parse_space(e.space);
      const bool power_alpha = w.family() == SpaceDescriptor::Family::LorentzLambda &&
                               w.weights().kind() == WeightGenerator::Kind::PowerAlpha;
      const bool inv_log = w.family() == SpaceDescriptor::Family::LorentzLambda &&
                           w.weights().kind() == WeightGenerator::Kind::InvLog;
      if (power_alpha && r.id == "lorentz_assump" && !(r.constant && *r.constant <= 1.05))
        local.push_back("lorentz_assump constant not <= 1.05");
      if (power_alpha && r.id == "lorentz_did" && r.verdict != Verdict::diverges)
        local.push_back("lorentz_did " + to_string(r.verdict) + " (expected diverges, last " +
                        g(r.trend.back().value) + ")");
      if (inv_log && r.id == "lorentz_did" && r.verdict != Verdict::holds_with_constant)
        local.push_back("lorentz_did " + to_string(r.verdict));
      if (inv_log && r.id == "lorentz_assump" && r.verdict != Verdict::diverges)
        local.push_back("lorentz_assump " + to_string(r.verdict));
    }
    if (c.upper.status == "inconclusive" || c.lower.status == "inconclusive")
      local.push_back("identification inconclusive");
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    for (const auto& l : local) problems.push_back(e.space + ": " + l);
  }
  std::string detail = std::to_string(cases.size()) + " spaces, " +
                       std::to_string(problems.size()) + " mismatches";
  for (const auto& p : problems) detail += "; " + p;
  return {5, "classification_table", problems.empty(), detail};
}

AcceptanceLine check_criterion_constants(const RunConfig& cfg, Exec exec) {
  const auto ccfg = criteria_config(cfg, exec);
  std::vector<std::string> problems;
  double worst = 0.0;
  auto expect_one = [&](const CriterionReport& r, double tol, const std::string& what) {
    const double dev = r.constant ? std::fabs(*r.constant - 1.0) : INFINITY;
    worst = std::max(worst, dev);
    if (!(dev <= tol)) problems.push_back(what + " " + r.id + " deviates by " + g(dev));
  };
  for (double p : {1.0, 2.0, 3.0}) {
    const auto n = OrliczGenerator::power(p);
    expect_one(orlicz_submultiplicative_constant(n, ccfg), 1e-9, "Power(" + g(p) + ")");
    expect_one(orlicz_supermultiplicative_constant(n, ccfg), 1e-9, "Power(" + g(p) + ")");
  }
  for (double alpha : {0.5, 0.8})
    for (double q : {1.0, 2.0})
      expect_one(lorentz_assump_constant(q, WeightGenerator::power_alpha(alpha), alpha / q, ccfg),
                 1e-9, "PowerAlpha(" + g(alpha) + "), q=" + g(q));
  expect_one(lorentz_did_ratio(WeightGenerator::constant(), ccfg), 0.0, "Constant");
  return {6, "criterion_constants", problems.empty(),
          "max deviation from 1: " + g(worst) +
              (problems.empty() ? "" : "; " + problems.front())};
}

AcceptanceLine check_holder_pairing(const RunConfig& cfg, Exec exec) {
  auto ccfg = criteria_config(cfg, exec);
  ccfg.holder_samples = 1000;
  std::string detail;
  bool pass = true;
  for (const char* text : {"lp:p=2", "lpq:p=3,q=1", "lpq:p=2,q=inf"}) {
    const auto r = holder_pairing_check(parse_space(text), ccfg);
    const double max_ratio = r.trend.back().value;
    bool ok = max_ratio <= 1.0 + 1e-9;
    if (std::string(text) == "lp:p=2") ok = ok && std::fabs(max_ratio - 1.0) <= 1e-6;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : ", ") + text + " max " + g(max_ratio);
  }
  return {7, "holder_pairing", pass, detail + " (bound 1 + 1e-9)"};
}

AcceptanceLine check_tensor_properties(const RunConfig& cfg, Exec exec) {
  const auto ccfg = criteria_config(cfg, exec);
  std::vector<std::string> problems;
  double lp_dev = 0.0;
  for (double p : {1.0, 2.0, 3.0})
    for (auto dir : {EstimateDirection::upper, EstimateDirection::lower}) {
      // The trend is a running max, so the trend bounds the ratio from
      // above; the minimum comes from the reciprocal direction.
      const auto r = tensor_inequality_check(SpaceDescriptor::lp(p), dir, ccfg);
      for (const auto& t : r.trend) lp_dev = std::max(lp_dev, std::fabs(t.value - 1.0));
    }
  if (lp_dev > 1e-9) problems.push_back("l_p ratio deviates by " + g(lp_dev));
  const auto up = tensor_inequality_check(parse_space("orlicz:powerlog(p=2,a=1)"),
                                          EstimateDirection::upper, ccfg);
  if (up.verdict != Verdict::holds_with_constant)
    problems.push_back("PowerLog(2,1) upper " + to_string(up.verdict));
  const auto lo = tensor_inequality_check(parse_space("orlicz:powerlog(p=2,a=-1)"),
                                          EstimateDirection::lower, ccfg);
  if (lo.verdict != Verdict::holds_with_constant)
    problems.push_back("PowerLog(2,-1) lower " + to_string(lo.verdict));
  double phi_dev = 0.0;
  const auto lor = parse_space("lorentz:q=2,w=power(0.5)");
  for (unsigned j = 0; j <= 16; ++j) {
    const std::uint64_t m = std::uint64_t{1} << j;
    const double pm = fundamental_function(lor, m);
    phi_dev = std::max(phi_dev, std::fabs(pm * pm / fundamental_function(lor, m * m) - 1.0));
  }
  if (phi_dev > 1e-9) problems.push_back("phi multiplicativity deviates by " + g(phi_dev));
  std::string detail = "l_p deviation " + g(lp_dev) + ", PowerLog(2,1) upper constant " +
                       (up.constant ? g(*up.constant) : "diverging") +
                       ", PowerLog(2,-1) lower constant " +
                       (lo.constant ? g(*lo.constant) : "diverging") +
                       ", phi(m)^2/phi(m^2) deviation " + g(phi_dev);
  for (const auto& p : problems) detail += "; " + p;
  return {8, "tensor_properties", problems.empty(), detail};
}

AcceptanceLine check_seqcore_oracles(const RunConfig& cfg, Exec) {
  auto rng = stream(cfg.seed, 900);
  std::size_t topk_bad = 0, tensor_bad = 0;
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(len(rng));
    for (auto& x : w) x = u(rng);
    std::sort(w.begin(), w.end(), std::greater<>());
    w[0] = 1.0;
    const auto gen = WeightGenerator::explicit_weights(w);
    std::vector<double> all;
    for (double a : w)
      for (double b : w) all.push_back(a * b);
    std::sort(all.begin(), all.end(), std::greater<>());
    const std::size_t k = std::min<std::size_t>(50, all.size());
    const auto top = top_k_products(gen, k);
    if (!std::equal(all.begin(), all.begin() + std::ptrdiff_t(k), top.entries().begin(),
                    top.entries().end()))
      ++topk_bad;
  }
  for (int t = 0; t < 100; ++t) {
    const FiniteSeq a(random_vector(rng, 10, true)), b(random_vector(rng, 10, true));
    const auto x = rearrange(tensor(a, b)), y = rearrange(tensor_blocks(a, b));
    // Sequences are zero-extended, so trailing zeros from padding do not count.
    auto nonzero = [](const RearrangedSeq& r) {
      auto e = r.entries();
      std::size_t m = e.size();
      while (m > 0 && e[m - 1] == 0.0) --m;
      return std::vector<double>(e.begin(), e.begin() + std::ptrdiff_t(m));
    };
    if (nonzero(x) != nonzero(y)) ++tensor_bad;
  }
  return {9, "seqcore_oracles", topk_bad == 0 && tensor_bad == 0,
          "top_k mismatches " + std::to_string(topk_bad) + "/20, tensor_blocks mismatches " +
              std::to_string(tensor_bad) + "/100"};
}

std::string format_line(const AcceptanceLine& l) {
  return std::string(l.pass ? "PASS" : "FAIL") + " " + (l.id < 10 ? " " : "") +
         std::to_string(l.id) + " " + l.name + ": " + l.detail;
}

std::string render_lines(const AcceptanceReport& r) {
  std::string out;
  for (const auto& l : r.lines) out += format_line(l) + "\n";
  return out;
}

Json to_json(const AcceptanceReport& r) {
  Json lines = Json::array();
  for (const auto& l : r.lines)
    lines.push_back(Json{{"id", l.id}, {"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
  return Json{{"all_pass", r.all_pass()}, {"criteria", lines}};
}

namespace {

AcceptanceReport run_checks(const RunConfig& cfg, Exec exec) {
  AcceptanceReport r;
  r.lines.push_back(check_lp_exactness(cfg, exec));
  r.lines.push_back(check_embedding_chain(cfg, exec));
  r.lines.push_back(check_oracle_equivalence(cfg, exec));
  r.lines.push_back(check_index_recovery(cfg, exec));
  r.lines.push_back(check_classification(cfg, exec));
  r.lines.push_back(check_criterion_constants(cfg, exec));
  r.lines.push_back(check_holder_pairing(cfg, exec));
  r.lines.push_back(check_tensor_properties(cfg, exec));
  r.lines.push_back(check_seqcore_oracles(cfg, exec));
  return r;
}

}  // namespace

AcceptanceReport run_acceptance(const RunConfig& cfg, Exec exec, bool determinism) {
  auto first = run_checks(cfg, exec);
  if (!determinism) return first;
  const auto second = run_checks(cfg, exec);
  const std::string a = to_json(first).dump(), b = to_json(second).dump();
  first.lines.push_back({10, "determinism", a == b,
                         a == b ? "two runs produced byte-identical reports (" +
                                      std::to_string(a.size()) + " bytes)"
                                : "reports differ"});
  return first;
}

}  // namespace optseq
