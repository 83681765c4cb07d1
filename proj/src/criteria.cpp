#include "optseq/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "optseq/errors.hpp"

namespace optseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOrliczFloor = 1e-8;

std::string num(double x) { return format_number(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

CriterionReport finish(std::string id, std::vector<TrendPoint> trend,
                       std::map<std::string, std::string> provenance,
                       const CriteriaConfig& cfg) {
  std::vector<double> values;
  for (const auto& t : trend) values.push_back(t.value);
  CriterionReport r;
  r.id = std::move(id);
  r.trend = std::move(trend);
  r.verdict = decide(values, cfg.rules);
  if (r.verdict != Verdict::diverges && !values.empty()) r.constant = values.back();
  r.provenance = std::move(provenance);
  return r;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt),
                    std::uint32_t(salt >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> random_nonnegative(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(len(rng));
  for (auto& x : v) x = u(rng);
  if (*std::max_element(v.begin(), v.end()) == 0.0) v[0] = 1.0;
  return v;
}

void require_p(double p) {
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("equal-norm estimate: p must satisfy 1 < p < inf");
}

std::vector<std::uint64_t> dyadic_upto(std::uint64_t cap) {
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= cap && n != 0; n <<= 1) ns.push_back(n);
  return ns;
}

std::map<std::string, std::string> search_provenance(const CriteriaConfig& cfg) {
  const auto& s = cfg.search;
  return {{"L_max", num(std::uint64_t(s.L_max))},
          {"K_max", num(std::uint64_t(s.K_max))},
          {"restarts", num(std::uint64_t(s.restarts))},
          {"max_evals", num(std::uint64_t(s.max_evals))},
          {"enumeration_cap", num(std::uint64_t(s.enumeration_cap))},
          {"seed", num(s.seed)}};
}

// Sup over an (x, y) grid in [-U, 0]^2, x = ln s, y = ln t, of
// exp(f(lN(x), lN(y), lN(x + y), y)).  The grid is uniform, so x + y lands on
// the same lattice and lN is tabulated once per refinement.
template <class LogRatio>
CriterionReport orlicz_grid_sup(std::string id, const OrliczGenerator& n, LogRatio f,
                                const CriteriaConfig& cfg,
                                std::map<std::string, std::string> extra = {}) {
  if (cfg.orlicz_grid < 100) throw std::invalid_argument("orlicz criteria: grid must be >= 100");
  std::vector<TrendPoint> trend;
  const double base_depth = -std::log(kOrliczFloor);
  for (unsigned r = 0; r < cfg.orlicz_refinements; ++r) {
    const std::size_t g = std::size_t(cfg.orlicz_grid) << r;
    // Closed-form log values go deeper at each refinement; numerically
    // conjugated functions keep the 1e-8 floor and only refine the grid.
    const double depth = n.has_closed_log() ? base_depth * std::pow(4.0, double(r)) : base_depth;
    const double h = depth / double(g - 1);
    const auto table = tabulate(2 * g - 1, [&](std::size_t k) { return n.log_value(-double(k) * h); },
                                cfg.exec);
    const auto rows = tabulate(
        g,
        [&](std::size_t i) {
          double best = -kInf;
          for (std::size_t j = 0; j < g; ++j) {
            const double v = f(table[i], table[j], table[i + j], -double(j) * h);
            if (v > best) best = v;
          }
          return best;
        },
        cfg.exec);
    trend.push_back({g, std::exp(*std::max_element(rows.begin(), rows.end()))});
  }
  extra["grid"] = num(std::uint64_t(cfg.orlicz_grid));
  extra["refinements"] = num(std::uint64_t(cfg.orlicz_refinements));
  extra["floor"] = n.has_closed_log() ? "ln(1e-8)*4^r" : "1e-8";
  return finish(std::move(id), std::move(trend), std::move(extra), cfg);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_with_constant:
      return "holds_with_constant";
    case Verdict::diverges:
      return "diverges";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string to_string(EstimateDirection d) {
  return d == EstimateDirection::upper ? "upper" : "lower";
}

Verdict decide(std::span<const double> trend, const VerdictRules& rules) {
  if (trend.size() < 2) return Verdict::inconclusive;
  bool increasing = true;
  for (std::size_t i = 1; i < trend.size(); ++i)
    increasing = increasing && trend[i] > trend[i - 1];
  const double first = trend.front(), last = trend.back(), prev = trend[trend.size() - 2];
  if (increasing && first > 0.0 && last > rules.growth * first) return Verdict::diverges;
  for (double v : trend)
    if (!std::isfinite(v)) return Verdict::inconclusive;
  if (std::fabs(last - prev) <= rules.agreement * std::max(std::fabs(last), std::fabs(prev)))
    return Verdict::holds_with_constant;
  return Verdict::inconclusive;
}

CriterionReport equal_norm_upper_constant(const SpaceDescriptor& space, double p,
                                          const CriteriaConfig& cfg) {
  require_p(p);
  const auto ns = dyadic_upto(cfg.equal_norm_n_cap);
  const auto rows = optimal_fundamental(space, ns, cfg.search);
  std::vector<TrendPoint> trend;
  double best = 0.0;
  for (const auto& r : rows) {
    best = std::max(best, r.phi_upper / std::pow(double(r.n), 1.0 / p));
    trend.push_back({r.n, best});
  }
  auto prov = search_provenance(cfg);
  prov["space"] = describe(space);
  prov["p"] = num(p);
  prov["n_cap"] = num(cfg.equal_norm_n_cap);
  return finish("equal_norm_upper", std::move(trend), std::move(prov), cfg);
}

CriterionReport equal_norm_lower_constant(const SpaceDescriptor& space, double p,
                                          const CriteriaConfig& cfg) {
  require_p(p);
  const auto ns = dyadic_upto(cfg.equal_norm_n_cap);
  const auto rows = optimal_fundamental(space, ns, cfg.search);
  std::vector<TrendPoint> trend;
  double best = 0.0;
  for (const auto& r : rows) {
    best = std::max(best, std::pow(double(r.n), 1.0 / p) / r.phi_n);
    trend.push_back({r.n, best});
  }
  auto prov = search_provenance(cfg);
  prov["space"] = describe(space);
  prov["p"] = num(p);
  prov["n_cap"] = num(cfg.equal_norm_n_cap);
  return finish("equal_norm_lower", std::move(trend), std::move(prov), cfg);
}

CriterionReport orlicz_submultiplicative_constant(const OrliczGenerator& n,
                                                  const CriteriaConfig& cfg) {
  return orlicz_grid_sup(
      "orlicz_submultiplicative", n,
      [](double ls, double lt, double lst, double) { return lst - ls - lt; }, cfg,
      {{"function", describe(n)}});
}

CriterionReport orlicz_supermultiplicative_constant(const OrliczGenerator& n,
                                                    const CriteriaConfig& cfg) {
  return orlicz_grid_sup(
      "orlicz_supermultiplicative", n,
      [](double ls, double lt, double lst, double) { return ls + lt - lst; }, cfg,
      {{"function", describe(n)}});
}

CriterionReport orlicz_estimate_constant(const OrliczGenerator& n, double p,
                                         EstimateDirection direction,
                                         const CriteriaConfig& cfg) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("orlicz estimate: p must satisfy 1 <= p < inf");
  std::map<std::string, std::string> prov{
      {"function", describe(n)}, {"p", num(p)}, {"direction", to_string(direction)}};
  if (direction == EstimateDirection::upper)
    return orlicz_grid_sup(
        "orlicz_upper_estimate", n,
        [p](double ls, double, double lst, double y) { return lst - ls - p * y; }, cfg, prov);
  return orlicz_grid_sup(
      "orlicz_lower_estimate", n,
      [p](double ls, double, double lst, double y) { return ls + p * y - lst; }, cfg, prov);
}

CriterionReport lorentz_did_ratio(const WeightGenerator& w, const CriteriaConfig& cfg) {
  const std::uint64_t n_cap = cfg.did_n_cap;
  if (n_cap < 1) throw std::invalid_argument("lorentz did: n_cap must be >= 1");
  const auto d = top_k_products(w, std::size_t(n_cap));
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t c : {std::uint64_t(100), std::uint64_t(1000), std::uint64_t(10000)})
    if (c < n_cap) checkpoints.push_back(c);
  checkpoints.push_back(n_cap);
  std::vector<TrendPoint> trend;
  double partial = 0.0, best = 0.0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= n_cap; ++n) {
    partial += d[n - 1];
    best = std::max(best, partial / w.partial_sum(double(n)));
    if (n == checkpoints[next]) {
      trend.push_back({n, best});
      ++next;
    }
  }
  return finish("lorentz_did", std::move(trend),
                {{"weights", describe(w)}, {"n_cap", num(n_cap)}}, cfg);
}

CriterionReport lorentz_assump_constant(double q, const WeightGenerator& w, double mu,
                                        const CriteriaConfig& cfg) {
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("lorentz assump: bad q");
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("lorentz assump: mu must lie in [0,1]");
  const unsigned lcap = cfg.assump_l_cap_log2;
  if (lcap < 1 || lcap > 960) throw std::invalid_argument("lorentz assump: bad l cap");
  const std::uint64_t n_cap = cfg.assump_n_cap;
  if (n_cap < 1) throw std::invalid_argument("lorentz assump: n_cap must be >= 1");

  std::vector<double> ls;
  const double dense = std::min(4096.0, std::ldexp(1.0, int(lcap)));
  for (double l = 1.0; l <= dense; l += 1.0) ls.push_back(l);
  for (unsigned j = 13; j <= lcap; ++j) ls.push_back(std::ldexp(1.0, int(j)));

  std::vector<double> log_s(n_cap + 1, 0.0);
  for (std::uint64_t n = 1; n <= n_cap; ++n) log_s[n] = std::log(w.partial_sum(double(n)));
  // Per l: max over n of ln S_n + q mu ln l - ln S_{ln}.
  const auto per_l = tabulate(
      ls.size(),
      [&](std::size_t i) {
        const double l = ls[i], shift = q * mu * std::log(l);
        double best = -kInf;
        for (std::uint64_t n = 1; n <= n_cap; ++n)
          best = std::max(best, log_s[n] + shift - std::log(w.partial_sum(l * double(n))));
        return best;
      },
      cfg.exec);

  std::vector<TrendPoint> trend;
  double best = -kInf;
  std::size_t i = 0;
  for (unsigned r = 1;; ++r) {
    const unsigned e = std::min(4 * r, lcap);
    const double cap = std::ldexp(1.0, int(e));
    while (i < ls.size() && ls[i] <= cap) best = std::max(best, per_l[i++]);
    trend.push_back({std::uint64_t(e), std::exp(best)});
    if (e == lcap) break;
  }
  return finish("lorentz_assump", std::move(trend),
                {{"q", num(q)},
                 {"weights", describe(w)},
                 {"mu", num(mu)},
                 {"n_cap", num(n_cap)},
                 {"l_cap_log2", num(std::uint64_t(lcap))}},
                cfg);
}

CriterionReport tensor_inequality_check(const SpaceDescriptor& space,
                                        EstimateDirection direction,
                                        const CriteriaConfig& cfg) {
  const std::size_t total = cfg.tensor_samples;
  if (total < 1) throw std::invalid_argument("tensor check: samples must be >= 1");
  auto rng = stream(cfg.seed, 0x74656E736F72ull);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  for (std::size_t s = 0; s < total; ++s) {
    auto a = random_nonnegative(rng, 8);
    auto b = random_nonnegative(rng, 8);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  const bool upper = direction == EstimateDirection::upper;
  const auto ratios = tabulate(
      total,
      [&](std::size_t s) {
        const FiniteSeq a(pairs[s].first), b(pairs[s].second);
        const double t = norm(space, tensor(a, b));
        const double prod = norm(space, a) * norm(space, b);
        return upper ? t / prod : prod / t;
      },
      cfg.exec);

  std::vector<TrendPoint> trend;
  double best = 0.0;
  std::size_t used = 0;
  unsigned m_log2 = 0;
  constexpr unsigned kLevels = 4;
  for (unsigned r = 0; r < kLevels; ++r) {
    const std::size_t upto = std::max<std::size_t>(1, (total << r) >> (kLevels - 1));
    for (; used < std::min(upto, total); ++used) best = std::max(best, ratios[used]);
    // The 1^m family: ||1^m (x) 1^m|| = phi(m^2).
    for (; m_log2 <= 4 * (r + 1); ++m_log2) {
      const std::uint64_t m = std::uint64_t{1} << m_log2;
      const double pm = fundamental_function(space, m);
      const double pmm = fundamental_function(space, m * m);
      best = std::max(best, upper ? pmm / (pm * pm) : pm * pm / pmm);
    }
    trend.push_back({std::uint64_t(used), best});
  }
  return finish(upper ? "tensor_upper" : "tensor_lower", std::move(trend),
                {{"space", describe(space)},
                 {"samples", num(std::uint64_t(total))},
                 {"m_max", num(std::uint64_t{1} << (4 * kLevels))},
                 {"seed", num(cfg.seed)}},
                cfg);
}

CriterionReport holder_pairing_check(const SpaceDescriptor& space, const CriteriaConfig& cfg) {
  double r = 0.0;
  if (space.family() == SpaceDescriptor::Family::Lp)
    r = space.p();
  else if (space.family() == SpaceDescriptor::Family::Lpq)
    r = std::min(space.p(), space.q());
  else
    throw UnsupportedOperation("holder pairing: optimal spaces identified for Lp and Lpq only");
  const auto xu = SpaceDescriptor::lp(r);
  const auto dual_l = SpaceDescriptor::lp(conjugate_exponent(r));

  const std::size_t total = cfg.holder_samples;
  if (total < 1) throw std::invalid_argument("holder check: samples must be >= 1");
  auto rng = stream(cfg.seed, 0x686F6C646572ull);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  pairs.push_back({{1.0}, {1.0}});
  {
    auto a = random_nonnegative(rng, 16);
    pairs.push_back({a, a});
  }
  while (pairs.size() < total) {
    auto a = random_nonnegative(rng, 16);
    std::vector<double> b(a.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : b) x = u(rng);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  const auto ratios = tabulate(
      pairs.size(),
      [&](std::size_t s) {
        const auto& [a, b] = pairs[s];
        double pairing = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) pairing += a[k] * b[k];
        const double denom = norm(xu, a) * norm(dual_l, b);
        return denom > 0.0 ? pairing / denom : 0.0;
      },
      cfg.exec);
  std::vector<TrendPoint> trend;
  double best = 0.0;
  std::size_t used = 0;
  constexpr unsigned kLevels = 4;
  for (unsigned lvl = 0; lvl < kLevels; ++lvl) {
    const std::size_t upto = std::max<std::size_t>(2, (pairs.size() << lvl) >> (kLevels - 1));
    for (; used < std::min(upto, pairs.size()); ++used) best = std::max(best, ratios[used]);
    trend.push_back({std::uint64_t(used), best});
  }
  return finish("holder_pairing", std::move(trend),
                {{"space", describe(space)},
                 {"x_upper", describe(xu)},
                 {"dual_lower", describe(dual_l)},
                 {"samples", num(std::uint64_t(total))},
                 {"seed", num(cfg.seed)}},
                cfg);
}

IndexPair working_indices(const SpaceDescriptor& space, const CriteriaConfig& cfg) {
  if (auto cf = closed_form_indices(space)) return *cf;
  switch (space.family()) {
    case SpaceDescriptor::Family::LorentzLambda:
      return lorentz_indices(space.q(), space.weights(), cfg.indices);
    case SpaceDescriptor::Family::Orlicz:
      return orlicz_indices(space.orlicz_function(), cfg.orlicz_indices);
    default:
      return fundamental_indices(space, cfg.indices);
  }
}

bool Classification::any_inconclusive() const {
  if (upper.status == "inconclusive" || lower.status == "inconclusive") return true;
  for (const auto& c : criteria)
    if (c.verdict == Verdict::inconclusive) return true;
  return false;
}

namespace {

Identification lp_identification(double r, std::string status) {
  return {"l_" + format_number(r), std::move(status), {}, r};
}

bool holds(const CriterionReport& r) { return r.verdict == Verdict::holds_with_constant; }

// Combines the two criteria that can identify one optimal space.
Identification combine(const CriterionReport& own, std::string own_space,
                       const CriterionReport& power, double r, bool power_equivalent,
                       std::vector<std::string>& notes, const std::string& side) {
  Identification id;
  const bool a = holds(own), b = holds(power);
  if (a && b) {
    if (power_equivalent) {
      id = lp_identification(r, "criterion");
      id.justified_by = {own.id, power.id};
      notes.push_back(side + ": " + own_space + " coincides with l_" + format_number(r));
    } else {
      id.status = "inconclusive";
      id.justified_by = {own.id, power.id};
      notes.push_back(side + ": conflicting identifications " + own_space + " and l_" +
                      format_number(r));
    }
  } else if (a) {
    id = {own_space, "criterion", {own.id}, std::nullopt};
  } else if (b) {
    id = lp_identification(r, "criterion");
    id.justified_by = {power.id};
  } else if (own.verdict == Verdict::inconclusive || power.verdict == Verdict::inconclusive) {
    id.status = "inconclusive";
    id.justified_by = {own.id, power.id};
  } else {
    id.status = "unidentified";
    id.justified_by = {own.id, power.id};
  }
  return id;
}

}  // namespace

Classification classify_optimal_spaces(const SpaceDescriptor& space, const CriteriaConfig& cfg) {
  Classification c;
  c.space = describe(space);
  c.indices = working_indices(space, cfg);
  c.grobler_dodds = grobler_dodds(space, cfg.indices, cfg.orlicz_indices);

  auto equal_norm_support = [&](Identification& up, double pu, Identification& lo, double pl) {
    if (pu > 1.0 && std::isfinite(pu)) {
      c.criteria.push_back(equal_norm_upper_constant(space, pu, cfg));
      up.justified_by.push_back(c.criteria.back().id);
      if (!holds(c.criteria.back())) {
        up.status = "inconclusive";
        c.notes.push_back("upper: equal-norm estimate does not confirm l_" + format_number(pu));
      }
    }
    if (pl > 1.0 && std::isfinite(pl)) {
      c.criteria.push_back(equal_norm_lower_constant(space, pl, cfg));
      lo.justified_by.push_back(c.criteria.back().id);
      if (!holds(c.criteria.back())) {
        lo.status = "inconclusive";
        c.notes.push_back("lower: equal-norm estimate does not confirm l_" + format_number(pl));
      }
    }
  };

  switch (space.family()) {
    case SpaceDescriptor::Family::Lp: {
      c.upper = lp_identification(space.p(), "closed_form");
      c.lower = lp_identification(space.p(), "closed_form");
      equal_norm_support(c.upper, space.p(), c.lower, space.p());
      break;
    }
    case SpaceDescriptor::Family::Lpq: {
      const double lo = std::min(space.p(), space.q()), hi = std::max(space.p(), space.q());
      c.upper = lp_identification(lo, "closed_form");
      c.lower = lp_identification(hi, "closed_form");
      equal_norm_support(c.upper, lo, c.lower, hi);
      break;
    }
    case SpaceDescriptor::Family::LorentzLambda: {
      const double q = space.q();
      const auto& w = space.weights();
      c.upper = lp_identification(q, "closed_form");
      c.notes.push_back("upper: X_U = l_q for every Lorentz space lambda_q(w)");
      const double mu = c.indices.mu.value;
      c.criteria.push_back(lorentz_assump_constant(q, w, mu, cfg));
      c.criteria.push_back(lorentz_did_ratio(w, cfg));
      const auto& assump = c.criteria[0];
      const auto& did = c.criteria[1];
      const double r = mu > 0.0 ? 1.0 / mu : kInf;
      const bool coincide = space.degenerate() || std::fabs(r - q) <= 0.05 * q;
      c.lower = combine(did, "lambda_q(w)", assump, r, coincide, c.notes, "lower");
      break;
    }
    case SpaceDescriptor::Family::Orlicz: {
      const auto& n = space.orlicz_function();
      const double pu = 1.0 / std::max(c.indices.nu.value, 1e-300);
      const double pl = 1.0 / std::max(c.indices.mu.value, 1e-300);
      c.criteria.push_back(orlicz_submultiplicative_constant(n, cfg));
      c.criteria.push_back(orlicz_supermultiplicative_constant(n, cfg));
      c.criteria.push_back(orlicz_estimate_constant(n, pu, EstimateDirection::upper, cfg));
      c.criteria.push_back(orlicz_estimate_constant(n, pl, EstimateDirection::lower, cfg));
      const bool power = n.kind() == OrliczGenerator::Kind::Power ||
                         (n.kind() == OrliczGenerator::Kind::PowerLog && n.a() == 0.0);
      c.upper = combine(c.criteria[0], "l_N", c.criteria[2], pu, power, c.notes, "upper");
      c.lower = combine(c.criteria[1], "l_N", c.criteria[3], pl, power, c.notes, "lower");
      break;
    }
  }

  // An l_r identification must match the Grobler-Dodds index on that side.
  auto check_gd = [&](const Identification& id, double index, const char* side) {
    if (!id.exponent || !std::isfinite(index) || !std::isfinite(*id.exponent)) return;
    if (std::fabs(*id.exponent - index) > 0.05)
      c.notes.push_back(std::string(side) + ": l_" + format_number(*id.exponent) +
                        " differs from the Grobler-Dodds index " + format_number(index));
  };
  check_gd(c.upper, c.grobler_dodds.delta, "upper");
  check_gd(c.lower, c.grobler_dodds.sigma, "lower");
  return c;
}

}  // namespace optseq
