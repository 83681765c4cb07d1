#include "optseq/optimal.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "optseq/errors.hpp"

namespace optseq {

namespace {

constexpr double kMinRatio = 1e-9;
constexpr double kScreenRatios[] = {1.0, 0.5, 0.1};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(seed ^ splitmix(a * 0x100000001B3ull + b));
}

// Coefficients sharing one block shape.
struct Slot {
  double coef;
  std::size_t count;
};

struct Canonical {
  std::vector<Slot> slots;
  std::size_t zeros = 0;
  std::size_t n = 0;
  bool hetero = true;
};

Canonical canonicalize(std::span<const double> a, const SearchConfig& cfg,
                       bool force_homogeneous = false) {
  const auto r = rearrange(a);
  const auto runs = to_runs(r.entries());
  Canonical c;
  c.n = a.size();
  std::size_t nonzero = 0;
  for (const Run& run : runs) nonzero += run.count;
  c.zeros = c.n - nonzero;
  c.hetero = !force_homogeneous && nonzero <= cfg.hetero_n_max;
  for (const Run& run : runs) {
    if (c.hetero)
      for (std::size_t i = 0; i < run.count; ++i) c.slots.push_back({run.value, 1});
    else
      c.slots.push_back({run.value, run.count});
  }
  return c;
}

Canonical ones_canonical(std::uint64_t n, const SearchConfig& cfg) {
  Canonical c;
  c.n = n;
  c.hetero = n <= cfg.hetero_n_max;
  if (c.hetero)
    c.slots.assign(n, Slot{1.0, 1});
  else
    c.slots.push_back({1.0, static_cast<std::size_t>(n)});
  return c;
}

using Tuple = std::vector<std::size_t>;

std::size_t dimension(const Tuple& t) {
  std::size_t d = 0;
  for (std::size_t L : t) d += L - 1;
  return d;
}

// Evaluates sum_s coef_s * (normalized shape_s) repeated count_s times.
class Evaluator {
 public:
  Evaluator(const SpaceDescriptor& space, const Canonical& c) : space_(space), c_(c) {}

  static void build_shape(std::span<const double> rho, std::vector<double>& out) {
    out.resize(rho.size() + 1);
    out[0] = 1.0;
    for (std::size_t k = 0; k < rho.size(); ++k)
      out[k + 1] = out[k] * std::clamp(rho[k], kMinRatio, 1.0);
  }

  // Normalized shapes for every slot.
  std::vector<std::vector<double>> shapes(const Tuple& lengths, const double* params) const {
    std::vector<std::vector<double>> out(lengths.size());
    for (std::size_t s = 0; s < lengths.size(); ++s) {
      build_shape({params, lengths[s] - 1}, out[s]);
      params += lengths[s] - 1;
      const double nb = norm_sorted(space_, out[s]);
      for (double& x : out[s]) x /= nb;
    }
    return out;
  }

  double eval(const Tuple& lengths, const double* params) {
    terms_.clear();
    for (std::size_t s = 0; s < lengths.size(); ++s) {
      build_shape({params, lengths[s] - 1}, shape_);
      params += lengths[s] - 1;
      const double scale = c_.slots[s].coef / norm_sorted(space_, shape_);
      for (double x : shape_) terms_.push_back({x * scale, c_.slots[s].count});
    }
    return eval_terms();
  }

  // Same shape, with uniform ratio rho, in every slot of the tuple.
  double eval_uniform(const Tuple& lengths, double rho) {
    params_.assign(dimension(lengths), rho);
    return eval(lengths, params_.data());
  }

 private:
  double eval_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Run& x, const Run& y) { return x.value > y.value; });
    runs_.clear();
    for (const Run& t : terms_) {
      if (!(t.value > 0.0)) continue;
      if (!runs_.empty() && runs_.back().value == t.value)
        runs_.back().count += t.count;
      else
        runs_.push_back(t);
    }
    return norm_runs(space_, runs_);
  }

  const SpaceDescriptor& space_;
  const Canonical& c_;
  std::vector<Run> terms_, runs_;
  std::vector<double> shape_, params_;
};

std::size_t saturating_mul(std::size_t a, std::size_t b, std::size_t cap) {
  if (a == 0 || b == 0) return 0;
  return a > cap / b ? cap + 1 : std::min(a * b, cap + 1);
}

// Nondecreasing sequences of length r over {1..m}: C(m + r - 1, r).
std::size_t multiset_count(std::size_t m, std::size_t r, std::size_t cap) {
  double c = 1.0;
  for (std::size_t i = 1; i <= r; ++i) c = c * double(m - 1 + i) / double(i);
  return c > double(cap) ? cap + 1 : static_cast<std::size_t>(std::llround(c));
}

// Slots with equal coefficients are interchangeable; canonical tuples are
// nondecreasing inside each tie run.
std::vector<std::pair<std::size_t, std::size_t>> tie_runs(const Canonical& c) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t s = 0; s < c.slots.size(); ++s) {
    if (!runs.empty() && c.slots[s].coef == c.slots[runs.back().first].coef)
      ++runs.back().second;
    else
      runs.push_back({s, 1});
  }
  return runs;
}

std::vector<Tuple> enumerate_tuples(const Canonical& c, const SearchConfig& cfg) {
  const std::size_t m = cfg.L_max, cap = cfg.enumeration_cap;
  const auto ties = tie_runs(c);
  std::size_t count = 1;
  for (const auto& [start, len] : ties)
    count = saturating_mul(count, multiset_count(m, len, cap), cap);

  std::set<Tuple> out;
  const std::size_t n = c.slots.size();
  if (count <= cap) {
    Tuple t(n, 1);
    std::function<void(std::size_t)> rec = [&](std::size_t s) {
      if (s == n) {
        out.insert(t);
        return;
      }
      const bool tied = s > 0 && c.slots[s].coef == c.slots[s - 1].coef;
      for (std::size_t L = tied ? t[s - 1] : 1; L <= m; ++L) {
        t[s] = L;
        rec(s + 1);
      }
    };
    rec(0);
    return {out.begin(), out.end()};
  }
  for (std::size_t L = 1; L <= m; ++L) out.insert(Tuple(n, L));
  std::mt19937_64 rng(task_seed(cfg.seed, 0x7475706C65ull, n));
  std::uniform_int_distribution<std::size_t> pick(1, m);
  for (std::size_t attempt = 0; out.size() < cap && attempt < 8 * cap; ++attempt) {
    Tuple t(n);
    for (auto& L : t) L = pick(rng);
    for (const auto& [start, len] : ties)
      std::sort(t.begin() + std::ptrdiff_t(start), t.begin() + std::ptrdiff_t(start + len));
    out.insert(std::move(t));
  }
  return {out.begin(), out.end()};
}

struct Candidate {
  double value;
  std::size_t tuple;
  std::vector<double> params;
};

struct SearchResult {
  double value;
  Tuple lengths;
  std::vector<double> params;
  std::uint64_t evals = 0;
};

bool better(double x, double y, bool maximize) { return maximize ? x > y : x < y; }

struct SimplexData {
  Evaluator* ev;
  const Tuple* lengths;
  bool maximize;
  std::uint64_t evals = 0;
  double best;
  std::vector<double> best_x;
  std::vector<double> x;
};

double simplex_objective(const gsl_vector* v, void* p) {
  auto* d = static_cast<SimplexData*>(p);
  for (std::size_t i = 0; i < d->x.size(); ++i)
    d->x[i] = std::clamp(gsl_vector_get(v, i), kMinRatio, 1.0);
  const double val = d->ev->eval(*d->lengths, d->x.data());
  ++d->evals;
  if (better(val, d->best, d->maximize)) {
    d->best = val;
    d->best_x = d->x;
  }
  return d->maximize ? -val : val;
}

void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

// Nelder-Mead (GSL nmsimplex2) on the clamped block ratios.
template <class Objective>
void run_simplex(Objective f, void* data, std::vector<double> start, std::size_t max_evals,
                 double tol, const std::uint64_t& evals) {
  silence_gsl();
  const std::size_t d = start.size();
  gsl_multimin_function fn{f, d, data};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(d),
                                                           gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(d),
                                                              gsl_vector_free);
  for (std::size_t i = 0; i < d; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(step.get(), i, start[i] > 0.5 ? -0.25 : 0.25);
  }
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d),
      gsl_multimin_fminimizer_free);
  if (gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) return;
  while (evals < max_evals) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), tol) == GSL_SUCCESS)
      break;
  }
}

SearchResult search(const SpaceDescriptor& space, const Canonical& c,
                    const SearchConfig& cfg, bool maximize) {
  const auto tuples = enumerate_tuples(c, cfg);

  // Screening: uniform ratios per tuple.
  const auto screened = parallel_map<Candidate>(
      tuples.size(),
      [&](std::size_t t) {
        Evaluator ev(space, c);
        Candidate best{maximize ? -1.0 : std::numeric_limits<double>::infinity(), t, {}};
        const std::size_t d = dimension(tuples[t]);
        for (double rho : kScreenRatios) {
          const double v = ev.eval_uniform(tuples[t], rho);
          if (better(v, best.value, maximize)) best = {v, t, std::vector<double>(d, rho)};
          if (d == 0) break;
        }
        return best;
      },
      cfg.exec);
  std::uint64_t evals = 0;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    evals += dimension(tuples[t]) == 0 ? 1 : std::size(kScreenRatios);

  std::vector<std::size_t> order(tuples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return better(screened[x].value, screened[y].value, maximize);
  });
  std::vector<std::size_t> top;
  for (std::size_t t : order)
    if (dimension(tuples[t]) > 0 && top.size() < cfg.refine_top) top.push_back(t);

  struct Refined {
    Candidate best;
    std::uint64_t evals;
  };
  const std::size_t tasks = top.size() * cfg.restarts;
  const auto refined = parallel_map<Refined>(
      tasks,
      [&](std::size_t k) {
        const std::size_t t = top[k / cfg.restarts], r = k % cfg.restarts;
        Evaluator ev(space, c);
        const std::size_t d = dimension(tuples[t]);
        std::vector<double> start = screened[t].params;
        if (r > 0) {
          std::mt19937_64 rng(task_seed(cfg.seed, t, r));
          std::uniform_real_distribution<double> u(0.0, 1.0);
          for (auto& x : start) x = u(rng);
        }
        SimplexData data{&ev, &tuples[t], maximize, 0,
                         maximize ? -1.0 : std::numeric_limits<double>::infinity(),
                         start, std::vector<double>(d)};
        run_simplex(&simplex_objective, &data, start, cfg.max_evals, cfg.tol, data.evals);
        return Refined{{data.best, t, data.best_x}, data.evals};
      },
      cfg.exec);

  Candidate best = screened[0];
  for (const auto& s : screened)
    if (better(s.value, best.value, maximize)) best = s;
  for (const auto& r : refined) {
    evals += r.evals;
    if (better(r.best.value, best.value, maximize)) best = r.best;
  }
  return {best.value, tuples[best.tuple], best.params, evals};
}

BlockConfiguration make_witness(const SpaceDescriptor& space, const Canonical& c,
                                const Tuple& lengths, const std::vector<double>& params) {
  Evaluator ev(space, c);
  auto shapes = ev.shapes(lengths, params.data());
  std::vector<Block> blocks;
  for (std::size_t s = 0; s < shapes.size(); ++s)
    blocks.push_back({std::move(shapes[s]), c.slots[s].count});
  if (c.zeros > 0) blocks.push_back({{1.0}, c.zeros});
  return BlockConfiguration(space, std::move(blocks));
}

BoundedEstimate estimate_canonical(const SpaceDescriptor& space, const Canonical& c,
                                   const SearchConfig& cfg, bool maximize) {
  const auto dir =
      maximize ? BoundDirection::lower_bound_of_sup : BoundDirection::upper_bound_of_inf;
  if (c.slots.empty()) return BoundedEstimate(0.0, dir, 0, BlockConfiguration::units(c.n));
  if (cfg.lp_shortcut && lp_exponent(space)) {
    std::vector<Run> runs;
    for (const Slot& s : c.slots) {
      if (!runs.empty() && runs.back().value == s.coef)
        runs.back().count += s.count;
      else
        runs.push_back({s.coef, s.count});
    }
    return BoundedEstimate(norm_runs(space, runs), dir, 1, BlockConfiguration::units(c.n));
  }
  auto r = search(space, c, cfg, maximize);
  return BoundedEstimate(r.value, dir, r.evals, make_witness(space, c, r.lengths, r.params));
}

// Min over uniform-length, uniform-ratio shapes with one shape per group of
// equal coefficients; a cheap upper bound of Phi_n.
struct Cheap {
  double value;
  std::uint64_t evals;
};

Cheap cheap_phi(const SpaceDescriptor& space, std::span<const double> part,
                const SearchConfig& cfg) {
  const auto c = canonicalize(part, cfg, true);
  if (c.slots.empty()) return {0.0, 0};
  Evaluator ev(space, c);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  for (std::size_t L = 1; L <= cfg.L_max; ++L) {
    const Tuple t(c.slots.size(), L);
    for (double rho : kScreenRatios) {
      best = std::min(best, ev.eval_uniform(t, rho));
      ++evals;
      if (L == 1) break;
    }
  }
  return {best, evals};
}

// Stirling numbers of the second kind, saturating above cap.
std::size_t partition_count(std::size_t n, std::size_t k_max, std::size_t cap) {
  std::vector<double> s(k_max + 1, 0.0);
  s[0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = std::min(i, k_max); k >= 1; --k) s[k] = double(k) * s[k] + s[k - 1];
    s[0] = 0.0;
  }
  double total = 0.0;
  for (std::size_t k = 2; k <= k_max; ++k) total += s[k];
  return total > double(cap) ? cap + 1 : static_cast<std::size_t>(total);
}

using Labels = std::vector<std::size_t>;

Labels relabel(const Labels& l) {
  Labels out(l.size());
  std::vector<std::size_t> map(l.size() + 1, std::size_t(-1));
  std::size_t next = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (map[l[i]] == std::size_t(-1)) map[l[i]] = next++;
    out[i] = map[l[i]];
  }
  return out;
}

std::vector<Labels> enumerate_partitions(std::size_t n, const SearchConfig& cfg) {
  const std::size_t k_max = cfg.K_max, cap = cfg.enumeration_cap;
  std::set<Labels> out;
  if (partition_count(n, k_max, cap) <= cap) {
    // Restricted growth strings, excluding the single-group one.
    Labels l(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t m) {
      if (i == n) {
        if (m > 1) out.insert(l);
        return;
      }
      for (std::size_t v = 0; v <= std::min(m, k_max - 1); ++v) {
        l[i] = v;
        rec(i + 1, std::max(m, v + 1));
      }
    };
    l[0] = 0;
    rec(1, 1);
    return {out.begin(), out.end()};
  }
  std::mt19937_64 rng(task_seed(cfg.seed, 0x7061727473ull, n));
  std::uniform_int_distribution<std::size_t> pick(0, k_max - 1);
  for (std::size_t attempt = 0; out.size() < cap && attempt < 8 * cap; ++attempt) {
    Labels l(n);
    for (auto& v : l) v = pick(rng);
    l = relabel(l);
    if (*std::max_element(l.begin(), l.end()) > 0) out.insert(std::move(l));
  }
  return {out.begin(), out.end()};
}

struct ContinuousData {
  const SpaceDescriptor* space;
  const SearchConfig* cfg;
  std::span<const double> a;
  std::size_t k;
  std::uint64_t evals = 0;
  std::uint64_t inner = 0;
  double best;
  std::vector<std::vector<double>> best_parts;
};

std::vector<std::vector<double>> parts_from(const gsl_vector* v, std::span<const double> a,
                                            std::size_t k) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> parts(k, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += std::max(gsl_vector_get(v, j * n + i), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const double w = total > 0.0 ? std::max(gsl_vector_get(v, j * n + i), 0.0) / total
                                   : 1.0 / double(k);
      parts[j][i] = w * a[i];
    }
  }
  return parts;
}

double continuous_objective(const gsl_vector* v, void* p) {
  auto* d = static_cast<ContinuousData*>(p);
  auto parts = parts_from(v, d->a, d->k);
  double total = 0.0;
  for (const auto& part : parts) {
    const auto ch = cheap_phi(*d->space, part, *d->cfg);
    total += ch.value;
    d->inner += ch.evals;
  }
  ++d->evals;
  if (total < d->best) {
    d->best = total;
    d->best_parts = std::move(parts);
  }
  return total;
}

}  // namespace

std::string to_string(BoundDirection d) {
  return d == BoundDirection::lower_bound_of_sup ? "lower_bound_of_sup"
                                                 : "upper_bound_of_inf";
}

double BoundedEstimate::lower_bound_of_sup() const {
  if (direction_ != BoundDirection::lower_bound_of_sup)
    throw std::logic_error("estimate is an upper bound of an infimum, not a lower bound of a supremum");
  return value_;
}

double BoundedEstimate::upper_bound_of_inf() const {
  if (direction_ != BoundDirection::upper_bound_of_inf)
    throw std::logic_error("estimate is a lower bound of a supremum, not an upper bound of an infimum");
  return value_;
}

BlockConfiguration::BlockConfiguration(const SpaceDescriptor& space, std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  for (const Block& b : blocks_) {
    if (b.entries.empty() || b.repeat == 0)
      throw std::invalid_argument("block configuration: empty block");
    for (std::size_t k = 0; k < b.entries.size(); ++k) {
      if (!(b.entries[k] > 0.0) || !std::isfinite(b.entries[k]))
        throw std::invalid_argument("block configuration: entries must be positive");
      if (k > 0 && b.entries[k] > b.entries[k - 1])
        throw std::invalid_argument("block configuration: entries must be nonincreasing");
    }
    if (std::fabs(norm_sorted(space, b.entries) - 1.0) > kBlockNormTol)
      throw std::invalid_argument("block configuration: block is not normalized");
    size_ += b.repeat;
  }
}

BlockConfiguration BlockConfiguration::normalized(const SpaceDescriptor& space,
                                                  std::vector<Block> shapes) {
  for (Block& b : shapes) {
    const auto r = rearrange(b.entries);
    const double nb = norm_sorted(space, r.entries());
    if (!(nb > 0.0)) throw std::invalid_argument("block configuration: zero block");
    b.entries.assign(r.entries().begin(), r.entries().end());
    for (double& x : b.entries) x /= nb;
  }
  return BlockConfiguration(space, std::move(shapes));
}

BlockConfiguration BlockConfiguration::units(std::size_t n) {
  BlockConfiguration c;
  if (n > 0) c.blocks_.push_back({{1.0}, n});
  c.size_ = n;
  return c;
}

std::size_t BlockConfiguration::max_length() const noexcept {
  std::size_t m = 0;
  for (const Block& b : blocks_) m = std::max(m, b.entries.size());
  return m;
}

double eval_combination(const SpaceDescriptor& space, std::span<const double> a,
                        const BlockConfiguration& cfg) {
  if (a.size() != cfg.size())
    throw std::invalid_argument("eval_combination: " + std::to_string(a.size()) +
                                " coefficients for " + std::to_string(cfg.size()) +
                                " blocks");
  std::vector<Run> terms;
  std::size_t i = 0;
  for (const Block& b : cfg.blocks()) {
    std::size_t end = i + b.repeat;
    while (i < end) {
      // Consecutive equal coefficients sharing the block contribute one run each.
      const double c = std::fabs(a[i]);
      std::size_t j = i + 1;
      while (j < end && std::fabs(a[j]) == c) ++j;
      if (c > 0.0)
        for (double x : b.entries) terms.push_back({c * x, j - i});
      i = j;
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const Run& x, const Run& y) { return x.value > y.value; });
  std::vector<Run> runs;
  for (const Run& t : terms) {
    if (!runs.empty() && runs.back().value == t.value)
      runs.back().count += t.count;
    else
      runs.push_back(t);
  }
  return norm_runs(space, runs);
}

void validate(const SearchConfig& cfg) {
  if (cfg.L_max < 1 || cfg.K_max < 1 || cfg.restarts < 1 || cfg.max_evals < 1 ||
      cfg.enumeration_cap < 1 || cfg.refine_top < 1)
    throw std::invalid_argument("search config: caps must be >= 1");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0))
    throw std::invalid_argument("search config: tol must lie in (0,1)");
}

std::optional<double> lp_exponent(const SpaceDescriptor& space) {
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
      return space.p();
    case SpaceDescriptor::Family::Lpq:
      if (space.p() == space.q()) return space.p();
      return std::nullopt;
    case SpaceDescriptor::Family::LorentzLambda:
      if (space.degenerate()) return space.q();
      return std::nullopt;
    case SpaceDescriptor::Family::Orlicz:
      if (space.orlicz_function().kind() == OrliczGenerator::Kind::Power)
        return space.orlicz_function().p();
      return std::nullopt;
  }
  return std::nullopt;
}

BoundedEstimate upper_norm_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                                    const SearchConfig& cfg) {
  validate(cfg);
  return estimate_canonical(space, canonicalize(a.entries(), cfg), cfg, true);
}

BoundedEstimate phi_n_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                               const SearchConfig& cfg) {
  validate(cfg);
  return estimate_canonical(space, canonicalize(a.entries(), cfg), cfg, false);
}

BoundedEstimate lower_norm_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                                    const SearchConfig& cfg) {
  validate(cfg);
  const auto sorted = rearrange(a);
  std::vector<double> full(sorted.entries().begin(), sorted.entries().end());
  const std::size_t n = full.size();
  std::size_t nz = 0;
  while (nz < n && full[nz] > 0.0) ++nz;
  const std::span<const double> nonzero(full.data(), nz);

  auto pad = [n](std::vector<double> v) {
    v.resize(n, 0.0);
    return v;
  };

  const auto k1 = phi_n_estimate(space, FiniteSeq(full), cfg);
  double best = k1.upper_bound_of_inf();
  std::uint64_t evals = k1.evaluations();
  Decomposition witness{{full}, {best}};
  if (nz < 2 || cfg.K_max < 2 || (cfg.lp_shortcut && lp_exponent(space)))
    return BoundedEstimate(best, BoundDirection::upper_bound_of_inf, evals, witness);

  // Full evaluation of a decomposition: a search per part.
  auto full_value = [&](const std::vector<std::vector<double>>& parts) {
    Decomposition d;
    double total = 0.0;
    for (const auto& part : parts) {
      if (*std::max_element(part.begin(), part.end()) <= 0.0) continue;
      const auto e = phi_n_estimate(space, FiniteSeq(pad(part)), cfg);
      evals += e.evaluations();
      d.parts.push_back(pad(part));
      d.part_values.push_back(e.upper_bound_of_inf());
      total += e.upper_bound_of_inf();
    }
    if (total < best) {
      best = total;
      witness = std::move(d);
    }
  };

  // Support partitions.
  std::vector<std::vector<std::vector<double>>> top_parts;
  Labels best_labels(nz, 0);
  if (nz <= cfg.partition_n_max) {
    const auto partitions = enumerate_partitions(nz, cfg);
    auto split = [&](const Labels& l) {
      const std::size_t k = *std::max_element(l.begin(), l.end()) + 1;
      std::vector<std::vector<double>> parts(k, std::vector<double>(nz, 0.0));
      for (std::size_t i = 0; i < nz; ++i) parts[l[i]][i] = nonzero[i];
      return parts;
    };
    struct Screened {
      double value;
      std::uint64_t evals;
    };
    const auto screened = parallel_map<Screened>(
        partitions.size(),
        [&](std::size_t i) {
          Screened s{0.0, 0};
          for (const auto& part : split(partitions[i])) {
            const auto ch = cheap_phi(space, part, cfg);
            s.value += ch.value;
            s.evals += ch.evals;
          }
          return s;
        },
        cfg.exec);
    std::vector<std::size_t> order(partitions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return screened[x].value < screened[y].value;
    });
    for (const auto& s : screened) evals += s.evals;
    if (!order.empty()) best_labels = partitions[order[0]];
    for (std::size_t r = 0; r < std::min(cfg.refine_top, order.size()); ++r)
      full_value(split(partitions[order[r]]));
  }

  // Continuous nonnegative parts theta_k * a with sum_k theta_k = 1.
  const std::size_t k = cfg.K_max;
  struct ContinuousResult {
    double value;
    std::vector<std::vector<double>> parts;
    std::uint64_t evals;
  };
  const auto cont = parallel_map<ContinuousResult>(
      cfg.restarts,
      [&](std::size_t r) {
        std::vector<double> start(k * nz, 0.0);
        if (r == 0) {
          for (std::size_t i = 0; i < nz; ++i) start[std::min(best_labels[i], k - 1) * nz + i] = 1.0;
        } else {
          std::mt19937_64 rng(task_seed(cfg.seed, 0x6C6F776572ull, r));
          std::uniform_real_distribution<double> u(0.0, 1.0);
          for (auto& x : start) x = u(rng);
        }
        ContinuousData data{&space, &cfg, nonzero, k, 0, 0,
                            std::numeric_limits<double>::infinity(), {}};
        run_simplex(&continuous_objective, &data, start, cfg.max_evals, cfg.tol, data.evals);
        return ContinuousResult{data.best, std::move(data.best_parts), data.inner};
      },
      cfg.exec);
  std::size_t best_r = 0;
  for (std::size_t r = 0; r < cont.size(); ++r) {
    evals += cont[r].evals;
    if (cont[r].value < cont[best_r].value) best_r = r;
  }
  if (!cont.empty() && !cont[best_r].parts.empty()) full_value(cont[best_r].parts);

  return BoundedEstimate(best, BoundDirection::upper_bound_of_inf, evals, std::move(witness));
}

std::pair<double, double> brute_force_oracle(const SpaceDescriptor& space, const FiniteSeq& a,
                                             const OracleCaps& caps) {
  if (a.size() > 3 || caps.L_max < 1 || caps.L_max > 2 || caps.resolution < 1 ||
      caps.resolution > 50)
    throw std::invalid_argument("brute_force_oracle: requires n <= 3, L_max <= 2, resolution <= 50");
  std::vector<std::vector<double>> shapes{{1.0}};
  if (caps.L_max == 2)
    for (std::size_t j = 1; j <= caps.resolution; ++j)
      shapes.push_back({1.0, double(j) / double(caps.resolution)});
  for (auto& s : shapes) {
    const double nb = norm(space, s);
    for (double& x : s) x /= nb;
  }
  const std::size_t n = a.size(), m = shapes.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  std::vector<double> combined;
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rest = t;
    combined.clear();
    for (std::size_t i = 0; i < n; ++i, rest /= m)
      for (double x : shapes[rest % m]) combined.push_back(a[i] * x);
    const double v = norm(space, combined);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return {hi, lo};
}

std::vector<OptimalRow> optimal_fundamental(const SpaceDescriptor& space,
                                            std::span<const std::uint64_t> ns,
                                            const SearchConfig& cfg) {
  validate(cfg);
  std::vector<OptimalRow> rows;
  for (std::uint64_t n : ns) {
    if (n == 0) throw std::invalid_argument("optimal_fundamental: n must be >= 1");
    const auto c = ones_canonical(n, cfg);
    const auto up = estimate_canonical(space, c, cfg, true);
    const auto lo = estimate_canonical(space, c, cfg, false);
    rows.push_back({n, up.lower_bound_of_sup(), lo.upper_bound_of_inf(),
                    up.evaluations() + lo.evaluations()});
  }
  return rows;
}

}  // namespace optseq
