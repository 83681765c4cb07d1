#include "optseq/fundidx.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "optseq/errors.hpp"

namespace optseq {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

IndexEstimate make_estimate(double raw, IndexMethod method, double residual,
                            std::map<std::string, std::uint64_t> caps) {
  IndexEstimate e;
  e.unclamped = raw;
  e.value = std::isnan(raw) ? 0.0 : std::clamp(raw, 0.0, 1.0);
  e.method = method;
  e.residual = residual;
  e.caps = std::move(caps);
  return e;
}

// Dense m <= m_cap, then m = 2^j up to tail_log2, keeping m * 2^dilation_log2
// well inside the double range.
std::vector<double> m_values(std::uint64_t m_cap, unsigned tail_log2, double dilation_log2) {
  if (m_cap == 0) throw std::invalid_argument("m_cap must be >= 1");
  const double room = 1000.0 - std::ceil(dilation_log2);
  if (room > 0.0 && tail_log2 > room) tail_log2 = unsigned(room);
  std::vector<double> ms;
  ms.reserve(m_cap + tail_log2);
  for (std::uint64_t m = 1; m <= m_cap; ++m) ms.push_back(double(m));
  for (unsigned j = 0; j <= tail_log2; ++j) {
    const double m = std::ldexp(1.0, int(j));
    if (m > double(m_cap)) ms.push_back(m);
  }
  return ms;
}

struct Curves {
  std::vector<double> log2_m0;    // index n-1 holds log2 M0(2^n)
  std::vector<double> log2_minf;
};

// Per m, ln phi(m 2^n) for n = 0..n_cap; then the sups over m per n.
template <class LogPhi>
Curves dilation_curves(LogPhi&& log_phi, const std::vector<double>& ms,
                       unsigned n_cap, Exec exec) {
  const auto rows = parallel_map<std::vector<double>>(
      ms.size(),
      [&](std::size_t i) {
        std::vector<double> row(n_cap + 1);
        for (unsigned n = 0; n <= n_cap; ++n)
          row[n] = log_phi(std::ldexp(ms[i], int(n)));
        return row;
      },
      exec);
  Curves c{std::vector<double>(n_cap, -kInf), std::vector<double>(n_cap, -kInf)};
  for (const auto& row : rows)
    for (unsigned n = 1; n <= n_cap; ++n) {
      c.log2_m0[n - 1] = std::max(c.log2_m0[n - 1], (row[0] - row[n]) / kLn2);
      c.log2_minf[n - 1] = std::max(c.log2_minf[n - 1], (row[n] - row[0]) / kLn2);
    }
  return c;
}

IndexPair indices_from_curves(const Curves& c, const IndexOptions& opts) {
  const std::size_t window = (opts.n_cap + 1) / 2;
  const std::size_t start = opts.n_cap - window;
  std::vector<double> x;
  for (std::size_t i = start; i < opts.n_cap; ++i) x.push_back(double(i + 1));
  const std::span<const double> y0(c.log2_m0.data() + start, window);
  const std::span<const double> yi(c.log2_minf.data() + start, window);
  const auto f0 = fit_slope(x, y0);
  const auto fi = fit_slope(x, yi);
  const std::map<std::string, std::uint64_t> caps{
      {"n_cap", opts.n_cap}, {"m_cap", opts.m_cap}, {"tail_log2", opts.tail_log2}};
  return {make_estimate(-f0.slope, IndexMethod::slope_regression, f0.residual, caps),
          make_estimate(fi.slope, IndexMethod::slope_regression, fi.residual, caps)};
}

void check_index_options(const IndexOptions& opts) {
  if (opts.n_cap < 4) throw std::invalid_argument("n_cap must be >= 4");
  if (opts.m_cap < 1) throw std::invalid_argument("m_cap must be >= 1");
}

struct LevelExtremes {
  std::vector<double> lo;  // E(k)
  std::vector<double> hi;  // D(k)
};

LevelExtremes orlicz_levels(const OrliczGenerator& n, unsigned grid, unsigned levels,
                            double depth, Exec exec) {
  std::vector<double> xs(grid);
  for (unsigned i = 0; i < grid; ++i) xs[i] = -depth * double(i) / double(grid - 1);
  std::vector<double> base(grid);
  for (unsigned i = 0; i < grid; ++i) base[i] = n.log_value(xs[i]);
  const auto rows = parallel_map<std::pair<double, double>>(
      levels,
      [&](std::size_t k0) {
        const double shift = -double(k0 + 1) * kLn2;
        double lo = kInf, hi = -kInf;
        for (unsigned i = 0; i < grid; ++i) {
          const double r = (n.log_value(xs[i] + shift) - base[i]) / kLn2;
          if (std::isnan(r)) continue;
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        return std::make_pair(lo, hi);
      },
      exec);
  LevelExtremes e;
  for (const auto& [lo, hi] : rows) {
    e.lo.push_back(lo);
    e.hi.push_back(hi);
  }
  return e;
}

std::pair<double, double> orlicz_slopes(const OrliczGenerator& n, unsigned grid,
                                        unsigned levels, double depth, Exec exec,
                                        double& res_mu, double& res_nu) {
  const auto e = orlicz_levels(n, grid, levels, depth, exec);
  const std::size_t window = (levels + 1) / 2, start = levels - window;
  std::vector<double> x;
  for (std::size_t k = start; k < levels; ++k) x.push_back(double(k + 1));
  const auto fl = fit_slope(x, std::span<const double>(e.lo.data() + start, window));
  const auto fh = fit_slope(x, std::span<const double>(e.hi.data() + start, window));
  res_mu = fl.residual;
  res_nu = fh.residual;
  auto inv = [](double slope) { return slope < 0.0 ? -1.0 / slope : kInf; };
  return {inv(fl.slope), inv(fh.slope)};
}

}  // namespace

std::string to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::closed_form:
      return "closed_form";
    case IndexMethod::slope_regression:
      return "slope_regression";
    case IndexMethod::grid_extremum:
      return "grid_extremum";
  }
  return "unknown";
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two paired points");
  const auto rows = Eigen::Index(x.size());
  const bool with_log = x.size() >= 4;
  Eigen::MatrixXd a(rows, with_log ? 3 : 2);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    a(i, 0) = x[i];
    a(i, 1) = 1.0;
    if (with_log) a(i, 2) = std::log2(x[i]);
    b(i) = y[i];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd r = a * coef - b;
  return {coef(0), std::sqrt(r.squaredNorm() / double(rows))};
}

double fundamental_function(const SpaceDescriptor& space, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fundamental_function: n must be >= 1");
  const double nd = double(n);
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
    case SpaceDescriptor::Family::Lpq:
      return std::isinf(space.p()) ? 1.0 : std::pow(nd, 1.0 / space.p());
    case SpaceDescriptor::Family::LorentzLambda:
      return std::pow(space.weights().partial_sum(nd), 1.0 / space.q());
    case SpaceDescriptor::Family::Orlicz:
      return 1.0 / space.orlicz_function().inverse(1.0 / nd);
  }
  throw InternalError("unknown space family");
}

double log_fundamental_function(const SpaceDescriptor& space, double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("log_fundamental_function: n must be >= 1");
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
    case SpaceDescriptor::Family::Lpq:
      return std::isinf(space.p()) ? 0.0 : std::log(n) / space.p();
    case SpaceDescriptor::Family::LorentzLambda:
      return std::log(space.weights().partial_sum(n)) / space.q();
    case SpaceDescriptor::Family::Orlicz:
      return -space.orlicz_function().log_inverse(-std::log(n));
  }
  throw InternalError("unknown space family");
}

double fundamental_function_direct(const SpaceDescriptor& space, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fundamental_function: n must be >= 1");
  const Run run{1.0, static_cast<std::size_t>(n)};
  return norm_runs(space, std::span<const Run>(&run, 1));
}

Dilation dilation_functions(const SpaceDescriptor& space, std::uint64_t n,
                            std::uint64_t m_cap, const DilationOptions& opts) {
  if (n == 0) throw std::invalid_argument("dilation_functions: n must be >= 1");
  const auto ms = m_values(m_cap, opts.tail_log2, std::log2(double(n)));
  const double nd = double(n);
  const auto rows = parallel_map<std::pair<double, double>>(
      ms.size(),
      [&](std::size_t i) {
        const double mn = ms[i] * nd;
        if (!std::isfinite(mn)) throw ResourceLimitError("dilation: m*n overflows");
        return std::make_pair(log_fundamental_function(space, ms[i]),
                              log_fundamental_function(space, mn));
      },
      opts.exec);
  double l0 = -kInf, li = -kInf;
  for (const auto& [a, b] : rows) {
    l0 = std::max(l0, a - b);
    li = std::max(li, b - a);
  }
  return {std::exp(l0), std::exp(li)};
}

IndexPair fundamental_indices(const SpaceDescriptor& space, const IndexOptions& opts) {
  check_index_options(opts);
  const auto ms = m_values(opts.m_cap, opts.tail_log2, opts.n_cap);
  const auto curves = dilation_curves(
      [&](double x) { return log_fundamental_function(space, x); }, ms, opts.n_cap,
      opts.exec);
  return indices_from_curves(curves, opts);
}

IndexPair lorentz_indices(double q, const WeightGenerator& w, const IndexOptions& opts) {
  check_index_options(opts);
  if (!(q >= 1.0) || std::isinf(q))
    throw std::invalid_argument("lorentz_indices: q must satisfy 1 <= q < inf");
  const auto js = m_values(opts.m_cap, opts.tail_log2, opts.n_cap);
  // (S_{2^n j} / S_j)^{1/q} in log form.
  const auto curves = dilation_curves(
      [&](double j) { return std::log(w.partial_sum(j)) / q; }, js, opts.n_cap, opts.exec);
  return indices_from_curves(curves, opts);
}

IndexPair orlicz_indices(const OrliczGenerator& n, const OrliczIndexOptions& opts) {
  if (opts.grid < 100) throw std::invalid_argument("orlicz_indices: grid must be >= 100");
  // Closed-form log values allow depth far below the double range of t;
  // numerically conjugated functions stop at s, t >= 1e-8.
  unsigned levels = opts.levels;
  double depth = 8.0 * double(levels) * kLn2;
  if (!n.has_closed_log()) {
    depth = std::log(1e8);
    levels = unsigned(std::floor(depth / kLn2));
  }
  if (levels < 4) throw std::invalid_argument("orlicz_indices: levels must be >= 4");
  double rm1, rn1, rm2, rn2;
  const auto coarse = orlicz_slopes(n, opts.grid, levels, depth, opts.exec, rm1, rn1);
  const auto fine = orlicz_slopes(n, 2 * opts.grid, levels, depth, opts.exec, rm2, rn2);
  const std::map<std::string, std::uint64_t> caps{{"grid", opts.grid}, {"levels", levels}};
  const double dmu = std::fabs(fine.first - coarse.first);
  const double dnu = std::fabs(fine.second - coarse.second);
  return {make_estimate(fine.first, IndexMethod::grid_extremum,
                        std::isnan(dmu) ? 0.0 : dmu, caps),
          make_estimate(fine.second, IndexMethod::grid_extremum,
                        std::isnan(dnu) ? 0.0 : dnu, caps)};
}

std::optional<IndexPair> closed_form_indices(const SpaceDescriptor& space) {
  auto exact = [](double v) {
    return IndexPair{make_estimate(v, IndexMethod::closed_form, 0.0, {}),
                     make_estimate(v, IndexMethod::closed_form, 0.0, {})};
  };
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
    case SpaceDescriptor::Family::Lpq:
      return exact(std::isinf(space.p()) ? 0.0 : 1.0 / space.p());
    case SpaceDescriptor::Family::LorentzLambda: {
      const auto& w = space.weights();
      if (w.kind() == WeightGenerator::Kind::PowerAlpha) return exact(w.alpha() / space.q());
      if (w.kind() == WeightGenerator::Kind::Constant) return exact(1.0 / space.q());
      return std::nullopt;
    }
    case SpaceDescriptor::Family::Orlicz:
      if (auto p = space.orlicz_function().index_exponent()) return exact(1.0 / *p);
      return std::nullopt;
  }
  return std::nullopt;
}

GroblerDodds grobler_dodds(const SpaceDescriptor& space, const IndexOptions& idx,
                           const OrliczIndexOptions& orl) {
  GroblerDodds g;
  auto recip = [](double v) { return v > 0.0 ? 1.0 / v : kInf; };
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
      g.delta = g.sigma = space.p();
      g.note = "closed form: (p, p)";
      return g;
    case SpaceDescriptor::Family::Lpq:
      g.delta = std::min(space.p(), space.q());
      g.sigma = std::max(space.p(), space.q());
      g.note = "closed form: (min(p,q), max(p,q))";
      return g;
    case SpaceDescriptor::Family::LorentzLambda: {
      g.delta = space.q();
      const auto cf = closed_form_indices(space);
      const auto mu = cf ? cf->mu : lorentz_indices(space.q(), space.weights(), idx).mu;
      g.sigma = recip(mu.value);
      g.sigma_closed_form = bool(cf);
      g.note = cf ? "closed form: (q, 1/mu)" : "delta closed form q; sigma = 1/mu estimated";
      return g;
    }
    case SpaceDescriptor::Family::Orlicz: {
      const auto cf = closed_form_indices(space);
      const auto ix = cf ? *cf : orlicz_indices(space.orlicz_function(), orl);
      g.delta = recip(ix.nu.value);
      g.sigma = recip(ix.mu.value);
      g.delta_closed_form = g.sigma_closed_form = bool(cf);
      g.note = cf ? "closed form: (1/nu, 1/mu)" : "estimated: (1/nu, 1/mu)";
      return g;
    }
  }
  throw InternalError("unknown space family");
}

}  // namespace optseq
