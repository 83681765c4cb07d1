#include "optseq/space.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "optseq/errors.hpp"

namespace optseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// hi^r - lo^r for 0 <= lo < hi, without cancellation when lo is close to hi.
double power_diff(double lo, double hi, double r) {
  if (lo == 0.0) return std::pow(hi, r);
  return -std::pow(hi, r) * std::expm1(r * std::log(lo / hi));
}

// S_hi - S_lo, with S_0 = 0.
double weight_diff(const WeightGenerator& w, double lo, double hi) {
  if (w.kind() == WeightGenerator::Kind::PowerAlpha)
    return power_diff(lo, hi, w.alpha());
  const double s_hi = w.partial_sum(hi);
  return lo == 0.0 ? s_hi : s_hi - w.partial_sum(lo);
}

double lp_runs(double p, std::span<const Run> runs) {
  const double top = runs.front().value;
  if (std::isinf(p)) return top;
  double s = 0.0;
  for (const Run& r : runs) s += double(r.count) * std::pow(r.value / top, p);
  return top * std::pow(s, 1.0 / p);
}

double lpq_runs(double p, double q, std::span<const Run> runs) {
  const double top = runs.front().value;
  double before = 0.0;
  if (std::isinf(q)) {
    // n^{1/p - 1} (A + v n) is decreasing then increasing inside a run, so the
    // supremum sits at a run endpoint.
    const double beta = 1.0 / p - 1.0;
    double partial = 0.0, best = 0.0;
    for (const Run& r : runs) {
      const double v = r.value / top;
      const double first = before + 1.0, last = before + double(r.count);
      best = std::max(best, std::pow(first, beta) * (partial + v));
      partial += v * double(r.count);
      best = std::max(best, std::pow(last, beta) * partial);
      before = last;
    }
    return top * best;
  }
  double s = 0.0;
  for (const Run& r : runs) {
    const double after = before + double(r.count);
    s += std::pow(r.value / top, q) * power_diff(before, after, q / p);
    before = after;
  }
  return top * std::pow(s, 1.0 / q);
}

double lorentz_runs(double q, const WeightGenerator& w, std::span<const Run> runs) {
  const double top = runs.front().value;
  double before = 0.0, s = 0.0;
  for (const Run& r : runs) {
    const double after = before + double(r.count);
    s += std::pow(r.value / top, q) * weight_diff(w, before, after);
    before = after;
  }
  return top * std::pow(s, 1.0 / q);
}

double modular_runs(const OrliczGenerator& n, std::span<const Run> runs, double u,
                    std::span<const double> log_values) {
  double s = 0.0;
  const bool log_form = n.kind() != OrliczGenerator::Kind::Power;
  const double log_u = log_form ? std::log(u) : 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double x = runs[i].value / u;
    if (x > 1.0) throw InternalError("luxemburg: modular evaluated outside [0,1]");
    const double nx =
        log_form ? std::exp(n.log_value(std::min(log_values[i] - log_u, 0.0))) : n(x);
    s += double(runs[i].count) * nx;
  }
  return s;
}

}  // namespace

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

SpaceDescriptor SpaceDescriptor::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp: p must satisfy 1 <= p <= inf");
  return SpaceDescriptor(Family::Lp, p, 0.0, std::monostate{});
}

SpaceDescriptor SpaceDescriptor::lpq(double p, double q) {
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("lpq: p must satisfy 1 < p < inf");
  if (!(q >= 1.0)) throw std::invalid_argument("lpq: q must satisfy 1 <= q <= inf");
  return SpaceDescriptor(Family::Lpq, p, q, std::monostate{});
}

SpaceDescriptor SpaceDescriptor::lorentz(double q, WeightGenerator w) {
  if (!(q >= 1.0) || std::isinf(q))
    throw std::invalid_argument("lorentz: q must satisfy 1 <= q < inf");
  return SpaceDescriptor(Family::LorentzLambda, 0.0, q, std::move(w));
}

SpaceDescriptor SpaceDescriptor::orlicz(OrliczGenerator n) {
  return SpaceDescriptor(Family::Orlicz, 0.0, 0.0, std::move(n));
}

const WeightGenerator& SpaceDescriptor::weights() const {
  if (family_ != Family::LorentzLambda)
    throw std::invalid_argument("space has no Lorentz weights");
  return std::get<WeightGenerator>(gen_);
}

const OrliczGenerator& SpaceDescriptor::orlicz_function() const {
  if (family_ != Family::Orlicz)
    throw std::invalid_argument("space has no Orlicz function");
  return std::get<OrliczGenerator>(gen_);
}

bool SpaceDescriptor::degenerate() const noexcept {
  return family_ == Family::LorentzLambda &&
         std::get<WeightGenerator>(gen_).degenerate();
}

SpaceDescriptor SpaceDescriptor::with_bisection_tol(double tol) const {
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("bisection tolerance must lie in (0, 1)");
  SpaceDescriptor s = *this;
  s.bisection_tol_ = tol;
  return s;
}

bool SpaceDescriptor::operator==(const SpaceDescriptor& other) const {
  return family_ == other.family_ && p_ == other.p_ && q_ == other.q_ &&
         gen_ == other.gen_;
}

std::vector<Run> to_runs(std::span<const double> sorted) {
  std::vector<Run> runs;
  for (double x : sorted) {
    if (x == 0.0) break;
    if (!runs.empty() && runs.back().value == x)
      ++runs.back().count;
    else
      runs.push_back({x, 1});
  }
  return runs;
}

double norm_runs(const SpaceDescriptor& space, std::span<const Run> runs) {
  if (runs.empty()) return 0.0;
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
      return lp_runs(space.p(), runs);
    case SpaceDescriptor::Family::Lpq:
      return lpq_runs(space.p(), space.q(), runs);
    case SpaceDescriptor::Family::LorentzLambda:
      return lorentz_runs(space.q(), space.weights(), runs);
    case SpaceDescriptor::Family::Orlicz:
      return luxemburg_runs(space.orlicz_function(), runs, space.bisection_tol());
  }
  throw InternalError("unknown space family");
}

double norm_sorted(const SpaceDescriptor& space, std::span<const double> sorted) {
  const auto runs = to_runs(sorted);
  return norm_runs(space, runs);
}

double norm(const SpaceDescriptor& space, std::span<const double> a) {
  const auto r = rearrange(a);
  return norm_sorted(space, r.entries());
}

namespace {

struct Bracket {
  double lo, hi;
  std::vector<double> logs;
};

// [max, sum] widened upward until the modular at hi is <= 1.
Bracket luxemburg_bracket(const OrliczGenerator& n, std::span<const Run> runs) {
  Bracket b{runs.front().value, 0.0, std::vector<double>(runs.size())};
  for (const Run& r : runs) b.hi += double(r.count) * r.value;
  for (std::size_t i = 0; i < runs.size(); ++i) b.logs[i] = std::log(runs[i].value);
  while (modular_runs(n, runs, b.hi, b.logs) > 1.0) {
    b.lo = b.hi;
    b.hi *= 2.0;
  }
  return b;
}

}  // namespace

double luxemburg_runs(const OrliczGenerator& n, std::span<const Run> runs, double rel_tol) {
  if (runs.empty()) return 0.0;
  if (runs.size() == 1 && runs[0].count == 1) return runs[0].value;
  auto b = luxemburg_bracket(n, runs);
  auto f = [&](double u) { return modular_runs(n, runs, u, b.logs) - 1.0; };
  const double flo = f(b.lo), fhi = f(b.hi);
  if (flo <= 0.0) return b.lo;
  if (fhi >= 0.0) return b.hi;
  std::uintmax_t iters = 400;
  const auto r = boost::math::tools::toms748_solve(
      f, b.lo, b.hi, flo, fhi,
      [rel_tol](double lo, double hi) { return hi - lo <= rel_tol * hi; }, iters);
  return 0.5 * (r.first + r.second);
}

double luxemburg_bisection(const OrliczGenerator& n, std::span<const double> a, double rel_tol) {
  const auto r = rearrange(a);
  const auto runs = to_runs(r.entries());
  if (runs.empty()) return 0.0;
  if (runs.size() == 1 && runs[0].count == 1) return runs[0].value;
  auto b = luxemburg_bracket(n, runs);
  while (b.hi - b.lo > rel_tol * b.hi) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    if (modular_runs(n, runs, mid, b.logs) > 1.0)
      b.lo = mid;
    else
      b.hi = mid;
  }
  return 0.5 * (b.lo + b.hi);
}

double luxemburg_norm(const OrliczGenerator& n, std::span<const double> a, double rel_tol) {
  const auto r = rearrange(a);
  const auto runs = to_runs(r.entries());
  return luxemburg_runs(n, runs, rel_tol);
}

double modular(const OrliczGenerator& n, std::span<const double> a, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("modular: u must be positive");
  double s = 0.0;
  for (double x : a) {
    const double t = std::fabs(x) / u;
    if (t > 1.0) throw std::domain_error("modular: |a_k| / u exceeds 1");
    s += n(t);
  }
  return s;
}

SpaceDescriptor kothe_dual(const SpaceDescriptor& space) {
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
      return SpaceDescriptor::lp(conjugate_exponent(space.p()));
    case SpaceDescriptor::Family::Lpq:
      return SpaceDescriptor::lpq(conjugate_exponent(space.p()),
                                  conjugate_exponent(space.q()));
    case SpaceDescriptor::Family::Orlicz:
      return SpaceDescriptor::orlicz(
          OrliczGenerator::conjugate_of(space.orlicz_function()));
    case SpaceDescriptor::Family::LorentzLambda:
      throw UnsupportedOperation("no Koethe dual formula for Lorentz spaces");
  }
  throw InternalError("unknown space family");
}

}  // namespace optseq
