#include "optseq/orlicz.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "optseq/errors.hpp"
#include "optseq/parallel.hpp"

namespace optseq {

struct ConjugateTable {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
  double floor;
  double step;
  double floor_value;
  double floor_slope;
  // For x >= kink the maximizer of s c e^x - M(s) is s = 1.
  double kink;
  double scale;
  // Intervals where the spline misses the midpoint check; evaluated exactly.
  std::vector<bool> exact;
  OrliczGenerator base;

  double log_value(double x) const;
};


namespace {

constexpr int kValidationPoints = 10000;
constexpr double kValidationFloorLog10 = -16.0;
constexpr int kScanPoints = 1000;
constexpr double kScanFloorLog10 = -300.0;
constexpr double kGoldenTol = 1e-10;

// Root of the increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi).
template <class F>
double solve_increasing(F f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo > 0.0 || fhi < 0.0) throw InternalError("root not bracketed");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double conjugate_scan(const OrliczGenerator& n, double t) {
  // s t - N(s) is concave in s; the scan finds the bracket around its peak.
  auto g = [&](double s) { return s * t - n(s); };
  double best = 0.0;
  int best_i = -1;
  static const std::vector<double> grid = [] {
    std::vector<double> v(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i)
      v[i] = i + 1 == kScanPoints
                 ? 1.0
                 : std::pow(10.0, kScanFloorLog10 * (1.0 - double(i) / (kScanPoints - 1)));
    return v;
  }();
  for (int i = 0; i < kScanPoints; ++i) {
    const double v = g(grid[i]);
    if (v > best) best = v, best_i = i;
  }
  if (best_i < 0) return 0.0;
  double lo = best_i == 0 ? 0.0 : grid[best_i - 1];
  double hi = best_i + 1 == kScanPoints ? 1.0 : grid[best_i + 1];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > kGoldenTol * hi) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = g(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = g(x1);
    }
  }
  return std::max({best, f1, f2});
}

// sup over s < 1 of the chord slope (1 - N(s)) / (1 - s): s = 1 maximizes
// s u - N(s) exactly when u reaches it.  Equals N'(1) for convex N.
double max_chord_slope(const OrliczGenerator& n) {
  auto slope = [&](double s) { return (1.0 - n(s)) / (1.0 - s); };
  constexpr int kPoints = 10000;
  double best = slope(0.0), lo = 0.0, hi = 0.0;
  for (int i = 1; i < kPoints; ++i) {
    const double s = double(i) / kPoints, v = slope(s);
    if (v > best) best = v, lo = double(i - 1) / kPoints, hi = double(i + 1) / kPoints;
  }
  if (hi == 0.0) return best;
  hi = std::min(hi, 1.0 - 1e-9);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = slope(x1), f2 = slope(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = slope(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = slope(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

double ConjugateTable::log_value(double x) const {
  if (x >= kink) return std::min(0.0, std::log(scale * std::exp(x) - 1.0));
  if (x < floor) return floor_value + floor_slope * (x - floor);
  const auto i = std::min(exact.size() - 1, std::size_t((x - floor) / step));
  if (exact[i]) return std::log(young_conjugate_unchecked(base, scale * std::exp(x)));
  return std::min(0.0, spline(x));
}

OrliczGenerator OrliczGenerator::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("orlicz power: p must satisfy 1 <= p < inf");
  return OrliczGenerator(Kind::Power, p, 0.0, nullptr, 1.0);
}

OrliczGenerator OrliczGenerator::power_log(double p, double a) {
  if (!(p >= 1.0) || !std::isfinite(p) || !std::isfinite(a))
    throw std::invalid_argument("orlicz powerlog: p must satisfy 1 <= p < inf");
  if (p == 1.0 && a > 0.0)
    throw std::invalid_argument("orlicz powerlog: p = 1 requires a <= 0");
  OrliczGenerator g(Kind::PowerLog, p, a, nullptr, 1.0);
  double prev = 0.0;
  for (int i = 0; i < kValidationPoints; ++i) {
    const double x = kValidationFloorLog10 * std::log(10.0) *
                     (1.0 - double(i) / (kValidationPoints - 1));
    const double v = g.log_value(x);
    if (i > 0 && v < prev)
      throw std::invalid_argument("orlicz powerlog: N is not nondecreasing for p = " +
                                  std::to_string(p) + ", a = " + std::to_string(a));
    prev = v;
  }
  return g;
}

OrliczGenerator OrliczGenerator::conjugate_of(const OrliczGenerator& base) {
  // Rescale the argument so that the conjugate takes the value 1 at 1.
  // sup_{s<=1} (2s - N(s)) >= 1, so the scale lies in (0, 2].
  const double c = solve_increasing(
      [&](double t) { return young_conjugate_unchecked(base, t) - 1.0; }, 0.0, 2.0);
  // M~(c t) = c t - 1 once c t passes every chord slope of M at 1.
  const double d1 = max_chord_slope(base);
  const double kink = c > d1 ? std::log(d1 / c) : 0.0;
  const std::size_t n = kConjugateTablePoints;
  const double h = (kink - kConjugateTableFloor) / double(n - 1);
  auto exact = [&](double x) { return std::log(young_conjugate_unchecked(base, c * std::exp(x))); };
  // Knots at even indices, interval midpoints at odd ones.
  const auto all = tabulate(2 * n - 1, [&](std::size_t i) {
    return exact(kConjugateTableFloor + 0.5 * double(i) * h);
  });
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = all[2 * i];
  // Very flat conjugates underflow near the bottom of the range; the table
  // starts a few points above the last non-finite entry and extrapolates
  // linearly in log-log coordinates below it.
  std::size_t first = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(logs[i]) || logs[i] < -700.0) first = i + 8;
  if (first + 64 > n) throw std::invalid_argument("orlicz conjugate: table underflow");
  const double floor = kConjugateTableFloor + double(first) * h;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline(logs.begin() + first,
                                                                     logs.end(), floor, h);
  constexpr double kCheckTol = 1e-10;
  constexpr std::size_t kSpread = 3;
  std::vector<bool> exact_interval(n - 1 - first, false);
  for (std::size_t i = 0; i + 1 < n - first; ++i) {
    const double mid = all[2 * (first + i) + 1];
    if (std::fabs(spline(floor + (double(i) + 0.5) * h) - mid) > kCheckTol) {
      const std::size_t lo = i >= kSpread ? i - kSpread : 0;
      const std::size_t hi = std::min(exact_interval.size() - 1, i + kSpread);
      for (std::size_t j = lo; j <= hi; ++j) exact_interval[j] = true;
    }
  }
  auto table = std::make_shared<const ConjugateTable>(
      ConjugateTable{std::move(spline), floor, h, logs[first], (logs[first + 1] - logs[first]) / h,
                     c > d1 ? kink : 1.0, c, std::move(exact_interval), base});
  return OrliczGenerator(Kind::Conjugate, 0.0, 0.0,
                         std::make_shared<const OrliczGenerator>(base), c, std::move(table));
}

double OrliczGenerator::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("orlicz function evaluated outside [0,1]");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power:
      return std::pow(t, p_);
    case Kind::PowerLog:
      return std::pow(t, p_) * std::pow(1.0 - std::log(t), a_);
    case Kind::Conjugate:
      return t == 1.0 ? 1.0 : std::exp(table_->log_value(std::log(t)));
  }
  throw InternalError("unknown orlicz kind");
}

double OrliczGenerator::log_value(double x) const {
  if (!(x <= 0.0)) throw std::domain_error("log_value: x must be <= 0");
  switch (kind_) {
    case Kind::Power:
      return p_ * x;
    case Kind::PowerLog:
      return p_ * x + a_ * std::log1p(-x);
    case Kind::Conjugate:
      return table_->log_value(x);
  }
  throw InternalError("unknown orlicz kind");
}

double OrliczGenerator::inverse(double y) const {
  if (!(y > 0.0 && y <= 1.0))
    throw std::domain_error("orlicz inverse: y must lie in (0,1]");
  if (y == 1.0) return 1.0;
  if (kind_ == Kind::Power) return std::pow(y, 1.0 / p_);
  if (kind_ == Kind::PowerLog) return std::exp(log_inverse(std::log(y)));
  return solve_increasing([&](double t) { return (*this)(t) - y; }, 0.0, 1.0);
}

double OrliczGenerator::log_inverse(double z) const {
  if (!(z <= 0.0)) throw std::domain_error("log_inverse: z must be <= 0");
  if (z == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power:
      return z / p_;
    case Kind::PowerLog: {
      double lo = z / p_ - 1.0;
      while (log_value(lo) > z) lo *= 2.0;
      return solve_increasing([&](double x) { return log_value(x) - z; }, lo, 0.0);
    }
    case Kind::Conjugate:
      return std::log(inverse(std::exp(z)));
  }
  throw InternalError("unknown orlicz kind");
}

std::optional<double> OrliczGenerator::index_exponent() const {
  switch (kind_) {
    case Kind::Power:
    case Kind::PowerLog:
      return p_;
    case Kind::Conjugate: {
      const auto q = base_->index_exponent();
      if (!q || *q <= 1.0) return std::nullopt;
      return *q / (*q - 1.0);
    }
  }
  return std::nullopt;
}

bool OrliczGenerator::operator==(const OrliczGenerator& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::Conjugate) return *base_ == *other.base_;
  return p_ == other.p_ && a_ == other.a_;
}

double young_conjugate(const OrliczGenerator& n, double t) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("young_conjugate: t must lie in (0,1]");
  return conjugate_scan(n, t);
}

double young_conjugate_unchecked(const OrliczGenerator& n, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("young_conjugate: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  return conjugate_scan(n, t);
}

}  // namespace optseq
