#include "optseq/weights.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include "optseq/errors.hpp"

namespace optseq {

namespace {

std::uint64_t require_index(double n, const char* what) {
  if (!(n >= 1.0) || std::floor(n) != n || !std::isfinite(n))
    throw std::invalid_argument(std::string(what) +
                                ": index must be an integer >= 1");
  return n < 18446744073709551615.0 ? static_cast<std::uint64_t>(n)
                                    : ~std::uint64_t{0};
}

// Neumaier-compensated prefix sums of 1/log k (k >= 3), with w_1 = w_2 = 1.
std::shared_ptr<const std::vector<double>> inv_log_table() {
  static const auto table = [] {
    auto t = std::make_shared<std::vector<double>>(kInvLogTableSize + 1, 0.0);
    double s = 0.0, c = 0.0;
    for (std::uint64_t k = 1; k <= kInvLogTableSize; ++k) {
      const double x = k <= 2 ? 1.0 : 1.0 / std::log(static_cast<double>(k));
      const double u = s + x;
      c += std::fabs(s) >= std::fabs(x) ? (s - u) + x : (x - u) + s;
      s = u;
      (*t)[k] = s + c;
    }
    return std::shared_ptr<const std::vector<double>>(std::move(t));
  }();
  return table;
}

// Euler-Maclaurin tail of sum_{K0 < k <= n} 1/log k.
double inv_log_tail(double n) {
  const double k0 = static_cast<double>(kInvLogTableSize);
  auto f = [](double t) { return 1.0 / std::log(t); };
  auto f1 = [](double t) {
    const double l = std::log(t);
    return -1.0 / (t * l * l);
  };
  auto f3 = [](double t) {
    const double l = std::log(t);
    return -(2.0 * l * l + 6.0 * l + 6.0) / (t * t * t * l * l * l * l);
  };
  using boost::math::expint;
  const double integral = expint(std::log(n)) - expint(std::log(k0));
  return integral + 0.5 * (f(n) - f(k0)) + (f1(n) - f1(k0)) / 12.0 -
         (f3(n) - f3(k0)) / 720.0;
}

}  // namespace

WeightGenerator WeightGenerator::power_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("power weight: alpha must lie in (0,1)");
  return WeightGenerator(Kind::PowerAlpha, alpha, nullptr, nullptr);
}

WeightGenerator WeightGenerator::inv_log() {
  return WeightGenerator(Kind::InvLog, 0.0, nullptr, inv_log_table());
}

WeightGenerator WeightGenerator::constant() {
  return WeightGenerator(Kind::Constant, 0.0, nullptr, nullptr);
}

WeightGenerator WeightGenerator::explicit_weights(std::vector<double> w) {
  if (w.empty()) throw std::invalid_argument("explicit weights: empty list");
  if (w[0] != 1.0)
    throw std::invalid_argument("explicit weights: w_1 must equal 1");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || !(w[i] > 0.0))
      throw std::invalid_argument("explicit weights: entries must be positive");
    if (i > 0 && w[i] > w[i - 1])
      throw std::invalid_argument("explicit weights: must be nonincreasing");
  }
  auto prefix = std::make_shared<std::vector<double>>(w.size() + 1, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) (*prefix)[i + 1] = (*prefix)[i] + w[i];
  return WeightGenerator(
      Kind::Explicit, 0.0,
      std::make_shared<const std::vector<double>>(std::move(w)),
      std::move(prefix));
}

std::span<const double> WeightGenerator::explicit_values() const {
  if (kind_ != Kind::Explicit) return {};
  return *values_;
}

std::optional<std::uint64_t> WeightGenerator::length() const {
  if (kind_ == Kind::Explicit) return values_->size();
  return std::nullopt;
}

double WeightGenerator::weight(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("weight: index must be >= 1");
  switch (kind_) {
    case Kind::PowerAlpha: {
      if (k == 1) return 1.0;
      const double kd = static_cast<double>(k);
      // k^a - (k-1)^a = -k^a expm1(a log(1 - 1/k))
      return -std::pow(kd, alpha_) * std::expm1(alpha_ * std::log1p(-1.0 / kd));
    }
    case Kind::InvLog:
      return k <= 2 ? 1.0 : 1.0 / std::log(static_cast<double>(k));
    case Kind::Constant:
      return 1.0;
    case Kind::Explicit:
      if (k > values_->size())
        throw ResourceLimitError("explicit weights: index " + std::to_string(k) +
                                 " beyond defined length " +
                                 std::to_string(values_->size()));
      return (*values_)[k - 1];
  }
  throw InternalError("unknown weight kind");
}

double WeightGenerator::partial_sum(double n) const {
  const std::uint64_t k = require_index(n, "partial_sum");
  double s = 0.0;
  switch (kind_) {
    case Kind::PowerAlpha:
      s = std::pow(n, alpha_);
      break;
    case Kind::InvLog:
      s = k <= kInvLogTableSize ? (*prefix_)[k]
                                : (*prefix_)[kInvLogTableSize] + inv_log_tail(n);
      break;
    case Kind::Constant:
      s = n;
      break;
    case Kind::Explicit:
      if (k > values_->size())
        throw ResourceLimitError("explicit weights: partial sum S_" +
                                 std::to_string(k) + " beyond defined length " +
                                 std::to_string(values_->size()));
      s = (*prefix_)[k];
      break;
  }
  if (!std::isfinite(s))
    throw ResourceLimitError("partial sum not representable");
  return s;
}

bool WeightGenerator::operator==(const WeightGenerator& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::PowerAlpha:
      return alpha_ == other.alpha_;
    case Kind::Explicit:
      return *values_ == *other.values_;
    default:
      return true;
  }
}

}  // namespace optseq
