#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace optseq {

// Lorentz weight sequence w_1 = 1 >= w_2 >= ... > 0 together with its
// partial sums S_n.  Closed-form kinds accept arbitrarily large n (passed as
// an integer-valued double); Explicit weights are finite.
class WeightGenerator {
 public:
  enum class Kind { PowerAlpha, InvLog, Constant, Explicit };

  // w_k = k^alpha - (k-1)^alpha, S_n = n^alpha; alpha in (0,1).
  static WeightGenerator power_alpha(double alpha);
  // w_1 = w_2 = 1, w_k = 1/log k for k >= 3.
  static WeightGenerator inv_log();
  // w_k = 1.  Degenerate: lambda_q(1) = l_q.
  static WeightGenerator constant();
  static WeightGenerator explicit_weights(std::vector<double> w);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  std::span<const double> explicit_values() const;
  bool degenerate() const noexcept { return kind_ == Kind::Constant; }

  // Number of defined weights; empty for the infinite kinds.
  std::optional<std::uint64_t> length() const;

  // w_k, k >= 1.
  double weight(std::uint64_t k) const;

  // S_n for integer-valued n >= 1.  Throws ResourceLimitError beyond the
  // defined range (Explicit) or when the result is not representable.
  double partial_sum(double n) const;

  bool operator==(const WeightGenerator& other) const;

 private:
  WeightGenerator(Kind kind, double alpha,
                  std::shared_ptr<const std::vector<double>> values,
                  std::shared_ptr<const std::vector<double>> prefix)
      : kind_(kind), alpha_(alpha), values_(std::move(values)),
        prefix_(std::move(prefix)) {}

  Kind kind_;
  double alpha_ = 0.0;
  std::shared_ptr<const std::vector<double>> values_;  // Explicit only
  std::shared_ptr<const std::vector<double>> prefix_;  // memoized S_n, n >= 1
};

// Exact accumulation range for the InvLog table; beyond it S_n is evaluated
// by Euler-Maclaurin.
inline constexpr std::uint64_t kInvLogTableSize = std::uint64_t{1} << 16;

}  // namespace optseq
