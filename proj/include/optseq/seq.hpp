#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace optseq {

class WeightGenerator;

// A finite real sequence; every entry finite, length at least one.
class FiniteSeq {
 public:
  explicit FiniteSeq(std::vector<double> entries);
  FiniteSeq(std::initializer_list<double> entries);

  static FiniteSeq ones(std::size_t n);
  static FiniteSeq unit(std::size_t n, std::size_t k);

  std::span<const double> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }

  bool operator==(const FiniteSeq&) const = default;

 private:
  std::vector<double> entries_;
};

// Nonnegative, nonincreasing entries.  Only produced by `rearrange` and
// `top_k_products`.
class RearrangedSeq {
 public:
  std::span<const double> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  FiniteSeq to_finite() const { return FiniteSeq(entries_); }

  bool operator==(const RearrangedSeq&) const = default;

 private:
  friend RearrangedSeq rearrange(std::span<const double> a);
  friend RearrangedSeq top_k_products(const WeightGenerator& w, std::size_t k,
                                      std::size_t cap);
  explicit RearrangedSeq(std::vector<double> entries)
      : entries_(std::move(entries)) {}
  std::vector<double> entries_;
};

inline constexpr std::size_t kDefaultTensorCap = std::size_t{1} << 24;
inline constexpr std::size_t kDefaultTopKCap = std::size_t{1} << 24;

// |a| sorted nonincreasing; ties keep their original order.
RearrangedSeq rearrange(std::span<const double> a);
inline RearrangedSeq rearrange(const FiniteSeq& a) { return rearrange(a.entries()); }

// (a_i b_j) in row-major order.
FiniteSeq tensor(const FiniteSeq& a, const FiniteSeq& b,
                 std::size_t cap = kDefaultTensorCap);

// Sum of a_i times b shifted to offset (i-1)n, both padded to a common
// length n.  Same multiset as `tensor` plus zeros.
FiniteSeq tensor_blocks(const FiniteSeq& a, const FiniteSeq& b,
                        std::size_t cap = kDefaultTensorCap);

// The k largest values of {w_i w_j : i, j >= 1}, nonincreasing.  Best-first
// expansion over the product grid from (1,1); relies on w nonincreasing.
RearrangedSeq top_k_products(const WeightGenerator& w, std::size_t k,
                             std::size_t cap = kDefaultTopKCap);

double sum_abs(std::span<const double> a);
double max_abs(std::span<const double> a);

}  // namespace optseq
