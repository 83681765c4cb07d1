#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "optseq/parallel.hpp"
#include "optseq/space.hpp"

namespace optseq {

// One normalized block: positive nonincreasing entries with norm 1.
// `repeat` consecutive coefficients share the block (each on its own
// disjoint index range).
struct Block {
  std::vector<double> entries;
  std::size_t repeat = 1;
  bool operator==(const Block&) const = default;
};

// n pairwise disjoint normalized blocks in canonical (rearranged) form.
class BlockConfiguration {
 public:
  // Validates positivity, monotonicity and |norm - 1| <= 1e-9.
  BlockConfiguration(const SpaceDescriptor& space, std::vector<Block> blocks);
  // Scales each shape to norm 1 first.
  static BlockConfiguration normalized(const SpaceDescriptor& space,
                                       std::vector<Block> shapes);
  // n blocks of length one.
  static BlockConfiguration units(std::size_t n);

  std::span<const Block> blocks() const noexcept { return blocks_; }
  // Number of blocks counting repeats.
  std::size_t size() const noexcept { return size_; }
  std::size_t max_length() const noexcept;
  bool operator==(const BlockConfiguration&) const = default;

 private:
  BlockConfiguration() = default;
  std::vector<Block> blocks_;
  std::size_t size_ = 0;
};

inline constexpr double kBlockNormTol = 1e-9;

// ||sum a_i x_i|| for the configuration's blocks x_i.
double eval_combination(const SpaceDescriptor& space, std::span<const double> a,
                        const BlockConfiguration& cfg);
inline double eval_combination(const SpaceDescriptor& space, const FiniteSeq& a,
                               const BlockConfiguration& cfg) {
  return eval_combination(space, a.entries(), cfg);
}

enum class BoundDirection { lower_bound_of_sup, upper_bound_of_inf };
std::string to_string(BoundDirection d);

// a = sum_k parts[k]; value = sum_k part_values[k].
struct Decomposition {
  std::vector<std::vector<double>> parts;
  std::vector<double> part_values;
  bool operator==(const Decomposition&) const = default;
};

using Witness = std::variant<BlockConfiguration, Decomposition>;

// A one-sided search result.  The value is only handed out through the
// accessor matching the direction it was produced with.
class BoundedEstimate {
 public:
  BoundedEstimate(double value, BoundDirection direction, std::uint64_t evaluations,
                  Witness witness)
      : value_(value), direction_(direction), evaluations_(evaluations),
        witness_(std::move(witness)) {}

  BoundDirection direction() const noexcept { return direction_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }
  const Witness& witness() const noexcept { return witness_; }

  // Throws std::logic_error on a direction mismatch.
  double lower_bound_of_sup() const;
  double upper_bound_of_inf() const;
  // Unchecked, for reporting only.
  double reported_value() const noexcept { return value_; }

 private:
  double value_;
  BoundDirection direction_;
  std::uint64_t evaluations_;
  Witness witness_;
};

struct SearchConfig {
  std::size_t L_max = 6;
  std::size_t K_max = 2;
  std::size_t restarts = 8;
  std::size_t max_evals = 500;       // per restart
  double tol = 1e-7;                 // relative simplex size at convergence
  std::size_t enumeration_cap = 4096;  // length tuples / partitions before sampling
  std::size_t refine_top = 4;        // screened candidates passed to the simplex search
  std::size_t partition_n_max = 12;
  // Inputs with at most this many nonzero entries get one block shape per
  // coefficient; longer inputs share one shape per group of equal values.
  std::size_t hetero_n_max = 8;
  // Spaces isometric to some l_p return ||a||_p without searching; every
  // configuration attains it.
  bool lp_shortcut = true;
  std::uint64_t seed = 20240531;
  Exec exec = Exec::parallel;
};

void validate(const SearchConfig& cfg);

BoundedEstimate upper_norm_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                                    const SearchConfig& cfg = {});
BoundedEstimate phi_n_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                               const SearchConfig& cfg = {});
BoundedEstimate lower_norm_estimate(const SpaceDescriptor& space, const FiniteSeq& a,
                                    const SearchConfig& cfg = {});

struct OracleCaps {
  std::size_t L_max = 2;
  std::size_t resolution = 50;
};

// Exhaustive grid over blocks of length <= L_max with second entry j/res;
// returns (max, min) of eval_combination.  Test use only.
std::pair<double, double> brute_force_oracle(const SpaceDescriptor& space,
                                             const FiniteSeq& a,
                                             const OracleCaps& caps = {});

struct OptimalRow {
  std::uint64_t n;
  double phi_upper;  // lower bound of phi_{X_U}(n)
  double phi_n;      // upper bound of Phi_n(1^n)
  std::uint64_t evaluations;
};

std::vector<OptimalRow> optimal_fundamental(const SpaceDescriptor& space,
                                            std::span<const std::uint64_t> ns,
                                            const SearchConfig& cfg = {});

// p when every normalized block configuration evaluates to ||a||_p
// (Lp, Lpq with p = q, constant-weight Lorentz, power Orlicz).
std::optional<double> lp_exponent(const SpaceDescriptor& space);

}  // namespace optseq
