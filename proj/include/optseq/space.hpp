#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optseq/orlicz.hpp"
#include "optseq/seq.hpp"
#include "optseq/weights.hpp"

namespace optseq {

// One concrete symmetric sequence space, normalized so that phi(1) = 1.
//
//   Lp(p)             1 <= p <= inf
//   Lpq(p, q)         1 < p < inf, 1 <= q <= inf; quasi-norm when p < q
//   LorentzLambda(q, w)  1 <= q < inf
//   Orlicz(N)
class SpaceDescriptor {
 public:
  enum class Family { Lp, Lpq, LorentzLambda, Orlicz };

  static SpaceDescriptor lp(double p);
  static SpaceDescriptor lpq(double p, double q);
  static SpaceDescriptor lorentz(double q, WeightGenerator w);
  static SpaceDescriptor orlicz(OrliczGenerator n);

  Family family() const noexcept { return family_; }
  // Lp, Lpq: p.  Lpq, LorentzLambda: q.
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  const WeightGenerator& weights() const;
  const OrliczGenerator& orlicz_function() const;

  // Lorentz space with constant weights (the space is l_q).
  bool degenerate() const noexcept;

  // Relative tolerance of the Luxemburg bisection; not part of equality.
  double bisection_tol() const noexcept { return bisection_tol_; }
  SpaceDescriptor with_bisection_tol(double tol) const;

  bool operator==(const SpaceDescriptor& other) const;

 private:
  using Generator = std::variant<std::monostate, WeightGenerator, OrliczGenerator>;
  SpaceDescriptor(Family f, double p, double q, Generator g)
      : family_(f), p_(p), q_(q), gen_(std::move(g)) {}

  Family family_;
  double p_ = 0.0;
  double q_ = 0.0;
  Generator gen_;
  double bisection_tol_ = 1e-12;
};

// A run of `count` equal entries; a run list describes a rearranged sequence.
struct Run {
  double value;
  std::size_t count;
};

// Groups a nonincreasing nonnegative sequence into runs, dropping zeros.
std::vector<Run> to_runs(std::span<const double> sorted);

double norm(const SpaceDescriptor& space, std::span<const double> a);
inline double norm(const SpaceDescriptor& space, const FiniteSeq& a) {
  return norm(space, a.entries());
}
// Entries already nonnegative and nonincreasing.
double norm_sorted(const SpaceDescriptor& space, std::span<const double> sorted);
// Runs with strictly decreasing positive values.  O(number of runs) except
// for the Orlicz root search.
double norm_runs(const SpaceDescriptor& space, std::span<const Run> runs);

// inf{u > 0 : sum N(|a_k| / u) <= 1}.  The bracket [max|a|, sum|a|] is
// shrunk by TOMS 748 until its relative width is below rel_tol.
inline constexpr double kLuxemburgRelTol = 1e-12;

double luxemburg_norm(const OrliczGenerator& n, std::span<const double> a,
                      double rel_tol = kLuxemburgRelTol);
inline double luxemburg_norm(const OrliczGenerator& n, const FiniteSeq& a) {
  return luxemburg_norm(n, a.entries());
}
double luxemburg_runs(const OrliczGenerator& n, std::span<const Run> runs,
                      double rel_tol = kLuxemburgRelTol);
// Same bracket and stopping rule, plain bisection.
double luxemburg_bisection(const OrliczGenerator& n, std::span<const double> a,
                           double rel_tol = kLuxemburgRelTol);
// sum N(|a_k| / u).
double modular(const OrliczGenerator& n, std::span<const double> a, double u);

// Lp(p) -> Lp(p'), Lpq(p,q) -> Lpq(p',q'), Orlicz(N) -> Orlicz(N~).
// Throws UnsupportedOperation for Lorentz spaces.
SpaceDescriptor kothe_dual(const SpaceDescriptor& space);

double conjugate_exponent(double p);

// Descriptor mini-language, e.g. `lpq:p=2,q=inf`,
// `lorentz:q=1,w=invlog`, `orlicz:powerlog(p=2,a=1)`.  `describe` prints the
// canonical form; parse(describe(s)) == s bit for bit.
SpaceDescriptor parse_space(std::string_view text);
std::string describe(const SpaceDescriptor& space);
std::string describe(const WeightGenerator& w);
std::string describe(const OrliczGenerator& n);
// Shortest decimal that round-trips, or "inf".
std::string format_number(double x);
double parse_number(std::string_view token);

}  // namespace optseq
