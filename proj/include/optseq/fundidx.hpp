#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optseq/parallel.hpp"
#include "optseq/space.hpp"

namespace optseq {

enum class IndexMethod { closed_form, slope_regression, grid_extremum };
std::string to_string(IndexMethod m);

struct IndexEstimate {
  double value = 0.0;  // clamped into [0, 1]
  IndexMethod method = IndexMethod::closed_form;
  std::map<std::string, std::uint64_t> caps;
  // Regression RMS residual, or grid-refinement delta for grid extrema.
  double residual = 0.0;
  double unclamped = 0.0;
};

struct IndexPair {
  IndexEstimate mu;
  IndexEstimate nu;
};

// phi(n) = ||e_1 + ... + e_n||, by closed form.
double fundamental_function(const SpaceDescriptor& space, std::uint64_t n);
// ln phi(n) for any integer-valued n >= 1, including n far beyond 2^64.
double log_fundamental_function(const SpaceDescriptor& space, double n);
// norm(space, 1^n) evaluated directly; the reference for the closed forms.
double fundamental_function_direct(const SpaceDescriptor& space, std::uint64_t n);

struct DilationOptions {
  // Besides the dense range m <= m_cap, also try m = 2^j for
  // log2(m_cap) < j <= tail_log2.
  unsigned tail_log2 = 0;
  Exec exec = Exec::parallel;
};

struct Dilation {
  double m0 = 1.0;    // sup_m phi(m) / phi(mn)
  double minf = 1.0;  // sup_m phi(mn) / phi(m)
};

// Truncated suprema, hence lower bounds of the true dilation functions.
Dilation dilation_functions(const SpaceDescriptor& space, std::uint64_t n,
                            std::uint64_t m_cap, const DilationOptions& opts = {});

struct IndexOptions {
  unsigned n_cap = 14;
  std::uint64_t m_cap = 4096;
  unsigned tail_log2 = 1000;  // clipped so that m 2^n_cap stays below 2^1000
  Exec exec = Exec::parallel;
};

// Slope of log2 M(2^n) for n = 1..n_cap, fitted on the last half.
IndexPair fundamental_indices(const SpaceDescriptor& space, const IndexOptions& opts = {});

// The same limits evaluated from partial-sum ratios S_j / S_{2^n j}, j <= m_cap.
IndexPair lorentz_indices(double q, const WeightGenerator& w,
                          const IndexOptions& opts = {});

struct OrliczIndexOptions {
  unsigned grid = 1000;  // points in s per dyadic level
  unsigned levels = 256;  // t = 2^-k, k = 1..levels, for closed-form N
  Exec exec = Exec::parallel;
};

// Extremes over s of log2(N(s 2^-k) / N(s)) per level k; the indices are
// -1/slope of the min (mu) and of the max (nu).
IndexPair orlicz_indices(const OrliczGenerator& n, const OrliczIndexOptions& opts = {});

// Exact indices when the family fixes them: Lp, Lpq, Lorentz with
// power or constant weights, Orlicz power and power-log functions.
std::optional<IndexPair> closed_form_indices(const SpaceDescriptor& space);

struct GroblerDodds {
  double delta = 1.0;
  double sigma = 1.0;
  bool delta_closed_form = true;
  bool sigma_closed_form = true;
  std::string note;
};

GroblerDodds grobler_dodds(const SpaceDescriptor& space, const IndexOptions& idx = {},
                           const OrliczIndexOptions& orl = {});

struct SlopeFit {
  double slope = 0.0;
  double residual = 0.0;
};

// Least squares of y on (x, log2 x, 1); plain (x, 1) when fewer than four
// points.  x must be positive.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace optseq
