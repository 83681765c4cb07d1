#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"
#include "optseq/space.hpp"

namespace optseq {

enum class Verdict { holds_with_constant, diverges, inconclusive };
std::string to_string(Verdict v);

struct VerdictRules {
  double agreement = 0.05;  // last two refinements, relative
  double growth = 10.0;     // last / first for divergence
};

// holds_with_constant: finite trend whose last two values agree within
// `agreement`; diverges: strictly increasing with last > growth * first.
Verdict decide(std::span<const double> trend, const VerdictRules& rules = {});

struct TrendPoint {
  std::uint64_t cap;
  double value;
};

struct CriterionReport {
  std::string id;
  std::optional<double> constant;  // empty when diverging
  std::vector<TrendPoint> trend;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, std::string> provenance;
};

enum class EstimateDirection { upper, lower };
std::string to_string(EstimateDirection d);

struct CriteriaConfig {
  VerdictRules rules;
  std::uint64_t equal_norm_n_cap = std::uint64_t{1} << 24;
  std::uint64_t did_n_cap = 100000;
  std::uint64_t assump_n_cap = 1024;
  unsigned assump_l_cap_log2 = 64;
  unsigned orlicz_grid = 200;
  unsigned orlicz_refinements = 4;
  std::size_t tensor_samples = 256;
  std::size_t holder_samples = 1000;
  SearchConfig search;
  IndexOptions indices;
  OrliczIndexOptions orlicz_indices;
  std::uint64_t seed = 20240531;
  Exec exec = Exec::parallel;
};

// max_{m <= n} phi_{X_U}(m) / m^{1/p} at n = 2^i.
CriterionReport equal_norm_upper_constant(const SpaceDescriptor& space, double p,
                                          const CriteriaConfig& cfg = {});
// max_{m <= n} m^{1/p} / Phi_m(1^m) at n = 2^i.
CriterionReport equal_norm_lower_constant(const SpaceDescriptor& space, double p,
                                          const CriteriaConfig& cfg = {});

// sup N(st) / (N(s) N(t)) over a log grid of s, t in (0, 1].
CriterionReport orlicz_submultiplicative_constant(const OrliczGenerator& n,
                                                  const CriteriaConfig& cfg = {});
// sup N(s) N(t) / N(st).
CriterionReport orlicz_supermultiplicative_constant(const OrliczGenerator& n,
                                                    const CriteriaConfig& cfg = {});
// upper: sup N(st) / (N(s) t^p);  lower: sup N(s) t^p / N(st).
CriterionReport orlicz_estimate_constant(const OrliczGenerator& n, double p,
                                         EstimateDirection direction,
                                         const CriteriaConfig& cfg = {});

// sup_n sum_{k<=n} d_k / S_n, d the decreasing rearrangement of {w_i w_j}.
CriterionReport lorentz_did_ratio(const WeightGenerator& w, const CriteriaConfig& cfg = {});
// sup over n, l of S_n l^{q mu} / S_{ln}.
CriterionReport lorentz_assump_constant(double q, const WeightGenerator& w, double mu,
                                        const CriteriaConfig& cfg = {});

// upper: ||a (x) b|| / (||a|| ||b||);  lower: the reciprocal.  Random
// nonnegative pairs plus a = b = 1^m.
CriterionReport tensor_inequality_check(const SpaceDescriptor& space,
                                        EstimateDirection direction,
                                        const CriteriaConfig& cfg = {});

// sum a_k b_k / (||a||_{X_U} ||b||_{(X')_L}) with the identified l_r spaces;
// Lp and Lpq only.
CriterionReport holder_pairing_check(const SpaceDescriptor& space,
                                     const CriteriaConfig& cfg = {});

struct Identification {
  // e.g. "l_2", "l_N", "lambda_q(w)"; empty when unidentified.
  std::string space;
  // "closed_form", "criterion", "unidentified" or "inconclusive".
  std::string status;
  std::vector<std::string> justified_by;
  std::optional<double> exponent;  // r for l_r
};

struct Classification {
  std::string space;
  Identification upper;
  Identification lower;
  IndexPair indices;
  GroblerDodds grobler_dodds;
  std::vector<CriterionReport> criteria;
  std::vector<std::string> notes;
  bool any_inconclusive() const;
};

Classification classify_optimal_spaces(const SpaceDescriptor& space,
                                       const CriteriaConfig& cfg = {});

// Indices used by the classification: closed form when the family fixes
// them, estimated otherwise.
IndexPair working_indices(const SpaceDescriptor& space, const CriteriaConfig& cfg);

}  // namespace optseq
