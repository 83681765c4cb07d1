#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "optseq/criteria.hpp"

using namespace optseq;

namespace {

CriteriaConfig quick() {
  CriteriaConfig c;
  c.equal_norm_n_cap = 256;
  c.search.restarts = 3;
  c.search.max_evals = 150;
  c.search.refine_top = 2;
  c.search.enumeration_cap = 512;
  c.search.partition_n_max = 6;
  c.tensor_samples = 64;
  c.holder_samples = 1000;
  c.exec = Exec::serial;
  c.search.exec = Exec::serial;
  c.indices.exec = Exec::serial;
  c.orlicz_indices.exec = Exec::serial;
  return c;
}

std::vector<double> values(const CriterionReport& r) {
  std::vector<double> v;
  for (const auto& t : r.trend) v.push_back(t.value);
  return v;
}

}  // namespace

TEST(Decide, Rules) {
  const std::vector<double> flat{1.2, 1.25, 1.26}, grow{1, 3, 9, 27}, slow{1, 1.5, 2.5, 4};
  EXPECT_EQ(decide(flat), Verdict::holds_with_constant);
  EXPECT_EQ(decide(grow), Verdict::diverges);
  EXPECT_EQ(decide(slow), Verdict::inconclusive);
  EXPECT_EQ(decide(std::vector<double>{1.0}), Verdict::inconclusive);
  EXPECT_EQ(decide(std::vector<double>{1.0, INFINITY}), Verdict::diverges);
  EXPECT_EQ(decide(std::vector<double>{NAN, 1.0}), Verdict::inconclusive);
  EXPECT_EQ(decide(std::vector<double>{2.0, INFINITY, 3.0}), Verdict::inconclusive);
  EXPECT_EQ(decide(grow, VerdictRules{0.05, 100.0}), Verdict::inconclusive);
}

TEST(EqualNorm, Examples) {
  const auto cfg = quick();
  const auto up = equal_norm_upper_constant(SpaceDescriptor::lp(2), 2, cfg);
  EXPECT_EQ(up.verdict, Verdict::holds_with_constant);
  EXPECT_NEAR(*up.constant, 1.0, 1e-9);
  auto big = cfg;
  big.equal_norm_n_cap = std::uint64_t{1} << 24;
  EXPECT_EQ(equal_norm_upper_constant(SpaceDescriptor::lp(2), 3, big).verdict, Verdict::diverges);
  EXPECT_EQ(equal_norm_lower_constant(SpaceDescriptor::lp(3), 2, big).verdict, Verdict::diverges);
  EXPECT_NEAR(*equal_norm_lower_constant(SpaceDescriptor::lp(3), 3, cfg).constant, 1.0, 1e-9);
  EXPECT_EQ(equal_norm_upper_constant(SpaceDescriptor::lpq(2, 3), 2, cfg).verdict,
            Verdict::holds_with_constant);
  EXPECT_EQ(equal_norm_lower_constant(SpaceDescriptor::lpq(2, 1), 2, cfg).verdict,
            Verdict::holds_with_constant);
}

TEST(OrliczCriteria, Multiplicativity) {
  const auto cfg = quick();
  const auto pl = OrliczGenerator::power_log(2, 1), nl = OrliczGenerator::power_log(2, -1);
  const auto sub = orlicz_submultiplicative_constant(pl, cfg);
  EXPECT_EQ(sub.verdict, Verdict::holds_with_constant);
  EXPECT_LE(*sub.constant, 1 + 1e-9);
  EXPECT_EQ(orlicz_submultiplicative_constant(nl, cfg).verdict, Verdict::diverges);
  EXPECT_EQ(orlicz_supermultiplicative_constant(nl, cfg).verdict, Verdict::holds_with_constant);
  EXPECT_EQ(orlicz_supermultiplicative_constant(pl, cfg).verdict, Verdict::diverges);
  for (double p : {1.0, 2.0, 3.5}) {
    const auto n = OrliczGenerator::power(p);
    EXPECT_NEAR(*orlicz_submultiplicative_constant(n, cfg).constant, 1.0, 1e-9);
    EXPECT_NEAR(*orlicz_supermultiplicative_constant(n, cfg).constant, 1.0, 1e-9);
  }
}

TEST(OrliczCriteria, Estimates) {
  const auto cfg = quick();
  EXPECT_EQ(orlicz_estimate_constant(OrliczGenerator::power_log(2, 1), 2,
                                     EstimateDirection::lower, cfg).verdict,
            Verdict::holds_with_constant);
  EXPECT_EQ(orlicz_estimate_constant(OrliczGenerator::power_log(2, -1), 2,
                                     EstimateDirection::upper, cfg).verdict,
            Verdict::holds_with_constant);
  for (auto d : {EstimateDirection::upper, EstimateDirection::lower})
    EXPECT_NEAR(*orlicz_estimate_constant(OrliczGenerator::power(3), 3, d, cfg).constant, 1.0,
                1e-9);
}

TEST(OrliczCriteria, DivergenceStableUnderLargerCaps) {
  auto cfg = quick();
  const auto nl = OrliczGenerator::power_log(2, -1);
  EXPECT_EQ(orlicz_submultiplicative_constant(nl, cfg).verdict, Verdict::diverges);
  cfg.orlicz_grid *= 2;
  cfg.orlicz_refinements += 1;
  EXPECT_EQ(orlicz_submultiplicative_constant(nl, cfg).verdict, Verdict::diverges);
}

TEST(LorentzCriteria, Did) {
  const auto cfg = quick();
  const auto inv = lorentz_did_ratio(WeightGenerator::inv_log(), cfg);
  EXPECT_EQ(inv.verdict, Verdict::holds_with_constant);
  const auto one = lorentz_did_ratio(WeightGenerator::constant(), cfg);
  EXPECT_EQ(*one.constant, 1.0);
  for (double v : values(one)) EXPECT_EQ(v, 1.0);
  // The ratio for power weights grows with every checkpoint.
  const auto pa = values(lorentz_did_ratio(WeightGenerator::power_alpha(0.5), cfg));
  for (std::size_t i = 1; i < pa.size(); ++i) EXPECT_GT(pa[i], pa[i - 1]);
}

TEST(LorentzCriteria, Assump) {
  const auto cfg = quick();
  for (double alpha : {0.5, 0.8})
    for (double q : {1.0, 2.0}) {
      const auto r = lorentz_assump_constant(q, WeightGenerator::power_alpha(alpha), alpha / q, cfg);
      EXPECT_EQ(r.verdict, Verdict::holds_with_constant);
      EXPECT_NEAR(*r.constant, 1.0, 1e-9);
    }
  EXPECT_EQ(lorentz_assump_constant(1, WeightGenerator::inv_log(), 1.0, cfg).verdict,
            Verdict::diverges);
  EXPECT_NEAR(*lorentz_assump_constant(2, WeightGenerator::constant(), 0.5, cfg).constant, 1.0,
              1e-12);
}

TEST(TensorCheck, Examples) {
  const auto cfg = quick();
  for (auto d : {EstimateDirection::upper, EstimateDirection::lower}) {
    const auto r = tensor_inequality_check(SpaceDescriptor::lp(2.5), d, cfg);
    EXPECT_NEAR(*r.constant, 1.0, 1e-12);
  }
  EXPECT_EQ(tensor_inequality_check(parse_space("orlicz:powerlog(p=2,a=1)"),
                                    EstimateDirection::upper, cfg).verdict,
            Verdict::holds_with_constant);
  const auto lor = SpaceDescriptor::lorentz(2, WeightGenerator::power_alpha(0.5));
  for (std::uint64_t m : {2, 9, 100}) {
    const double f = fundamental_function(lor, m);
    EXPECT_NEAR(f * f / fundamental_function(lor, m * m), 1.0, 1e-12);
  }
}

TEST(HolderCheck, Examples) {
  const auto cfg = quick();
  const auto l2 = holder_pairing_check(SpaceDescriptor::lp(2), cfg);
  EXPECT_NEAR(*l2.constant, 1.0, 1e-9);
  EXPECT_LE(*holder_pairing_check(SpaceDescriptor::lpq(3, 1), cfg).constant, 1 + 1e-9);
  EXPECT_THROW(holder_pairing_check(parse_space("lorentz:q=1,w=invlog"), cfg),
               std::exception);
}

TEST(Classify, Lpq) {
  const auto c = classify_optimal_spaces(SpaceDescriptor::lpq(2, 1), quick());
  EXPECT_EQ(c.upper.space, "l_1");
  EXPECT_EQ(c.lower.space, "l_2");
  EXPECT_EQ(c.upper.status, "closed_form");
  EXPECT_FALSE(c.any_inconclusive());
  EXPECT_EQ(c.grobler_dodds.delta, 1.0);
  EXPECT_EQ(c.grobler_dodds.sigma, 2.0);
}

TEST(Classify, LorentzInvLog) {
  const auto c = classify_optimal_spaces(parse_space("lorentz:q=1,w=invlog"), quick());
  EXPECT_EQ(c.upper.space, "l_1");
  EXPECT_EQ(c.lower.space, "lambda_q(w)");
  EXPECT_EQ(c.lower.status, "criterion");
}

TEST(Classify, OrliczPowerLog) {
  const auto cfg = quick();
  const auto pos = classify_optimal_spaces(parse_space("orlicz:powerlog(p=2,a=1)"), cfg);
  EXPECT_EQ(pos.upper.space, "l_N");
  EXPECT_EQ(pos.lower.space, "l_2");
  const auto neg = classify_optimal_spaces(parse_space("orlicz:powerlog(p=2,a=-1)"), cfg);
  EXPECT_EQ(neg.upper.space, "l_2");
  EXPECT_EQ(neg.lower.space, "l_N");
  const auto one = classify_optimal_spaces(parse_space("orlicz:powerlog(p=1,a=-1)"), cfg);
  EXPECT_EQ(one.upper.space, "l_1");
  const auto pw = classify_optimal_spaces(parse_space("orlicz:power(p=3)"), cfg);
  EXPECT_EQ(pw.upper.space, "l_3");
  EXPECT_EQ(pw.lower.space, "l_3");
}
