#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "optseq/errors.hpp"
#include "optseq/optimal.hpp"

using namespace optseq;

namespace {

SearchConfig quick(std::size_t L_max = 3) {
  SearchConfig c;
  c.L_max = L_max;
  c.restarts = 3;
  c.max_evals = 150;
  c.refine_top = 2;
  c.enumeration_cap = 512;
  c.partition_n_max = 6;
  c.exec = Exec::serial;
  return c;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(n);
  for (auto& x : a) x = u(rng);
  return a;
}

// Blocks (1) or (1, j/res), normalized; every assignment for a = 1^n.
std::pair<double, double> grid_extrema(const SpaceDescriptor& s, std::size_t n, int res,
                                       bool homogeneous) {
  std::vector<std::vector<double>> shapes{{1.0}};
  for (int j = 1; j <= res; ++j) shapes.push_back({1.0, double(j) / res});
  for (auto& b : shapes) {
    const double nb = norm(s, b);
    for (auto& x : b) x /= nb;
  }
  double hi = 0, lo = INFINITY;
  std::vector<std::size_t> pick(n, 0);
  std::vector<double> v;
  while (true) {
    v.clear();
    for (auto i : pick) v.insert(v.end(), shapes[i].begin(), shapes[i].end());
    const double x = norm(s, v);
    hi = std::max(hi, x);
    lo = std::min(lo, x);
    if (homogeneous) {
      if (++pick[0] == shapes.size()) break;
      std::fill(pick.begin() + 1, pick.end(), pick[0]);
      continue;
    }
    std::size_t k = 0;
    while (k < n && ++pick[k] == shapes.size()) pick[k++] = 0;
    if (k == n) break;
  }
  return {hi, lo};
}

}  // namespace

TEST(BlockConfiguration, Validation) {
  const auto s = SpaceDescriptor::lp(2);
  EXPECT_THROW(BlockConfiguration(s, {Block{{1.0, 0.5}, 1}}), std::invalid_argument);
  EXPECT_THROW(BlockConfiguration(s, {Block{{0.6, 0.8}, 1}}), std::invalid_argument);
  EXPECT_NO_THROW(BlockConfiguration(s, {Block{{0.8, 0.6}, 2}}));
  EXPECT_EQ(BlockConfiguration::normalized(s, {Block{{2, 1}, 3}}).size(), 3u);
}

TEST(EvalCombination, Examples) {
  std::mt19937_64 rng(1);
  const auto lp = SpaceDescriptor::lp(3);
  const auto cfg = BlockConfiguration::normalized(lp, {Block{{1, 0.7, 0.2}, 1}, Block{{1}, 1},
                                                       Block{{1, 1}, 1}});
  const auto a = random_vector(rng, 3);
  EXPECT_NEAR(eval_combination(lp, a, cfg), norm(lp, a), 1e-12);

  const auto lpq = SpaceDescriptor::lpq(2, 1);
  EXPECT_NEAR(eval_combination(lpq, a, BlockConfiguration::units(3)), norm(lpq, a), 1e-15);
  EXPECT_NEAR(eval_combination(lpq, FiniteSeq({1, 1}), BlockConfiguration::units(2)),
              std::sqrt(2.0), 1e-15);
  EXPECT_THROW(eval_combination(lpq, a, BlockConfiguration::units(2)), std::invalid_argument);
}

TEST(EvalCombination, SignAndOrderInvariant) {
  const auto s = SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, 1));
  const auto cfg = BlockConfiguration::normalized(s, {Block{{1, 0.5}, 1}, Block{{1}, 1}});
  const auto swapped = BlockConfiguration::normalized(s, {Block{{1}, 1}, Block{{1, 0.5}, 1}});
  EXPECT_NEAR(eval_combination(s, FiniteSeq({0.3, -0.9}), cfg),
              eval_combination(s, FiniteSeq({0.9, 0.3}), swapped), 1e-14);
}

TEST(BoundedEstimate, DirectionChecked) {
  const auto s = SpaceDescriptor::lpq(2, 1);
  const auto up = upper_norm_estimate(s, FiniteSeq({1, 1}), quick());
  EXPECT_EQ(up.direction(), BoundDirection::lower_bound_of_sup);
  EXPECT_THROW(up.upper_bound_of_inf(), std::logic_error);
  const auto lo = phi_n_estimate(s, FiniteSeq({1, 1}), quick());
  EXPECT_THROW(lo.lower_bound_of_sup(), std::logic_error);
}

TEST(Estimates, LpExactWithoutShortcut) {
  std::mt19937_64 rng(2);
  auto cfg = quick();
  cfg.lp_shortcut = false;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto s = SpaceDescriptor::lp(p);
    for (int t = 0; t < 4; ++t) {
      const FiniteSeq a(random_vector(rng, 1 + t * 3));
      const double ref = norm(s, a);
      EXPECT_NEAR(upper_norm_estimate(s, a, cfg).lower_bound_of_sup(), ref, 1e-6 * ref);
      EXPECT_NEAR(phi_n_estimate(s, a, cfg).upper_bound_of_inf(), ref, 1e-6 * ref);
      EXPECT_NEAR(lower_norm_estimate(s, a, cfg).upper_bound_of_inf(), ref, 1e-6 * ref);
    }
  }
}

TEST(Estimates, Sandwich) {
  std::mt19937_64 rng(3);
  for (const char* text : {"lpq:p=2,q=1", "lpq:p=2,q=inf", "lpq:p=1.5,q=3",
                           "lorentz:q=1,w=invlog", "lorentz:q=2,w=power(0.5)",
                           "orlicz:powerlog(p=2,a=1)", "orlicz:powerlog(p=2,a=-1)"}) {
    const auto s = parse_space(text);
    for (int t = 0; t < 3; ++t) {
      const FiniteSeq a(random_vector(rng, 2 + t));
      const double inf = max_abs(a.entries()), one = sum_abs(a.entries()), e = norm(s, a);
      const double up = upper_norm_estimate(s, a, quick()).lower_bound_of_sup();
      const double phi = phi_n_estimate(s, a, quick()).upper_bound_of_inf();
      const double low = lower_norm_estimate(s, a, quick()).upper_bound_of_inf();
      EXPECT_GE(up, e - 1e-9) << text;
      EXPECT_LE(phi, e + 1e-9) << text;
      EXPECT_GE(phi, inf - 1e-9) << text;
      EXPECT_GE(low, inf - 1e-9) << text;
      EXPECT_LE(low, phi + 1e-9) << text;
      EXPECT_LE(phi, up + 1e-9) << text;
      EXPECT_LE(up, one + 1e-9) << text;
    }
  }
}

TEST(Estimates, SingleAtom) {
  for (const char* text : {"lpq:p=2,q=1", "orlicz:powerlog(p=2,a=1)"}) {
    const auto s = parse_space(text);
    EXPECT_NEAR(lower_norm_estimate(s, FiniteSeq({1}), quick()).upper_bound_of_inf(), 1.0, 1e-12);
    EXPECT_NEAR(lower_norm_estimate(s, FiniteSeq({0, 1, 0}), quick()).upper_bound_of_inf(), 1.0,
                1e-12);
  }
}

TEST(Estimates, Symmetric) {
  const auto s = parse_space("lpq:p=3,q=1");
  const FiniteSeq a({0.2, -0.9, 0.5}), b({0.9, 0.5, 0.2});
  EXPECT_EQ(upper_norm_estimate(s, a, quick()).lower_bound_of_sup(),
            upper_norm_estimate(s, b, quick()).lower_bound_of_sup());
  EXPECT_EQ(phi_n_estimate(s, a, quick()).upper_bound_of_inf(),
            phi_n_estimate(s, b, quick()).upper_bound_of_inf());
}

TEST(Estimates, MonotoneUnderDomination) {
  const auto s = parse_space("lpq:p=2,q=1");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 4; ++t) {
    std::vector<double> b(3), a(3);
    for (int i = 0; i < 3; ++i) {
      b[i] = u(rng);
      a[i] = b[i] * u(rng);
    }
    EXPECT_LE(upper_norm_estimate(s, FiniteSeq(a), quick()).lower_bound_of_sup(),
              upper_norm_estimate(s, FiniteSeq(b), quick()).lower_bound_of_sup() * (1 + 0.02));
    EXPECT_LE(phi_n_estimate(s, FiniteSeq(a), quick()).upper_bound_of_inf(),
              phi_n_estimate(s, FiniteSeq(b), quick()).upper_bound_of_inf() * (1 + 0.02));
  }
}

TEST(Oracle, Examples) {
  const auto [h2, l2] = brute_force_oracle(SpaceDescriptor::lp(2), FiniteSeq({1, 1}));
  EXPECT_NEAR(h2, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(l2, std::sqrt(2.0), 1e-12);
  const auto [h, l] = brute_force_oracle(SpaceDescriptor::lpq(2, 1), FiniteSeq({1, 1}));
  EXPECT_GE(h, std::sqrt(2.0));
  EXPECT_LE(l, std::sqrt(2.0));
  const auto [h1, l1] = brute_force_oracle(parse_space("orlicz:powerlog(p=2,a=1)"), FiniteSeq({1, 0}));
  EXPECT_NEAR(h1, 1.0, 1e-12);
  EXPECT_NEAR(l1, 1.0, 1e-12);
  EXPECT_THROW(brute_force_oracle(SpaceDescriptor::lp(2), FiniteSeq::ones(4)), std::invalid_argument);
}

TEST(Oracle, SearchMatchesSmallCases) {
  for (const char* text : {"lpq:p=2,q=1", "lpq:p=2,q=inf", "orlicz:powerlog(p=2,a=1)"}) {
    const auto s = parse_space(text);
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto [hi, lo] = brute_force_oracle(s, FiniteSeq::ones(n));
      const double up = upper_norm_estimate(s, FiniteSeq::ones(n), quick(2)).lower_bound_of_sup();
      const double phi = phi_n_estimate(s, FiniteSeq::ones(n), quick(2)).upper_bound_of_inf();
      EXPECT_NEAR(up, hi, 0.02 * hi) << text << " n=" << n;
      EXPECT_NEAR(phi, lo, 0.02 * lo) << text << " n=" << n;
    }
  }
}

TEST(Oracle, LargerEqualCoefficientCases) {
  const auto l21 = SpaceDescriptor::lpq(2, 1), l2inf = SpaceDescriptor::lpq(2, INFINITY);
  const auto [hi, lo4] = grid_extrema(l2inf, 4, 20, false);
  const double phi4 = phi_n_estimate(l2inf, FiniteSeq::ones(4), quick(2)).upper_bound_of_inf();
  EXPECT_NEAR(phi4, lo4, 0.02 * lo4);
  (void)hi;
  for (std::size_t n = 4; n <= 8; ++n) {
    const auto [h, l] = grid_extrema(l21, n, 50, true);
    const double up = upper_norm_estimate(l21, FiniteSeq::ones(n), quick(2)).lower_bound_of_sup();
    EXPECT_GE(up, h * (1 - 0.02)) << n;
    (void)l;
  }
  const auto [h4, l4] = grid_extrema(l21, 4, 20, false);
  const double up4 = upper_norm_estimate(l21, FiniteSeq::ones(4), quick(2)).lower_bound_of_sup();
  EXPECT_NEAR(up4, h4, 0.02 * h4);
  const double low4 = lower_norm_estimate(l21, FiniteSeq::ones(4), quick(2)).upper_bound_of_inf();
  EXPECT_LE(low4, phi_n_estimate(l21, FiniteSeq::ones(4), quick(2)).upper_bound_of_inf() + 1e-9);
  EXPECT_GE(low4, 1.0 - 1e-9);
  (void)l4;
}

TEST(OptimalFundamental, Lp) {
  const std::vector<std::uint64_t> ns{1, 2, 5, 16, 64};
  for (const auto& row : optimal_fundamental(SpaceDescriptor::lp(3), ns, quick())) {
    EXPECT_NEAR(row.phi_upper, std::cbrt(double(row.n)), 1e-9);
    EXPECT_NEAR(row.phi_n, std::cbrt(double(row.n)), 1e-9);
  }
}

TEST(OptimalFundamental, LpqGrowth) {
  const std::vector<std::uint64_t> ns{1, 2, 4, 8, 16, 32};
  double hi = 0, lo = INFINITY;
  for (const auto& row : optimal_fundamental(SpaceDescriptor::lpq(2, 3), ns, quick()))
    hi = std::max(hi, row.phi_upper / std::sqrt(double(row.n)));
  for (const auto& row : optimal_fundamental(SpaceDescriptor::lpq(2, 1), ns, quick()))
    lo = std::min(lo, row.phi_n / std::sqrt(double(row.n)));
  EXPECT_LT(hi, 1.5);
  EXPECT_GT(lo, 0.6);
}

TEST(SearchConfig, Validation) {
  SearchConfig c;
  c.L_max = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(LpExponent, Families) {
  EXPECT_EQ(*lp_exponent(SpaceDescriptor::lpq(2, 2)), 2.0);
  EXPECT_EQ(*lp_exponent(SpaceDescriptor::lorentz(3, WeightGenerator::constant())), 3.0);
  EXPECT_EQ(*lp_exponent(SpaceDescriptor::orlicz(OrliczGenerator::power(1.5))), 1.5);
  EXPECT_FALSE(lp_exponent(SpaceDescriptor::lpq(2, 1)));
}
