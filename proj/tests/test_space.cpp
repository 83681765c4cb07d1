#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "optseq/errors.hpp"
#include "optseq/space.hpp"

using namespace optseq;

namespace {

std::vector<SpaceDescriptor> sample_spaces() {
  return {SpaceDescriptor::lp(1),
          SpaceDescriptor::lp(2),
          SpaceDescriptor::lp(INFINITY),
          SpaceDescriptor::lpq(2, 1),
          SpaceDescriptor::lpq(3, 2),
          SpaceDescriptor::lpq(2, INFINITY),
          SpaceDescriptor::lpq(1.5, 4),
          SpaceDescriptor::lorentz(2, WeightGenerator::power_alpha(0.5)),
          SpaceDescriptor::lorentz(1, WeightGenerator::inv_log()),
          SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, 1)),
          SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, -1)),
          SpaceDescriptor::orlicz(OrliczGenerator::power_log(1, -1))};
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> a(n);
  for (auto& x : a) x = g(rng);
  return a;
}

}  // namespace

TEST(Norm, Examples) {
  EXPECT_NEAR(norm(SpaceDescriptor::lp(2), FiniteSeq({3, 4})), 5.0, 1e-15);
  EXPECT_NEAR(norm(SpaceDescriptor::lpq(2, 1), FiniteSeq::ones(4)), 2.0, 1e-15);
  std::mt19937_64 rng(1);
  const auto cube = SpaceDescriptor::orlicz(OrliczGenerator::power(3));
  for (int t = 0; t < 20; ++t) {
    const auto a = random_vector(rng, 7);
    const double l3 = norm(SpaceDescriptor::lp(3), a);
    EXPECT_NEAR(norm(cube, a), l3, 1e-10 * l3);
  }
}

// Reference values from 40-digit evaluation of the defining formulas.
TEST(Norm, FrozenValues) {
  EXPECT_NEAR(norm(SpaceDescriptor::lpq(3, 2), FiniteSeq({0.2, 0.9, 0.3, 0.5})),
              1.0093473353901010, 1e-14);
  EXPECT_NEAR(norm(SpaceDescriptor::lpq(2, INFINITY), FiniteSeq({0.5, 0.4, 0.4, 0.1})),
              0.75055534994651352, 1e-14);
  EXPECT_EQ(norm(SpaceDescriptor::lpq(2, INFINITY), FiniteSeq({3, 1, 1})), 3.0);
  EXPECT_NEAR(norm(SpaceDescriptor::lorentz(2, WeightGenerator::power_alpha(0.5)),
                   FiniteSeq({0.9, 0.5, 0.3})),
              0.97064861956368856, 1e-14);
  EXPECT_NEAR(norm(SpaceDescriptor::lorentz(1, WeightGenerator::inv_log()),
                   FiniteSeq({1, 0.5, 0.25, 0.125})),
              1.8177282467122696, 1e-14);
  EXPECT_NEAR(norm(SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, 1)),
                   FiniteSeq({0.7, 0.3, 0.2})),
              0.97589998798254262, 1e-11);
  EXPECT_NEAR(norm(SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, -1)),
                   FiniteSeq({0.7, 0.3, 0.2})),
              0.73114684316824585, 1e-11);
  EXPECT_NEAR(norm(SpaceDescriptor::orlicz(OrliczGenerator::power_log(1, -1)),
                   FiniteSeq({0.7, 0.3, 0.2})),
              0.82962255718008309, 1e-11);
}

TEST(Norm, HomogeneousAndSymmetric) {
  std::mt19937_64 rng(2);
  for (const auto& s : sample_spaces()) {
    for (int t = 0; t < 10; ++t) {
      auto a = random_vector(rng, 9);
      const double v = norm(s, a);
      std::vector<double> scaled(a);
      for (auto& x : scaled) x *= -2.5;
      EXPECT_NEAR(norm(s, scaled), 2.5 * v, 1e-11 * v) << describe(s);
      std::shuffle(a.begin(), a.end(), rng);
      EXPECT_NEAR(norm(s, a), v, 1e-12 * v) << describe(s);
    }
  }
}

TEST(Norm, MonotoneAndChain) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (const auto& s : sample_spaces()) {
    for (int t = 0; t < 20; ++t) {
      auto b = random_vector(rng, 8);
      std::vector<double> a(b);
      for (auto& x : a) x *= u(rng);
      const double nb = norm(s, b);
      EXPECT_LE(norm(s, a), nb * (1 + 1e-12)) << describe(s);
      EXPECT_LE(max_abs(b), nb * (1 + 1e-12)) << describe(s);
      EXPECT_LE(nb, sum_abs(b) * (1 + 1e-12)) << describe(s);
    }
  }
}

TEST(Luxemburg, Examples) {
  EXPECT_NEAR(luxemburg_norm(OrliczGenerator::power(2), FiniteSeq({3, 4})), 5.0, 1e-11);
  for (const auto& n : {OrliczGenerator::power_log(2, 1), OrliczGenerator::power_log(1, -1)})
    EXPECT_EQ(luxemburg_norm(n, FiniteSeq({-0.75, 0, 0})), 0.75);
  EXPECT_EQ(luxemburg_norm(OrliczGenerator::power(2), FiniteSeq({0, 0})), 0.0);
}

TEST(Luxemburg, DenseModularScan) {
  const auto n = OrliczGenerator::power_log(2, 1);
  const std::vector<double> a{1, 1};
  // Smallest u on a 10^6-point grid of [1, 2] with modular <= 1.
  double u_grid = 2.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double u = 1.0 + i * 1e-6;
    if (modular(n, a, u) <= 1.0) {
      u_grid = u;
      break;
    }
  }
  const double v = luxemburg_norm(n, a);
  EXPECT_NEAR(v, u_grid, 1e-6);
  EXPECT_NEAR(v, 1.7737511721266268, 1e-11);
}

TEST(Luxemburg, ModularAtSolutionIsOne) {
  std::mt19937_64 rng(4);
  for (const auto& n : {OrliczGenerator::power_log(2, 1), OrliczGenerator::power_log(2, -1),
                        OrliczGenerator::power_log(1, -1), OrliczGenerator::power(1.5)}) {
    for (int t = 0; t < 20; ++t) {
      const auto a = random_vector(rng, 6);
      const double u = luxemburg_norm(n, a);
      EXPECT_NEAR(modular(n, a, u), 1.0, 1e-9);
    }
  }
}

TEST(Luxemburg, AgreesWithBisection) {
  std::mt19937_64 rng(5);
  for (const auto& n : {OrliczGenerator::power_log(2, 1), OrliczGenerator::power_log(3, -1)}) {
    for (int t = 0; t < 20; ++t) {
      const auto a = random_vector(rng, 5);
      const double x = luxemburg_norm(n, a), y = luxemburg_bisection(n, a);
      EXPECT_NEAR(x, y, 3e-12 * y);
    }
  }
}

TEST(Space, Validation) {
  EXPECT_THROW(SpaceDescriptor::lp(0.5), std::invalid_argument);
  EXPECT_THROW(SpaceDescriptor::lpq(1, 2), std::invalid_argument);
  EXPECT_THROW(SpaceDescriptor::lpq(INFINITY, 2), std::invalid_argument);
  EXPECT_THROW(SpaceDescriptor::lpq(2, 0.5), std::invalid_argument);
  EXPECT_THROW(SpaceDescriptor::lorentz(INFINITY, WeightGenerator::constant()),
               std::invalid_argument);
  EXPECT_TRUE(SpaceDescriptor::lorentz(2, WeightGenerator::constant()).degenerate());
  EXPECT_THROW(SpaceDescriptor::lp(2).with_bisection_tol(0.0), std::invalid_argument);
}

TEST(KotheDual, Examples) {
  EXPECT_EQ(kothe_dual(SpaceDescriptor::lp(2)), SpaceDescriptor::lp(2));
  EXPECT_EQ(kothe_dual(SpaceDescriptor::lp(1)), SpaceDescriptor::lp(INFINITY));
  EXPECT_EQ(kothe_dual(SpaceDescriptor::lpq(3, 1)), SpaceDescriptor::lpq(1.5, INFINITY));
  EXPECT_THROW(kothe_dual(SpaceDescriptor::lorentz(2, WeightGenerator::inv_log())),
               UnsupportedOperation);
}

TEST(KotheDual, OrliczPowerMatchesConjugateExponent) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (double p : {2.0, 3.0}) {
    const auto dual = kothe_dual(SpaceDescriptor::orlicz(OrliczGenerator::power(p)));
    const auto lp = SpaceDescriptor::lp(conjugate_exponent(p));
    for (int t = 0; t < 50; ++t) {
      std::vector<double> a(6);
      for (auto& x : a) x = u(rng);
      const double ref = norm(lp, a);
      EXPECT_NEAR(norm(dual, a), ref, 0.05 * ref) << p;
    }
  }
}

// The normalized conjugate of t^{3/2} is 32 t^3 / 27 on [0, 3/4] and 2t - 1
// above, so its norm is (32/27)^{1/3} ||a||_3 whenever every |a_k| / u <= 3/4.
TEST(KotheDual, OrliczPowerThreeHalvesClosedForm) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  const auto dual = kothe_dual(SpaceDescriptor::orlicz(OrliczGenerator::power(1.5)));
  const double c = std::cbrt(32.0 / 27.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(6);
    for (auto& x : a) x = u(rng);
    const double expect = c * norm(SpaceDescriptor::lp(3), a);
    if (max_abs(a) / expect > 0.75) continue;
    EXPECT_NEAR(norm(dual, a), expect, 1e-8 * expect);
  }
  EXPECT_NEAR(dual.orlicz_function()(0.5), 32.0 / 27.0 / 8.0, 1e-10);
  EXPECT_NEAR(dual.orlicz_function()(0.9), 0.8, 1e-10);
}

TEST(Holder, PairingWithDual) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<std::pair<SpaceDescriptor, double>> cases{
      {SpaceDescriptor::lp(2), 1e-9},
      {SpaceDescriptor::lp(1.5), 1e-9},
      {SpaceDescriptor::lpq(3, 1), 1e-9},
      {SpaceDescriptor::orlicz(OrliczGenerator::power_log(2, 1)), 0.05}};
  for (const auto& [s, slack] : cases) {
    const auto d = kothe_dual(s);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> a(5), b(5);
      for (auto& x : a) x = u(rng);
      for (auto& x : b) x = u(rng);
      double dot = 0;
      for (int i = 0; i < 5; ++i) dot += a[i] * b[i];
      EXPECT_LE(dot, norm(s, a) * norm(d, b) * (1 + slack)) << describe(s);
    }
  }
}

TEST(Descriptor, RoundTrip) {
  for (const char* text :
       {"lp:p=2", "lp:p=inf", "lp:p=1.5", "lpq:p=2,q=1", "lpq:p=2,q=inf",
        "lorentz:q=2,w=power(0.5)", "lorentz:q=1,w=invlog", "lorentz:q=3,w=const",
        "lorentz:q=1,w=explicit(1;0.5;0.25)", "orlicz:powerlog(p=2,a=1)",
        "orlicz:powerlog(p=1,a=-1)", "orlicz:power(p=3)",
        "orlicz:conjugate(power(p=3))"}) {
    const auto s = parse_space(text);
    EXPECT_EQ(describe(s), text);
    EXPECT_EQ(parse_space(describe(s)), s);
  }
  EXPECT_EQ(describe(parse_space(" lpq : q=2 , p=3 ")), "lpq:p=3,q=2");
  EXPECT_EQ(describe(parse_space("lp:p=0.1e1")), "lp:p=1");
}

TEST(Descriptor, ShortestRoundTripNumbers) {
  const double x = 0.1 + 0.2;
  const auto s = SpaceDescriptor::lp(1 + x);
  EXPECT_EQ(parse_space(describe(s)).p(), s.p());
}

TEST(Descriptor, Errors) {
  auto token = [](const char* text) {
    try {
      parse_space(text);
    } catch (const ParseError& e) {
      return e.token();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(token("foo:p=1"), "foo");
  EXPECT_EQ(token("lp:p=abc"), "abc");
  EXPECT_EQ(token("lp:q=2"), "q");
  EXPECT_EQ(token("lp:p=2,p=3"), "p");
  EXPECT_EQ(token("lp"), "lp");
  EXPECT_EQ(token("lp:p=0.5"), "lp:p=0.5");
  EXPECT_EQ(token("orlicz:powerlog(p=2,a=5)"), "orlicz:powerlog(p=2,a=5)");
  EXPECT_EQ(token("lorentz:q=2,w=power(0.5"), "q=2,w=power(0.5");
}
