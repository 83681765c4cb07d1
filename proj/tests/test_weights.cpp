#include <cmath>

#include <gtest/gtest.h>

#include "optseq/errors.hpp"
#include "optseq/weights.hpp"

using namespace optseq;

TEST(Weights, PowerAlphaClosedForm) {
  const auto w = WeightGenerator::power_alpha(0.5);
  EXPECT_EQ(w.weight(1), 1.0);
  EXPECT_NEAR(w.weight(4), 2.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(w.partial_sum(1e6), 1000.0, 1e-9);
  EXPECT_NEAR(w.partial_sum(std::ldexp(1.0, 100)), std::ldexp(1.0, 50), 1e-6 * std::ldexp(1.0, 50));
}

TEST(Weights, PowerAlphaRange) {
  EXPECT_THROW(WeightGenerator::power_alpha(0.0), std::invalid_argument);
  EXPECT_THROW(WeightGenerator::power_alpha(1.0), std::invalid_argument);
}

TEST(Weights, InvLogPartialSums) {
  const auto w = WeightGenerator::inv_log();
  EXPECT_EQ(w.weight(1), 1.0);
  EXPECT_EQ(w.weight(2), 1.0);
  EXPECT_NEAR(w.weight(3), 1.0 / std::log(3.0), 1e-16);
  // Reference values from 40-digit accumulation.
  EXPECT_NEAR(w.partial_sum(10), 6.6952430927315872, 1e-13);
  EXPECT_NEAR(w.partial_sum(1000), 177.99610527361831, 1e-11);
  EXPECT_NEAR(w.partial_sum(65536), 6584.3458972410007, 1e-13 * 6584.3);
  EXPECT_NEAR(w.partial_sum(100000), 9630.1664971089215, 1e-13 * 9630.2);
  EXPECT_NEAR(w.partial_sum(1048576), 82137.877790447539, 1e-13 * 82137.9);
}

TEST(Weights, InvLogStrictlyIncreasingAcrossTableEdge) {
  const auto w = WeightGenerator::inv_log();
  const double n = double(kInvLogTableSize);
  for (double k = n - 3; k < n + 4; ++k) EXPECT_LT(w.partial_sum(k), w.partial_sum(k + 1));
}

TEST(Weights, Constant) {
  const auto w = WeightGenerator::constant();
  EXPECT_TRUE(w.degenerate());
  EXPECT_EQ(w.weight(17), 1.0);
  EXPECT_EQ(w.partial_sum(17), 17.0);
}

TEST(Weights, ExplicitValidation) {
  EXPECT_THROW(WeightGenerator::explicit_weights({0.5, 0.25}), std::invalid_argument);
  EXPECT_THROW(WeightGenerator::explicit_weights({1, 0.5, 0.75}), std::invalid_argument);
  EXPECT_THROW(WeightGenerator::explicit_weights({1, 0}), std::invalid_argument);
  const auto w = WeightGenerator::explicit_weights({1, 0.5, 0.25});
  EXPECT_EQ(*w.length(), 3u);
  EXPECT_EQ(w.partial_sum(3), 1.75);
  EXPECT_THROW(w.partial_sum(4), ResourceLimitError);
}
