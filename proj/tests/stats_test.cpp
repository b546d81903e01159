#include <gtest/gtest.h>

#include "oracles.hpp"
#include "typeprior/stats.hpp"

using namespace typeprior;

TEST(PairedTTest, MatchesReferenceValues) {
  for (const auto& c : oracle::ttest_reference()) {
    const auto two = paired_ttest(c.x, c.y, TestSide::two);
    const auto right = paired_ttest(c.x, c.y, TestSide::right);
    EXPECT_NEAR(two.t, c.t, 1e-9 * std::max(1.0, std::abs(c.t)));
    EXPECT_NEAR(two.p, c.p_two, 1e-9);
    EXPECT_NEAR(right.p, c.p_right, 1e-9);
    EXPECT_EQ(two.significant, c.p_two < 0.05);
    EXPECT_EQ(right.significant, c.p_right < 0.05);
  }
}

TEST(PairedTTest, SwappingSamplesMirrorsTheTest) {
  for (const auto& c : oracle::ttest_reference()) {
    const auto fwd = paired_ttest(c.x, c.y, TestSide::right);
    const auto back = paired_ttest(c.y, c.x, TestSide::right);
    EXPECT_NEAR(fwd.p + back.p, 1.0, 1e-12);
    EXPECT_NEAR(paired_ttest(c.y, c.x, TestSide::two).p, paired_ttest(c.x, c.y, TestSide::two).p, 1e-12);
  }
}

TEST(PairedTTest, ZeroVarianceRules) {
  const std::vector<double> y{1, 2, 3, 4};
  const std::vector<double> up{2, 3, 4, 5};
  const std::vector<double> down{0, 1, 2, 3};

  auto r = paired_ttest(up, y, TestSide::two);
  EXPECT_EQ(r.p, 0.0);
  EXPECT_TRUE(r.significant);
  r = paired_ttest(up, y, TestSide::right);
  EXPECT_EQ(r.p, 0.0);
  EXPECT_TRUE(r.significant);
  r = paired_ttest(down, y, TestSide::right);
  EXPECT_EQ(r.p, 1.0);
  EXPECT_FALSE(r.significant);
  r = paired_ttest(down, y, TestSide::two);
  EXPECT_TRUE(r.significant);

  r = paired_ttest(y, y, TestSide::two);
  EXPECT_EQ(r.p, 1.0);
  EXPECT_FALSE(r.significant);
  r = paired_ttest(y, y, TestSide::right);
  EXPECT_EQ(r.p, 0.5);
  EXPECT_FALSE(r.significant);
}

TEST(PairedTTest, RejectsBadInput) {
  EXPECT_THROW(paired_ttest(std::vector<double>{1, 2}, std::vector<double>{1}, TestSide::two), std::invalid_argument);
  EXPECT_THROW(paired_ttest(std::vector<double>{1}, std::vector<double>{1}, TestSide::two), std::invalid_argument);
}

TEST(PairedTTest, PValuesInRange) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x(8), y(8);
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = rng.uniform();
      y[i] = rng.uniform();
    }
    for (TestSide side : {TestSide::two, TestSide::right}) {
      const auto r = paired_ttest(x, y, side);
      EXPECT_GE(r.p, 0.0);
      EXPECT_LE(r.p, 1.0);
    }
  }
}

TEST(SlicePercentage, CountsSignificantSlices) {
  // Three plays, four slices; x beats base clearly on slices 0 and 2 only.
  const SliceValues base{{1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}};
  const SliceValues x{{5, 1.1, 5.2, 0.9}, {6.1, 2.0, 6.0, 2.1}, {7.0, 3.2, 7.1, 2.8}};
  EXPECT_DOUBLE_EQ(significant_slice_percentage(x, base, TestSide::right), 50.0);
  EXPECT_DOUBLE_EQ(significant_slice_percentage(base, x, TestSide::right), 0.0);
  EXPECT_DOUBLE_EQ(significant_slice_percentage(base, base, TestSide::two), 0.0);
  EXPECT_THROW(significant_slice_percentage({}, {}, TestSide::two), std::invalid_argument);
  EXPECT_THROW(significant_slice_percentage(SliceValues{{1}, {2, 3}}, SliceValues{{1}, {2, 3}}, TestSide::two),
               std::invalid_argument);
}
