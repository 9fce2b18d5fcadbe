#include "gapzeros/support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace gapzeros {
namespace {

TEST(SupportModel, DistanceToIntervalsAndPoints) {
    const SupportModel m({{1.0, 5.0}, {-5.0, -1.0}}, {7.0});
    EXPECT_EQ(m.dist(0.0), 1.0);
    EXPECT_EQ(m.dist(0.5), 0.5);
    EXPECT_EQ(m.dist(-3.0), 0.0);
    EXPECT_EQ(m.dist(6.0), 1.0);
    EXPECT_EQ(m.dist(7.0), 0.0);
    EXPECT_EQ(m.dist(-6.5), 1.5);
    EXPECT_TRUE(m.contains(1.0));
    EXPECT_FALSE(m.contains(0.999));
    EXPECT_EQ(m.intervals().front().lo, -5.0);
}

TEST(SupportModel, RejectsOverlapsAndInteriorPoints) {
    EXPECT_THROW(SupportModel({{0.0, 2.0}, {1.0, 3.0}}, {}), PreconditionError);
    EXPECT_THROW(SupportModel({{0.0, 2.0}}, {1.0}), PreconditionError);
    EXPECT_THROW(SupportModel({{2.0, 0.0}}, {}), PreconditionError);
}

TEST(SupportModel, EmptyModelIsInfinitelyFar) {
    const SupportModel m;
    EXPECT_TRUE(std::isinf(m.dist(0.0)));
    EXPECT_THROW((void)m.hull(), PreconditionError);
}

TEST(SupportModel, FatteningMergesNeighbours) {
    const std::vector<double> c{0.0, 0.03, 1.0};
    const auto m = SupportModel::fattened(c, 0.02);
    ASSERT_EQ(m.intervals().size(), 2u);
    EXPECT_DOUBLE_EQ(m.intervals()[0].lo, -0.02);
    EXPECT_DOUBLE_EQ(m.intervals()[0].hi, 0.05);
    EXPECT_EQ(m.interval_gaps().size(), 1u);
}

TEST(SupportModel, DistanceMatchesBruteForce) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const SupportModel m({{-5.0, -1.0}, {1.0, 5.0}}, {-7.5, 8.0});
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng);
        // dense sampling of the union
        double best = std::min(std::abs(x + 7.5), std::abs(x - 8.0));
        for (int k = 0; k <= 4000; ++k) {
            const double t = -5.0 + 4.0 * k / 4000.0;
            best = std::min({best, std::abs(x - t), std::abs(x - (t + 6.0))});
        }
        ASSERT_NEAR(m.dist(x), best, 1e-3 + 1e-12) << x;
        ASSERT_LE(m.dist(x), best + 1e-12);
    }
}

TEST(SupportModel, LargerFatteningIsSuperset) {
    const std::vector<double> c{-1.0, -0.9, 0.4, 2.0};
    const auto small = SupportModel::fattened(c, 0.02);
    const auto large = SupportModel::fattened(c, 0.2);
    for (double x = -3.0; x <= 3.0; x += 0.001)
        if (small.contains(x)) {
            ASSERT_TRUE(large.contains(x)) << x;
        }
}

} // namespace
} // namespace gapzeros
