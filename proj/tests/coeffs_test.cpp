#include "gapzeros/coeffs.hpp"
#include "gapzeros/tridiag.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace gapzeros {
namespace {

// Independent enumeration of the dyadic sequence: writes every level out in full.
std::vector<double> beta_brute_force(std::size_t count) {
    std::vector<double> out{0.0};
    for (int level = 1; out.size() < count; ++level) {
        const int denom = 1 << level;
        for (int j = -(denom - 1); j <= denom - 1 && out.size() < count; ++j)
            out.push_back(static_cast<double>(j) / denom);
    }
    return out;
}

// Block index by linear scan over n.
std::size_t block_brute_force(std::size_t k) {
    for (std::size_t n = 1;; ++n)
        if (2 * n * n <= k && k < 2 * (n + 1) * (n + 1)) return n;
}

TEST(Constant, QueriesAreConstant) {
    const auto seq = make_constant(1.0, 0.0);
    EXPECT_EQ(seq.a(5), 1.0);
    EXPECT_EQ(seq.b(17), 0.0);
    EXPECT_EQ(seq.a(5), seq.a(5));
}

TEST(Constant, KnownSupportIsFreeBand) {
    const auto seq = make_constant(1.0, 0.0);
    ASSERT_TRUE(seq.known_support());
    EXPECT_EQ(*seq.known_support(), SupportModel::interval(-2.0, 2.0));

    // Large truncations fill [-2, 2].
    const auto zs = eigenvalues(truncate(seq, 2000));
    EXPECT_GT(zs.zeros.front(), -2.0);
    EXPECT_LT(zs.zeros.back(), 2.0);
    EXPECT_LT(zs.zeros.front(), -2.0 + 1e-4);
    EXPECT_GT(zs.zeros.back(), 2.0 - 1e-4);
}

TEST(Constant, RejectsNonPositiveA) {
    EXPECT_THROW(make_constant(0.0, 0.0), PreconditionError);
    EXPECT_THROW(make_constant(-1.0, 0.0), PreconditionError);
    EXPECT_THROW(make_constant(NAN, 0.0), PreconditionError);
}

TEST(Sequence, IndexZeroRejected) {
    const auto seq = make_constant(1.0, 0.0);
    EXPECT_THROW((void)seq.a(0), PreconditionError);
    EXPECT_THROW((void)seq.b(0), PreconditionError);
}

TEST(Periodic2, AlternatesOffDiagonal) {
    const auto seq = make_periodic2(3.0, 1.0, 0.0);
    EXPECT_EQ(seq.a(1), 3.0);
    EXPECT_EQ(seq.a(2), 1.0);
    EXPECT_EQ(seq.a(3), 3.0);
    EXPECT_EQ(seq.b(4), 0.0);
}

TEST(Periodic2, DegeneratePeriodMatchesConstant) {
    const auto p = make_periodic2(1.0, 1.0, 0.0);
    const auto c = make_constant(1.0, 0.0);
    for (std::size_t n = 1; n <= 50; ++n) {
        EXPECT_EQ(p.a(n), c.a(n));
        EXPECT_EQ(p.b(n), c.b(n));
    }
}

TEST(Periodic2, KnownSupportIsTwoBands) {
    const auto seq = make_periodic2(3.0, 1.0, 0.0);
    ASSERT_TRUE(seq.known_support());
    EXPECT_EQ(*seq.known_support(), SupportModel({{-4.0, -2.0}, {2.0, 4.0}}, {}));
}

TEST(Periodic2, SmallFirstCouplingAddsGapEigenvalue) {
    // p_{2n}(0) = (-1/3)^n is square summable, so 0 is an eigenvalue.
    const auto seq = make_periodic2(1.0, 3.0, 0.0);
    ASSERT_TRUE(seq.known_support());
    EXPECT_EQ(seq.known_support()->points(), std::vector<double>{0.0});
    const auto T = truncate(seq, 401);
    EXPECT_EQ(count_zeros_in(T, -1e-9, 1e-9), 1u);
}

TEST(Periodic2, RejectsNonPositive) {
    EXPECT_THROW(make_periodic2(0.0, 1.0, 0.0), PreconditionError);
    EXPECT_THROW(make_periodic2(1.0, -2.0, 0.0), PreconditionError);
}

TEST(Beta, DisplayedPrefix) {
    const std::vector<double> expected{0, -0.5, 0, 0.5, -0.75, -0.5, -0.25, 0, 0.25, 0.5, 0.75, -0.875};
    for (std::size_t k = 1; k <= expected.size(); ++k) EXPECT_EQ(beta(k), expected[k - 1]) << "k=" << k;
    EXPECT_EQ(beta(2), -0.5);
}

TEST(Beta, MatchesBruteForce) {
    const auto ref = beta_brute_force(5000);
    for (std::size_t k = 1; k <= ref.size(); ++k) ASSERT_EQ(beta(k), ref[k - 1]) << "k=" << k;
}

TEST(Beta, StaysInsideOpenInterval) {
    for (std::uint64_t k = 1; k <= 1000000; ++k) {
        const double b = beta(k);
        ASSERT_LT(std::abs(b), 1.0) << "k=" << k;
    }
}

TEST(Beta, EveryLevelEnumeratesAllDyadics) {
    std::set<double> seen;
    for (std::uint64_t k = 1; k <= 300; ++k) seen.insert(beta(k));
    for (int level = 1; level <= 6; ++level) {
        const int denom = 1 << level;
        for (int j = -(denom - 1); j < denom; ++j)
            EXPECT_TRUE(seen.count(static_cast<double>(j) / denom)) << j << "/" << denom;
    }
}

TEST(Beta, RejectsZeroIndex) { EXPECT_THROW((void)beta(0), PreconditionError); }

TEST(Section4, Coefficients) {
    const auto seq = make_section4();
    EXPECT_EQ(seq.b(1), 0.0);
    EXPECT_EQ(seq.b(8), -0.5);
    EXPECT_EQ(seq.b(17), -0.5);
    EXPECT_EQ(seq.b(18), 0.0);
    EXPECT_EQ(seq.a(1), 3.0);
    EXPECT_EQ(seq.a(2), 1.0);
    EXPECT_EQ(seq.a(71), 3.0);
    ASSERT_TRUE(seq.known_support());
    EXPECT_EQ(*seq.known_support(), SupportModel({{-5.0, -1.0}, {1.0, 5.0}}, {}));
}

TEST(Section4, BlocksPartitionIndices) {
    const auto seq = make_section4();
    for (std::uint64_t k = 2; k <= 100000; ++k) {
        const auto n = section4_block(k);
        ASSERT_EQ(n, block_brute_force(k)) << "k=" << k;
        ASSERT_EQ(seq.b(k), beta(n));
    }
    EXPECT_EQ(section4_block(1), 0u);
}

TEST(RankOne, ReplacesOnlyFirstDiagonal) {
    const auto base = make_constant(1.0, 0.0);
    const auto r = make_rank_one(base, 3.0);
    EXPECT_EQ(r.b(1), 3.0);
    EXPECT_EQ(r.b(2), 0.0);
    EXPECT_EQ(r.a(1), 1.0);
    EXPECT_FALSE(r.known_support());
}

TEST(RankOne, SingleBoundStateAboveBand) {
    const auto r = make_rank_one(make_constant(1.0, 0.0), 3.0);
    const auto zs = eigenvalues(truncate(r, 500));
    std::size_t above = 0;
    for (double z : zs.zeros) above += z > 2.0 ? 1 : 0;
    EXPECT_EQ(above, 1u);
    EXPECT_NEAR(zs.zeros.back(), 10.0 / 3.0, 1e-10);
}

TEST(RankOne, NoOpReplacement) {
    const auto base = make_section4();
    const auto same = make_rank_one(base, base.b(1));
    for (std::size_t n = 1; n <= 40; ++n) EXPECT_EQ(same.b(n), base.b(n));
    const auto c = make_rank_one(make_constant(1.0, 0.0), 0.0);
    EXPECT_EQ(c.kind(), "constant");
    EXPECT_TRUE(c.known_support());
}

TEST(Strip, ShiftsCoefficients) {
    const auto c = make_constant(1.0, 0.0);
    const auto sc = strip(c);
    for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(sc.a(n), 1.0);
    EXPECT_EQ(strip(make_periodic2(3.0, 1.0, 0.0)).a(1), 1.0);

    const auto s4 = make_section4();
    const auto twice = strip(strip(s4));
    for (std::size_t n = 1; n <= 200; ++n) {
        EXPECT_EQ(twice.b(n), s4.b(n + 2));
        EXPECT_EQ(twice.a(n), s4.a(n + 2));
    }
}

TEST(Strip, RankOneLosesPerturbation) {
    const auto r = make_rank_one(make_constant(1.0, 0.0), 3.0);
    const auto s = strip(r);
    for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(s.b(n), 0.0);
}

TEST(Strip, CommutesWithTruncation) {
    const std::vector<CoefficientSequence> families{make_constant(1.0, 0.0), make_periodic2(3.0, 1.0, 0.0),
                                                    make_section4(),
                                                    make_rank_one(make_constant(1.0, 0.0), 3.0),
                                                    make_explicit({2.0, 0.5, 1.0}, {0.1, -0.2, 0.3, 0.0})};
    for (const auto& seq : families) {
        for (std::size_t n : {1u, 2u, 7u, 50u}) {
            EXPECT_EQ(truncate(strip(seq), n), truncate(seq, n + 1).without_first()) << seq.kind() << " n=" << n;
        }
    }
}

TEST(Explicit, TailRepeatsLastEntry) {
    const auto e = make_explicit({2.0, 1.0}, {0.5});
    EXPECT_EQ(e.a(1), 2.0);
    EXPECT_EQ(e.a(2), 1.0);
    EXPECT_EQ(e.a(100), 1.0);
    EXPECT_EQ(e.b(7), 0.5);
    EXPECT_THROW(make_explicit({}, {0.0}), PreconditionError);
    EXPECT_THROW(make_explicit({1.0, 0.0}, {0.0}), PreconditionError);
}

} // namespace
} // namespace gapzeros
