#include <gtest/gtest.h>

#include <set>

#include "qjump/rng.hpp"

using qjump::philox4x32;
using qjump::Rng;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, StreamIsPureFunctionOfKeyAndPosition) {
    Rng a(42), b(42);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 100; ++i) first.push_back(a.next_u64());
    for (int i = 0; i < 100; ++i) EXPECT_EQ(b.next_u64(), first[i]);

    Rng c(42);
    c.seek(57);
    EXPECT_EQ(c.next_u64(), first[57]);
    EXPECT_EQ(c.draws(), 58u);
}

TEST(Rng, DerivedKeysAreDistinct) {
    std::set<std::uint64_t> keys;
    for (std::uint64_t m = 0; m < 10000; ++m) keys.insert(Rng::derive(123, m));
    EXPECT_EQ(keys.size(), 10000u);
    EXPECT_NE(Rng::derive(1, 0), Rng::derive(2, 0));
}

TEST(Rng, UniformMoments) {
    Rng r(7);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 4e-3);
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 2e-3);
}

TEST(Rng, NormalMoments) {
    Rng r(8);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 1e-2);
    EXPECT_NEAR(s2 / n, 1.0, 1e-2);
}
