#include <gtest/gtest.h>

#include <cmath>

#include "qjump/analysis/transition.hpp"

using namespace qjump::analysis;

namespace {

// Peak at g_n = 0.4 + shift / n on a 0.05 grid.
PeakCurve curve(int n, double shift, double width = 0.3) {
    PeakCurve c;
    c.n_sites = n;
    const double g0 = 0.4 + shift / n;
    for (int i = 1; i <= 20; ++i) {
        const double g = 0.05 * i;
        c.gamma.push_back(g);
        c.value.push_back(1.0 - (g - g0) * (g - g0) / (width * width));
        c.dip_p.push_back(g < g0 ? 0.5 : 0.99);
    }
    return c;
}

}  // namespace

TEST(Transition, QuadraticPeakIsExactOnParabola) {
    const auto p = fit_peak(curve(16, 0.0));
    EXPECT_TRUE(p.accepted);
    EXPECT_NEAR(p.gamma_c, 0.4, 1e-10);
}

TEST(Transition, RejectsMinimum) {
    PeakCurve c = curve(16, 0.0);
    for (auto& v : c.value) v = -v;
    EXPECT_FALSE(fit_peak(c).accepted);
}

TEST(Transition, ExtrapolatesFourSizesQuadratically) {
    const auto t = locate_transition({curve(12, 0.6), curve(16, 0.6), curve(20, 0.6), curve(24, 0.6)});
    ASSERT_TRUE(t.valid);
    EXPECT_EQ(t.extrapolation, "quadratic-1/N");
    EXPECT_NEAR(t.gamma_c, 0.4, 1e-6);
    ASSERT_EQ(t.dip_crossing.size(), 4u);
}

TEST(Transition, ThreeSizesFallBackToLinear) {
    const auto t = locate_transition({curve(12, 0.6), curve(16, 0.6), curve(20, 0.6)});
    ASSERT_TRUE(t.valid);
    EXPECT_EQ(t.extrapolation, "linear-1/N");
    EXPECT_NEAR(t.gamma_c, 0.4, 1e-6);
}

TEST(Transition, TooFewSizesIsInvalid) {
    const auto t = locate_transition({curve(12, 0.6), curve(16, 0.6)});
    EXPECT_FALSE(t.valid);
    EXPECT_FALSE(t.note.empty());
}

TEST(Transition, DipCrossingIsInterpolated) {
    const auto t = locate_transition({curve(12, 0.0), curve(16, 0.0), curve(20, 0.0)});
    for (double g : t.dip_crossing) {
        EXPECT_GT(g, 0.35);
        EXPECT_LE(g, 0.45);
    }
}
