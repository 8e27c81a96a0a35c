#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qjump/analysis/fit.hpp"

using namespace qjump::analysis;

namespace {

std::vector<double> cft_profile(int n, double c, double s0) {
    std::vector<double> p;
    for (int l = 1; l < n; ++l)
        p.push_back(c / 6.0 * std::log2(n / std::numbers::pi * std::sin(std::numbers::pi * l / n)) + s0);
    return p;
}

}  // namespace

TEST(FitCft, RecoversPlantedCentralCharge) {
    const auto r = fit_cft(cft_profile(40, 1.3, 0.2), 40);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value("c_eff"), 1.3, 1e-10);
    EXPECT_NEAR(r.value("s_0"), 0.2, 1e-10);
    EXPECT_LT(r.residual_norm, 1e-10);
}

TEST(FitCft, ConstantProfileHasZeroCharge) {
    const auto r = fit_cft(std::vector<double>(23, 0.7), 24);
    EXPECT_NEAR(r.value("c_eff"), 0.0, 1e-12);
    EXPECT_NEAR(r.value("s_0"), 0.7, 1e-12);
}

TEST(FitCft, WindowIsRespected) {
    auto p = cft_profile(20, 2.0, 0.0);
    p[0] = 100.0;  // l = 1 is outside [2, N-2]
    p[18] = -100.0;
    EXPECT_NEAR(fit_cft(p, 20).value("c_eff"), 2.0, 1e-10);
    EXPECT_THROW(fit_cft(p, 20, 5, 4), std::exception);
}

TEST(FitDecay, PowerLaw) {
    std::vector<double> x, y;
    for (int d = 1; d <= 12; ++d) {
        x.push_back(d);
        y.push_back(2.0 / std::pow(d, 3.0));
    }
    const auto r = fit_decay(x, y);
    EXPECT_NEAR(r.power_law.value("a"), 2.0, 1e-10);
    EXPECT_NEAR(r.power_law.value("b"), 3.0, 1e-10);
    EXPECT_NEAR(r.exponent_mean, 3.0, 1e-6);
    EXPECT_LT(r.power_law.residual_norm, r.exponential.residual_norm);
}

TEST(FitDecay, ExponentialAndExclusions) {
    std::vector<double> x, y;
    for (int d = 1; d <= 10; ++d) {
        x.push_back(d);
        y.push_back(3.0 * std::exp(-0.4 * d));
    }
    y.push_back(0.0);
    x.push_back(11);
    const auto r = fit_decay(x, y);
    EXPECT_EQ(r.excluded, 1);
    EXPECT_NEAR(r.exponential.value("a"), 3.0, 1e-10);
    EXPECT_NEAR(r.exponential.value("b"), 0.4, 1e-10);
}

TEST(FitNonlinear, ExpOffset) {
    std::vector<double> t, y;
    for (int i = 0; i < 300; ++i) {
        t.push_back(1.0 + 0.05 * i);
        y.push_back(-1.5 * std::exp(-0.8 * (t.back() - 1.0)) + 2.0);
    }
    const auto r = fit_exp_offset(t, y);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value("a"), -1.5, 1e-6);
    EXPECT_NEAR(r.value("b"), 0.8, 1e-6);
    EXPECT_NEAR(r.value("c"), 2.0, 1e-6);
}

TEST(FitNonlinear, InversePowerOffset) {
    std::vector<double> x, y;
    for (int i = 1; i <= 20; ++i) {
        x.push_back(i);
        y.push_back(3.0 / i + 1.0);
    }
    const auto r = fit_inverse_power_offset(x, y);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value("a"), 3.0, 1e-6);
    EXPECT_NEAR(r.value("b"), 1.0, 1e-6);
    EXPECT_NEAR(r.value("c"), 1.0, 1e-6);
}

TEST(FitNonlinear, BondDimensionExtrapolation) {
    const std::vector<double> d{16, 32, 64, 128};
    std::vector<double> v;
    for (double x : d) v.push_back(1.0 + 2.0 / x);
    const auto r = bond_dim_extrapolate(d, v);
    EXPECT_NEAR(r.value("c"), 1.0, 1e-6);
    EXPECT_NEAR(r.value("convergence_error"), 2.0 / 128, 1e-6);
}

TEST(FitResult, NamedAccess) {
    FitResult r;
    r.add("x", 1.5, 0.1);
    EXPECT_EQ(r.value("x"), 1.5);
    EXPECT_EQ(r.error("x"), 0.1);
    EXPECT_ANY_THROW(r.value("y"));
}

TEST(StatisticalError, StdOverRootM) {
    EXPECT_DOUBLE_EQ(statistical_error(2.0, 100), 0.2);
    EXPECT_ANY_THROW(statistical_error(1.0, 0));
}
