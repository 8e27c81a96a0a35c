#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qjump::analysis {

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> std_errors;
    double residual_norm = 0.0;
    bool converged = false;
    std::string note;

    double value(std::string_view name) const;
    double error(std::string_view name) const;
    void add(std::string name, double v, double err);
};

/// S(l) = (c/6) log2[(N/pi) sin(pi l/N)] + s_0 over l in [l_min, l_max].
/// `profile[l-1]` holds S(l) for l = 1..N-1. Defaults to [2, N-2].
FitResult fit_cft(std::span<const double> profile, int n_sites, int l_min = 2, int l_max = -1);

struct DecayFit {
    FitResult power_law;    // a / x^b, fitted on log y vs log x
    FitResult exponential;  // a exp(-b x), fitted on log y vs x
    std::vector<double> exponent_distance;
    std::vector<double> exponent_series;  // -d log y / d log x, centred differences
    double exponent_mean = 0.0;
    double exponent_std = 0.0;
    int excluded = 0;  // nonpositive inputs dropped before the log fits
};

DecayFit fit_decay(std::span<const double> distance, std::span<const double> values);

/// a exp(-b (t - t_0)) + c with t_0 = t.front(), b > 0.
FitResult fit_exp_offset(std::span<const double> t, std::span<const double> y);

/// a / x^b + c with b > 0.
FitResult fit_inverse_power_offset(std::span<const double> x, std::span<const double> y);

/// a / x^b + c fit over bond dimensions; adds "convergence_error" =
/// |c - value at the largest bond dimension|.
FitResult bond_dim_extrapolate(std::span<const double> bond_dims, std::span<const double> values);

/// Delta / sqrt(M).
double statistical_error(double sample_std, long long m);

}  // namespace qjump::analysis
