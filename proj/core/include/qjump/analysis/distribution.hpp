#pragma once

#include <span>
#include <vector>

namespace qjump::analysis {

struct EntropyDistribution {
    std::vector<double> bin_edges;
    std::vector<long long> counts;
    long long sample_count = 0;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation sigma_S
};

/// Histogram on [0, max + bin_width) with fixed-width bins.
EntropyDistribution entropy_distribution(std::span<const double> samples, double bin_width = 0.02,
                                         long long min_samples = 1000);

/// Values of a uniformly sampled series with time >= t_min, keeping every
/// `stride`-th retained point.
std::vector<double> window_samples(std::span<const double> times, std::span<const double> values, double t_min,
                                   int stride = 1);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace qjump::analysis
