#include "qjump/analysis/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "qjump/error.hpp"

namespace qjump::analysis {

EntropyDistribution entropy_distribution(std::span<const double> samples, double bin_width, long long min_samples) {
    if (!(bin_width > 0.0)) throw ConfigError("entropy_distribution: bin width must be positive");
    if (static_cast<long long>(samples.size()) < min_samples)
        throw ConfigError("entropy_distribution: " + std::to_string(samples.size()) + " samples, need " +
                          std::to_string(min_samples));
    if (samples.empty()) throw ConfigError("entropy_distribution: no samples");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo < 0.0 || !std::isfinite(*hi)) throw ConfigError("entropy_distribution: samples must be finite and >= 0");

    EntropyDistribution d;
    const auto bins = static_cast<std::size_t>(std::floor(*hi / bin_width)) + 1;
    d.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) d.bin_edges[i] = bin_width * static_cast<double>(i);
    d.counts.assign(bins, 0);
    double sum = 0.0;
    for (double s : samples) {
        const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(s / bin_width)));
        ++d.counts[b];
        sum += s;
    }
    d.sample_count = static_cast<long long>(samples.size());
    d.mean = sum / static_cast<double>(d.sample_count);
    double ss = 0.0;
    for (double s : samples) ss += (s - d.mean) * (s - d.mean);
    d.std = std::sqrt(ss / static_cast<double>(d.sample_count));
    return d;
}

std::vector<double> window_samples(std::span<const double> times, std::span<const double> values, double t_min,
                                   int stride) {
    if (times.size() != values.size()) throw ConfigError("window_samples: length mismatch");
    if (stride < 1) throw ConfigError("window_samples: stride must be positive");
    std::vector<double> out;
    int seen = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min - 1e-9) continue;
        if (seen++ % stride == 0) out.push_back(values[i]);
    }
    return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ConfigError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace qjump::analysis
