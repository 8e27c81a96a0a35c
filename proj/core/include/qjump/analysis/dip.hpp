#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace qjump::analysis {

enum class DipMethod { Auto, Table, Bootstrap };

std::string_view to_string(DipMethod m);

struct DipResult {
    double dip = 0.0;
    long long n = 0;
    double p_multimodal = 0.0;  // estimated P(dip_uniform < dip)
    DipMethod method = DipMethod::Table;
};

/// Hartigan's dip statistic (greatest convex minorant / least concave
/// majorant construction). Takes unsorted samples; n >= 1. The smallest
/// possible value is 1/(2n).
double dip_statistic(std::span<const double> samples);

/// Null quantile of the dip for uniform data at probability level p in
/// [0.01, 0.999], from a/sqrt(n) + b fits to the tabulated quantiles,
/// linear in p between the tabulated levels.
double dip_quantile(double p, double n);

/// Null CDF at `dip` from the interpolated table.
double dip_p_table(double dip, double n);

/// Null CDF at `dip` from `resamples` uniform samples of size n.
double dip_p_bootstrap(double dip, long long n, int resamples = 10000, std::uint64_t seed = 0x5eed);

/// Auto uses the table for n <= 50000 and the bootstrap otherwise.
DipResult hartigan_dip(std::span<const double> samples, DipMethod method = DipMethod::Auto, std::uint64_t seed = 0x5eed);

}  // namespace qjump::analysis
