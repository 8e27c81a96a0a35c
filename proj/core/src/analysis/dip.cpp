#include "qjump/analysis/dip.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "qjump/error.hpp"
#include "qjump/rng.hpp"

namespace qjump::analysis {

namespace {

// Quantiles of the dip for uniform samples (Hartigan & Hartigan 1985).
constexpr std::array<double, 6> kLevels{0.01, 0.1, 0.90, 0.95, 0.995, 0.999};
constexpr std::array<double, 7> kSizes{4, 5, 6, 20, 50, 100, 200};
constexpr double kTable[7][6] = {
    {0.1250, 0.1250, 0.1863, 0.2056, 0.2387, 0.2458}, {0.1000, 0.1000, 0.1773, 0.1872, 0.1981, 0.1996},
    {0.0833, 0.0833, 0.1586, 0.1645, 0.2034, 0.2224}, {0.0474, 0.0569, 0.0970, 0.1047, 0.1262, 0.1382},
    {0.0312, 0.0378, 0.0645, 0.0702, 0.0842, 0.0926}, {0.0228, 0.0274, 0.0471, 0.0510, 0.0619, 0.0687},
    {0.0165, 0.0197, 0.0341, 0.0370, 0.0449, 0.0496},
};

struct ColumnFit {
    double a, b;  // a / sqrt(n) + b
};

// Least-squares fit of each column against 1/sqrt(n).
const std::array<ColumnFit, 6>& column_fits() {
    static const std::array<ColumnFit, 6> fits = [] {
        std::array<ColumnFit, 6> out{};
        for (std::size_t c = 0; c < kLevels.size(); ++c) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double m = static_cast<double>(kSizes.size());
            for (std::size_t r = 0; r < kSizes.size(); ++r) {
                const double x = 1.0 / std::sqrt(kSizes[r]);
                sx += x;
                sy += kTable[r][c];
                sxx += x * x;
                sxy += x * kTable[r][c];
            }
            const double a = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            out[c] = {a, (sy - a * sx) / m};
        }
        return out;
    }();
    return fits;
}

// Thresholds at size n, clamped to be nonnegative and nondecreasing.
std::array<double, 6> thresholds(double n) {
    std::array<double, 6> q{};
    const auto& f = column_fits();
    for (std::size_t c = 0; c < q.size(); ++c) {
        q[c] = std::max(0.0, f[c].a / std::sqrt(n) + f[c].b);
        if (c > 0) q[c] = std::max(q[c], q[c - 1]);
    }
    return q;
}

}  // namespace

std::string_view to_string(DipMethod m) {
    switch (m) {
        case DipMethod::Auto: return "auto";
        case DipMethod::Table: return "table-interpolation";
        case DipMethod::Bootstrap: return "bootstrap";
    }
    return "unknown";
}

double dip_statistic(std::span<const double> samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 1) throw ConfigError("dip_statistic: empty sample");
    // 1-based arrays throughout, following the classical formulation.
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    std::copy(samples.begin(), samples.end(), x.begin() + 1);
    std::sort(x.begin() + 1, x.end());

    double dip = 1.0;  // in units of 1/(2n)
    if (n < 2 || x[static_cast<std::size_t>(n)] == x[1]) return dip / (2.0 * n);

    std::vector<int> mn(static_cast<std::size_t>(n) + 1), mj(static_cast<std::size_t>(n) + 1);
    std::vector<int> gcm(static_cast<std::size_t>(n) + 2), lcm(static_cast<std::size_t>(n) + 2);
    auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };
    auto at = [](std::vector<int>& v, int i) -> int& { return v[static_cast<std::size_t>(i)]; };

    // Indices for the convex minorant.
    at(mn, 1) = 1;
    for (int j = 2; j <= n; ++j) {
        at(mn, j) = j - 1;
        for (;;) {
            const int mnj = at(mn, j), mnmnj = at(mn, mnj);
            if (mnj == 1 || (X(j) - X(mnj)) * (mnj - mnmnj) < (X(mnj) - X(mnmnj)) * (j - mnj)) break;
            at(mn, j) = mnmnj;
        }
    }
    // Indices for the concave majorant.
    at(mj, n) = n;
    for (int k = n - 1; k >= 1; --k) {
        at(mj, k) = k + 1;
        for (;;) {
            const int mjk = at(mj, k), mjmjk = at(mj, mjk);
            if (mjk == n || (X(k) - X(mjk)) * (mjk - mjmjk) < (X(mjk) - X(mjmjk)) * (k - mjk)) break;
            at(mj, k) = mjmjk;
        }
    }

    int low = 1, high = n;
    for (;;) {
        at(gcm, 1) = high;
        int i = 1;
        while (at(gcm, i) > low) {
            at(gcm, i + 1) = at(mn, at(gcm, i));
            ++i;
        }
        const int l_gcm = i;
        int ig = l_gcm, ix = l_gcm - 1;

        at(lcm, 1) = low;
        i = 1;
        while (at(lcm, i) < high) {
            at(lcm, i + 1) = at(mj, at(lcm, i));
            ++i;
        }
        const int l_lcm = i;
        int ih = l_lcm, iv = 2;

        // Largest distance between the minorant and the majorant on [low, high].
        long double d = 0.0L;
        if (l_gcm != 2 || l_lcm != 2) {
            do {
                const int gcmix = at(gcm, ix), lcmiv = at(lcm, iv);
                long double dx;
                if (gcmix > lcmiv) {
                    const int gcmi1 = at(gcm, ix + 1);
                    dx = (lcmiv - gcmi1 + 1) -
                         (static_cast<long double>(X(lcmiv)) - X(gcmi1)) * (gcmix - gcmi1) / (X(gcmix) - X(gcmi1));
                    ++iv;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    const int lcmiv1 = at(lcm, iv - 1);
                    dx = (static_cast<long double>(X(gcmix)) - X(lcmiv1)) * (lcmiv - lcmiv1) / (X(lcmiv) - X(lcmiv1)) -
                         (gcmix - lcmiv1 - 1);
                    --ix;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                ix = std::max(ix, 1);
                iv = std::min(iv, l_lcm);
            } while (at(gcm, ix) != at(lcm, iv));
        } else {
            d = 1.0L;
        }
        if (d < dip) break;

        // Dips of the minorant and majorant on the selected stretches.
        double dip_l = 0.0;
        for (int j = ig; j < l_gcm; ++j) {
            double max_t = 1.0;
            const int jb = at(gcm, j + 1), je = at(gcm, j);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) max_t = std::max(max_t, (jj - jb + 1) - (X(jj) - X(jb)) * c);
            }
            dip_l = std::max(dip_l, max_t);
        }
        double dip_u = 0.0;
        for (int j = ih; j < l_lcm; ++j) {
            double max_t = 1.0;
            const int jb = at(lcm, j), je = at(lcm, j + 1);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) max_t = std::max(max_t, (X(jj) - X(jb)) * c - (jj - jb - 1));
            }
            dip_u = std::max(dip_u, max_t);
        }
        dip = std::max(dip, std::max(dip_l, dip_u));

        if (low == at(gcm, ig) && high == at(lcm, ih)) break;
        low = at(gcm, ig);
        high = at(lcm, ih);
    }
    return dip / (2.0 * n);
}

double dip_quantile(double p, double n) {
    if (!(n >= 1.0)) throw ConfigError("dip_quantile: n must be >= 1");
    if (!(p >= kLevels.front() && p <= kLevels.back())) throw ConfigError("dip_quantile: level outside [0.01, 0.999]");
    const auto q = thresholds(n);
    std::size_t c = 0;
    while (c + 2 < kLevels.size() && p > kLevels[c + 1]) ++c;
    const double w = (p - kLevels[c]) / (kLevels[c + 1] - kLevels[c]);
    return q[c] + w * (q[c + 1] - q[c]);
}

double dip_p_table(double dip, double n) {
    if (!(n >= 1.0)) throw ConfigError("dip_p_table: n must be >= 1");
    const auto q = thresholds(n);
    // Piecewise-linear CDF through (0, 0), the tabulated (q_c, p_c) and (1/4, 1).
    std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
    for (std::size_t c = 0; c < q.size(); ++c)
        if (q[c] > knots.back().first) knots.emplace_back(q[c], kLevels[c]);
    if (knots.back().first < 0.25) knots.emplace_back(0.25, 1.0);
    if (dip <= 0.0) return 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (dip <= knots[i].first) {
            const auto [x0, p0] = knots[i - 1];
            const auto [x1, p1] = knots[i];
            return p0 + (p1 - p0) * (dip - x0) / (x1 - x0);
        }
    }
    return 1.0;
}

double dip_p_bootstrap(double dip, long long n, int resamples, std::uint64_t seed) {
    if (n < 4) throw ConfigError("dip_p_bootstrap: n must be >= 4");
    if (resamples < 1) throw ConfigError("dip_p_bootstrap: resamples must be positive");
    std::vector<double> u(static_cast<std::size_t>(n));
    long long below = 0;
    for (int r = 0; r < resamples; ++r) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(r)));
        for (auto& v : u) v = rng.uniform();
        if (dip_statistic(u) < dip) ++below;
    }
    return static_cast<double>(below) / resamples;
}

DipResult hartigan_dip(std::span<const double> samples, DipMethod method, std::uint64_t seed) {
    if (samples.size() < 4) throw ConfigError("hartigan_dip: needs at least 4 samples");
    DipResult r;
    r.n = static_cast<long long>(samples.size());
    r.dip = dip_statistic(samples);
    if (method == DipMethod::Auto) method = r.n <= 50000 ? DipMethod::Table : DipMethod::Bootstrap;
    r.method = method;
    r.p_multimodal = method == DipMethod::Table ? dip_p_table(r.dip, static_cast<double>(r.n))
                                                : dip_p_bootstrap(r.dip, r.n, 10000, seed);
    return r;
}

}  // namespace qjump::analysis
