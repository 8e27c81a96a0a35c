#include "qjump/analysis/dicke_entropy.hpp"

#include <algorithm>
#include <cmath>

#include "qjump/error.hpp"
#include "qjump/sector_basis.hpp"

namespace qjump::analysis {

namespace {

double log_binomial(int n, int k) {
    if (n <= 62) return std::log(static_cast<double>(binomial(n, k)));
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check(int n, int k, int cut) {
    if (n < 1) throw ConfigError("dicke_entropy: N must be positive");
    if (k < 0 || k > n) throw ConfigError("dicke_entropy: k out of range");
    if (cut < 1 || cut > n - 1) throw ConfigError("dicke_entropy: cut out of range");
}

}  // namespace

std::vector<double> dicke_schmidt_weights(int n, int k, int cut) {
    check(n, k, cut);
    const int q0 = std::max(0, cut + k - n), q1 = std::min(cut, k);
    const double norm = log_binomial(n, k);
    std::vector<double> p;
    for (int q = q0; q <= q1; ++q) p.push_back(std::exp(log_binomial(cut, q) + log_binomial(n - cut, k - q) - norm));
    return p;
}

double dicke_entropy(int n, int k, int cut) {
    // Neumaier summation of -p log2 p.
    double sum = 0.0, comp = 0.0;
    for (double p : dicke_schmidt_weights(n, k, cut)) {
        if (p <= 0.0) continue;
        const double term = -p * std::log2(p);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return std::max(0.0, sum + comp);
}

std::vector<double> dicke_profile(int n, int k) {
    std::vector<double> s;
    for (int cut = 1; cut < n; ++cut) s.push_back(dicke_entropy(n, k, cut));
    return s;
}

double dicke_entropy_max(int n) {
    if (n < 2) throw ConfigError("dicke_entropy_max: N must be at least 2");
    return 0.5 * std::log2(0.5 * n);
}

}  // namespace qjump::analysis
