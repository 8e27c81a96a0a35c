#include "qjump/sector_basis.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "qjump/error.hpp"

namespace qjump {

namespace {

struct BinomialTable {
    static constexpr int kMax = 63;
    std::uint64_t c[kMax][kMax]{};
    BinomialTable() {
        for (int n = 0; n < kMax; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
        }
    }
};

const BinomialTable& table() {
    static const BinomialTable t;
    return t;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (n >= BinomialTable::kMax) throw ConfigError("binomial: n too large for exact table");
    return table().c[n][k];
}

std::uint64_t combinadic_rank(Config c) {
    std::uint64_t rank = 0;
    int j = 1;
    while (c != 0) {
        const int p = std::countr_zero(c);
        rank += binomial(p, j);
        ++j;
        c &= c - 1;
    }
    return rank;
}

SectorBasis::SectorBasis(int n_sites, int n_excitations) : n_(n_sites), k_(n_excitations) {
    if (n_ < 1 || n_ > 62) throw ConfigError("n_sites must be in [1, 62], got " + std::to_string(n_));
    if (k_ < 0 || k_ > n_) {
        throw ConfigError("n_excitations must be in [0, n_sites], got " + std::to_string(k_));
    }
    const std::uint64_t dim = binomial(n_, k_);
    if (dim > kMaxDimension) {
        throw ConfigError("sector dimension C(" + std::to_string(n_) + "," + std::to_string(k_) +
                          ") is too large for the dense representation");
    }
    states_.reserve(dim);
    if (k_ == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack enumerates fixed-popcount masks in increasing order.
    Config c = (Config{1} << k_) - 1;
    const Config limit = Config{1} << n_;
    while (c < limit) {
        states_.push_back(c);
        const Config u = c & (~c + 1);
        const Config v = c + u;
        c = v + (((v ^ c) / u) >> 2);
    }
}

CutIndex make_cut_index(const SectorBasis& basis, int cut) {
    const int n = basis.n_sites();
    const int k = basis.n_excitations();
    if (cut < 1 || cut > n - 1) throw ConfigError("cut must be in [1, N-1]");
    CutIndex idx;
    idx.cut = cut;
    const int q_lo = std::max(0, k - (n - cut));
    const int q_hi = std::min(cut, k);
    std::vector<int> block_of_q(k + 1, -1);
    for (int q = q_lo; q <= q_hi; ++q) {
        block_of_q[q] = static_cast<int>(idx.block_q.size());
        idx.block_q.push_back(q);
        idx.rows.push_back(static_cast<std::uint32_t>(binomial(cut, q)));
        idx.cols.push_back(static_cast<std::uint32_t>(binomial(n - cut, k - q)));
    }
    const Config right_mask = (Config{1} << (n - cut)) - 1;
    idx.entries.reserve(basis.dimension());
    for (Config c : basis.states()) {
        const Config left = c >> (n - cut);
        const Config right = c & right_mask;
        const int q = std::popcount(left);
        idx.entries.push_back({block_of_q[q], static_cast<std::uint32_t>(combinadic_rank(left)),
                               static_cast<std::uint32_t>(combinadic_rank(right))});
    }
    return idx;
}

}  // namespace qjump
