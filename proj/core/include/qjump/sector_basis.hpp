#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace qjump {

/// Computational basis configuration. Site i (0-based) lives in bit (n-1-i),
/// a set bit is an up spin (one excitation).
using Config = std::uint64_t;

/// Exact binomial coefficient for n <= 62.
std::uint64_t binomial(int n, int k);

/// Rank of `c` among all width-agnostic masks with the same popcount,
/// ordered by numeric value (combinadic rank).
std::uint64_t combinadic_rank(Config c);

/// Basis of the k-excitation sector of an n-site chain.
///
/// States are ordered lexicographically on their bitstrings (site 1 first),
/// which coincides with increasing numeric value of Config.
class SectorBasis {
public:
    SectorBasis(int n_sites, int n_excitations);

    int n_sites() const { return n_; }
    int n_excitations() const { return k_; }
    std::size_t dimension() const { return states_.size(); }

    Config state(std::size_t index) const { return states_[index]; }
    const std::vector<Config>& states() const { return states_; }
    std::size_t index_of(Config c) const { return static_cast<std::size_t>(combinadic_rank(c)); }

    bool is_up(Config c, int site) const { return ((c >> (n_ - 1 - site)) & 1u) != 0; }
    Config site_mask(int site) const { return Config{1} << (n_ - 1 - site); }

    /// Largest sector the dense backends accept.
    static constexpr std::size_t kMaxDimension = 50'000'000;

private:
    int n_;
    int k_;
    std::vector<Config> states_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

/// Schmidt-block bookkeeping for the (cut | n-cut) bipartition of a sector.
///
/// Each basis state maps to a block q (excitations on the left part) and a
/// (row, col) position inside the C(cut,q) x C(n-cut,k-q) coefficient matrix.
struct CutIndex {
    int cut = 0;
    struct Entry {
        int block;
        std::uint32_t row;
        std::uint32_t col;
    };
    std::vector<Entry> entries;
    std::vector<int> block_q;        // excitation count of each block
    std::vector<std::uint32_t> rows;  // per block
    std::vector<std::uint32_t> cols;  // per block
};

CutIndex make_cut_index(const SectorBasis& basis, int cut);

}  // namespace qjump
