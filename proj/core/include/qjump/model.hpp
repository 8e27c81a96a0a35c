#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qjump/dense_state.hpp"
#include "qjump/sector_basis.hpp"

namespace qjump {

/// Local spin basis used by every LocalTerm and MPS tensor: index 0 is up,
/// index 1 is down. Two-site blocks use index 2*s_left + s_right, i.e. the
/// ordering (up up, up down, down up, down down).
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;

enum class HamiltonianKind {
    Staggered,        // V sum_i (-1)^i sigma^z_i, sites numbered from 1
    NearestNeighbor,  // (U/4) sum_<i,i+1> (1 + sigma^z)_i (1 + sigma^z)_{i+1}
};

std::string_view to_string(HamiltonianKind kind);
HamiltonianKind hamiltonian_kind_from_string(std::string_view name);

/// Physical parameters of one open chain.
///
/// `strength` is V for the staggered model and U for the interacting one. The
/// competition ratio is always derived as strength / kappa.
struct ModelConfig {
    int n_sites = 8;
    int n_excitations = 2;
    HamiltonianKind hamiltonian = HamiltonianKind::Staggered;
    double strength = 0.0;
    double kappa = 1.0;

    double competition_ratio() const { return strength / kappa; }
    int n_bonds() const { return n_sites - 1; }

    /// Throws ConfigError on any violated precondition.
    void validate() const;

    /// Default excitation number N/4 (rounded down).
    static int default_excitations(int n_sites) { return n_sites / 4; }

    bool operator==(const ModelConfig&) const = default;
};

enum class TermKind { Hamiltonian, Jump, EffectiveNonHermitian };

/// A 1- or 2-site operator block. `sites` are 0-based and adjacent.
struct LocalTerm {
    std::vector<int> sites;
    Eigen::MatrixXcd matrix;
    TermKind kind = TermKind::Hamiltonian;
};

namespace local {
Eigen::Matrix2cd sigma_z();
Eigen::Matrix2cd sigma_plus();   // |up><down|
Eigen::Matrix2cd sigma_minus();  // |down><up|
Eigen::Matrix2cd identity2();
/// Kronecker product a (left site) x b (right site).
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);
/// (|up,down> + |down,up>) / sqrt 2 and (|up,down> - |down,up>) / sqrt 2.
Eigen::Vector4cd triplet();
Eigen::Vector4cd singlet();
}  // namespace local

/// Coherent part H_0 as local terms (diagonal in the computational basis).
std::vector<LocalTerm> build_hamiltonian(const ModelConfig& config);

/// c_l = (sigma_i^+ + sigma_j^+)(sigma_i^- - sigma_j^-) on each of the N-1 bonds.
std::vector<LocalTerm> build_jump_operators(const ModelConfig& config);

/// H_0 terms followed by -(i kappa / 2) c_l^dagger c_l on each bond.
std::vector<LocalTerm> build_effective_hamiltonian(const ModelConfig& config);

/// Normalized uniform superposition of all C(N,k) configurations.
DenseState dicke_state(int n_sites, int n_excitations);

}  // namespace qjump
