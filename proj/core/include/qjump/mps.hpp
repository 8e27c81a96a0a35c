#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qjump/dense_state.hpp"
#include "qjump/model.hpp"

namespace qjump {

/// Open-boundary MPS. tensors[i][s] is the (D_{i-1} x D_i) matrix for local
/// state s (kUp / kDown). Bond b sits between sites b and b+1.
struct MpsState {
    using Site = std::array<Eigen::MatrixXcd, 2>;

    int n_sites = 0;
    int n_excitations = 0;
    std::vector<Site> tensors;
    /// Normalized Schmidt values per bond, descending. A bond's entry is
    /// refreshed whenever an SVD acts on it; entropy_profile refreshes all.
    std::vector<std::vector<double>> bond_spectra;
    int ortho_center = 0;
    double trunc_ledger = 0.0;

    std::vector<int> bond_dims() const;
    int max_bond_dim() const;
};

struct Truncation {
    int max_bond = 64;
    /// Singular values with s / sqrt(sum s^2) below cutoff are discarded.
    double cutoff = 1e-12;
};

/// Product state from a configuration (set bit of site i at position N-1-i).
MpsState product_mps(int n_sites, Config config);

/// Exact Dicke state with bond dimension min(k+1, ...). Throws ConfigError if
/// max_bond < k+1.
MpsState dicke_mps(int n_sites, int n_excitations, int max_bond);

/// Exact MPS of a sector state by successive SVDs; for tests and small N.
MpsState mps_from_dense(const DenseState& state);

/// Amplitudes of the MPS on the sector basis of `basis` (unnormalized).
DenseState mps_to_dense(const MpsState& mps, const SectorBasisPtr& basis);

/// Move the orthogonality centre by QR sweeps.
void move_center(MpsState& mps, int site);

/// Right-normalize everything and put the centre at site 0, normalizing the state.
void canonicalize(MpsState& mps);

double mps_norm(const MpsState& mps);

enum class SweepDirection { LeftToRight, RightToLeft };

/// Contract a 4x4 gate on bond (b, b+1), SVD, truncate and renormalize.
/// The centre must be on site b or b+1; it ends on b+1 for LeftToRight and
/// on b for RightToLeft. Returns the normalized discarded weight, which is
/// also added to trunc_ledger. Returns a negative value, leaving the state
/// untouched, if the gate annihilates the state.
double apply_two_site_gate(MpsState& mps, const Eigen::Matrix4cd& gate, int bond, const Truncation& trunc,
                           SweepDirection direction = SweepDirection::LeftToRight);

/// Gate schedule for exp(-i H_eff dt): second-order (even dt/2, odd dt, even
/// dt/2) or fourth-order Suzuki composition, optionally with substeps.
struct TebdPlan {
    struct Layer {
        int parity;  // 0: bonds 0,2,4...; 1: bonds 1,3,5...
        std::vector<Eigen::Matrix4cd> gates;  // indexed by bond
    };
    double dt = 0.01;
    int order = 2;
    int substeps = 1;
    Truncation trunc;
    std::vector<Layer> layers;
};

TebdPlan make_tebd_plan(const ModelConfig& config, double dt, const Truncation& trunc, int order = 2, int substeps = 1);

/// Two-site blocks of H_eff on every bond with single-site terms split half
/// to each neighbouring bond (boundary sites fold into their only bond).
std::vector<Eigen::Matrix4cd> bond_hamiltonians(const ModelConfig& config);

/// One no-jump time step; returns the step's summed discarded weight.
double tebd_no_jump_step(MpsState& mps, const TebdPlan& plan);

/// delta P_mu = kappa <c_mu^dagger c_mu> on every bond (normalized state).
std::vector<double> mps_jump_weights(MpsState& mps, const Eigen::Matrix4cd& jump, double kappa);

/// Apply c on a bond as a gate; throws std::logic_error on zero weight.
double mps_apply_jump(MpsState& mps, const Eigen::Matrix4cd& jump, int bond, const Truncation& trunc);

/// Entropy in bits at every bond 1..N-1, refreshing bond_spectra.
std::vector<double> entropy_profile(MpsState& mps);

/// Entropy in bits of the first `cut` sites; moves the centre next to the cut.
double mps_entropy(MpsState& mps, int cut);

Complex mps_correlator(const MpsState& mps, int i, int j);
double mps_sigma_z(const MpsState& mps, int site);

/// Binary checkpoint with a versioned header.
void save_checkpoint(const MpsState& mps, const std::filesystem::path& path);
MpsState load_checkpoint(const std::filesystem::path& path);

}  // namespace qjump
