#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qjump/dense_state.hpp"
#include "qjump/model.hpp"
#include "qjump/sector_operator.hpp"

namespace qjump {

class Rng;

/// Immutable dense-sector representation of one model: H_0, H_eff and the
/// jump operators as sparse sector matrices. Shared read-only by workers.
class DenseModel {
public:
    explicit DenseModel(const ModelConfig& config);

    const ModelConfig& config() const { return config_; }
    const SectorBasisPtr& basis() const { return basis_; }
    int n_bonds() const { return static_cast<int>(jumps_.size()); }

    const SectorOperator& hamiltonian() const { return hamiltonian_; }
    const SectorOperator& effective_hamiltonian() const { return effective_; }
    const std::vector<SectorOperator>& jumps() const { return jumps_; }

    /// Cached Schmidt-block layout for a cut; safe to call concurrently.
    const CutIndex& cut_index(int cut) const;

private:
    ModelConfig config_;
    SectorBasisPtr basis_;
    SectorOperator hamiltonian_;
    SectorOperator effective_;
    std::vector<SectorOperator> jumps_;
    mutable std::vector<std::unique_ptr<CutIndex>> cuts_;
    mutable std::unique_ptr<std::once_flag[]> cut_flags_;
};

/// exp(-i H_eff dt)|psi>, not renormalized. Uses a scaled Taylor series with
/// substeps chosen so that each substep has ||H dt|| <= 1/2; the truncated
/// remainder is below 1e-15 relative.
DenseState evolve_no_jump(const DenseState& state, const SectorOperator& h_eff, double dt);

/// delta P_mu = kappa <psi| c_mu^dagger c_mu |psi> for each bond.
std::vector<double> jump_weights(const DenseState& state, std::span<const SectorOperator> jumps, double kappa);

/// Sum of all delta P_mu from one product with H_eff: -2 Im <psi|H_eff|psi>.
double total_jump_rate(const DenseState& state, const SectorOperator& h_eff);

/// c_l|psi> / ||c_l|psi>||. Throws std::logic_error when the weight vanishes.
DenseState apply_jump(const DenseState& state, const SectorOperator& jump);
DenseState apply_jump(const DenseState& state, const DenseModel& model, int bond);

/// Schmidt probabilities (squared Schmidt coefficients), sorted descending.
std::vector<double> schmidt_probabilities(const DenseState& state, const CutIndex& cut);

/// Von Neumann entropy in bits of the first `cut` sites.
double entanglement_entropy(const DenseState& state, const CutIndex& cut);
double entanglement_entropy(const DenseState& state, int cut);

/// Entropy at every cut 1..N-1.
std::vector<double> entanglement_profile(const DenseState& state, const DenseModel& model);

/// <sigma_i^+ sigma_j^-> for i != j (0-based sites).
Complex correlator(const DenseState& state, int i, int j);

/// <sigma^z_site>.
double sigma_z(const DenseState& state, int site);

/// <reference|state>; throws ConfigError if the sectors differ.
Complex overlap(const DenseState& state, const DenseState& reference);

/// 4x4 reduced density matrix of sites (site, site+1) in the local two-site basis.
Eigen::Matrix4cd bond_density_matrix(const DenseState& state, int site);

/// Haar-random normalized state in the sector.
DenseState random_sector_state(const SectorBasisPtr& basis, Rng& rng);

/// Single basis configuration (set bit = up spin).
DenseState product_state(const SectorBasisPtr& basis, Config config);

}  // namespace qjump
