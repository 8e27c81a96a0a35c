#include "qjump/model.hpp"

#include <cmath>
#include <string>

#include "qjump/error.hpp"

namespace qjump {

std::string_view to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::Staggered: return "staggered";
        case HamiltonianKind::NearestNeighbor: return "nearest_neighbor";
    }
    return "unknown";
}

HamiltonianKind hamiltonian_kind_from_string(std::string_view name) {
    if (name == "staggered") return HamiltonianKind::Staggered;
    if (name == "nearest_neighbor" || name == "interacting") return HamiltonianKind::NearestNeighbor;
    throw ConfigError("unknown hamiltonian '" + std::string(name) +
                      "' (expected staggered or nearest_neighbor)");
}

void ModelConfig::validate() const {
    if (n_sites < 1) throw ConfigError("model.n_sites must be positive");
    if (n_excitations < 0 || n_excitations > n_sites) {
        throw ConfigError("model.n_excitations must satisfy 0 <= k <= n_sites");
    }
    if (!std::isfinite(strength) || strength < 0.0) {
        throw ConfigError("model.strength must be finite and non-negative");
    }
    if (!std::isfinite(kappa) || kappa < 0.0) throw ConfigError("model.kappa must be finite and non-negative");
}

namespace local {

Eigen::Matrix2cd sigma_z() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(kUp, kUp) = 1.0;
    m(kDown, kDown) = -1.0;
    return m;
}

Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(kUp, kDown) = 1.0;
    return m;
}

Eigen::Matrix2cd sigma_minus() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(kDown, kUp) = 1.0;
    return m;
}

Eigen::Matrix2cd identity2() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Vector4cd triplet() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(2 * kUp + kDown) = M_SQRT1_2;
    v(2 * kDown + kUp) = M_SQRT1_2;
    return v;
}

Eigen::Vector4cd singlet() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(2 * kUp + kDown) = M_SQRT1_2;
    v(2 * kDown + kUp) = -M_SQRT1_2;
    return v;
}

}  // namespace local

std::vector<LocalTerm> build_hamiltonian(const ModelConfig& config) {
    config.validate();
    std::vector<LocalTerm> terms;
    const int n = config.n_sites;
    switch (config.hamiltonian) {
        case HamiltonianKind::Staggered: {
            terms.reserve(n);
            for (int s = 0; s < n; ++s) {
                // Sites are numbered from 1, so site 1 carries -V.
                const double sign = ((s + 1) % 2 == 0) ? 1.0 : -1.0;
                terms.push_back({{s}, config.strength * sign * local::sigma_z(), TermKind::Hamiltonian});
            }
            break;
        }
        case HamiltonianKind::NearestNeighbor: {
            const Eigen::Matrix2cd one_plus_z = local::identity2() + local::sigma_z();
            const Eigen::Matrix4cd block = 0.25 * config.strength * local::kron(one_plus_z, one_plus_z);
            for (int s = 0; s + 1 < n; ++s) terms.push_back({{s, s + 1}, block, TermKind::Hamiltonian});
            break;
        }
    }
    return terms;
}

std::vector<LocalTerm> build_jump_operators(const ModelConfig& config) {
    config.validate();
    if (config.n_sites < 2) throw ConfigError("jump operators need at least two sites");
    using namespace local;
    const Eigen::Matrix4cd raise = kron(sigma_plus(), identity2()) + kron(identity2(), sigma_plus());
    const Eigen::Matrix4cd lower = kron(sigma_minus(), identity2()) - kron(identity2(), sigma_minus());
    const Eigen::Matrix4cd c = raise * lower;
    std::vector<LocalTerm> terms;
    terms.reserve(config.n_sites - 1);
    for (int s = 0; s + 1 < config.n_sites; ++s) terms.push_back({{s, s + 1}, c, TermKind::Jump});
    return terms;
}

std::vector<LocalTerm> build_effective_hamiltonian(const ModelConfig& config) {
    std::vector<LocalTerm> terms = build_hamiltonian(config);
    if (config.n_sites < 2) return terms;
    const Complex factor(0.0, -0.5 * config.kappa);
    for (const LocalTerm& jump : build_jump_operators(config)) {
        terms.push_back({jump.sites, factor * (jump.matrix.adjoint() * jump.matrix),
                         TermKind::EffectiveNonHermitian});
    }
    return terms;
}

DenseState dicke_state(int n_sites, int n_excitations) {
    auto basis = std::make_shared<const SectorBasis>(n_sites, n_excitations);
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    DenseState state{basis, Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)))};
    return state;
}

}  // namespace qjump
