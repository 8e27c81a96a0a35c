#include "qjump/dense_backend.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qjump/error.hpp"
#include "qjump/rng.hpp"

namespace qjump {

namespace {

std::vector<SectorOperator> assemble_each(const SectorBasis& basis, const std::vector<LocalTerm>& terms) {
    std::vector<SectorOperator> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.emplace_back(basis, std::span<const LocalTerm>(&t, 1));
    return out;
}

void check_cut(int n, int cut) {
    if (cut < 1 || cut > n - 1) throw ConfigError("cut must lie in [1, N-1]");
}

void check_site(int n, int site) {
    if (site < 0 || site >= n) throw ConfigError("site index out of range");
}

inline int local_index(const SectorBasis& b, Config c, int site) { return b.is_up(c, site) ? kUp : kDown; }

}  // namespace

DenseModel::DenseModel(const ModelConfig& config)
    : config_(config),
      basis_((config.validate(), std::make_shared<const SectorBasis>(config.n_sites, config.n_excitations))),
      hamiltonian_(*basis_, build_hamiltonian(config)),
      effective_(*basis_, build_effective_hamiltonian(config)),
      jumps_(config.n_sites >= 2 ? assemble_each(*basis_, build_jump_operators(config)) : std::vector<SectorOperator>{}),
      cuts_(static_cast<std::size_t>(config.n_sites + 1)),
      cut_flags_(std::make_unique<std::once_flag[]>(static_cast<std::size_t>(config.n_sites + 1))) {}

const CutIndex& DenseModel::cut_index(int cut) const {
    check_cut(config_.n_sites, cut);
    const auto i = static_cast<std::size_t>(cut);
    std::call_once(cut_flags_[i], [&] { cuts_[i] = std::make_unique<CutIndex>(make_cut_index(*basis_, cut)); });
    return *cuts_[i];
}

DenseState evolve_no_jump(const DenseState& state, const SectorOperator& h_eff, double dt) {
    if (!(dt > 0.0)) throw ConfigError("evolve_no_jump: dt must be positive");
    // exp(-i H dt) = exp(-i mu dt) exp(-i (H - mu) dt), Taylor series on the
    // shifted operator with ||(H - mu) tau|| <= 1 per substep.
    const Complex mu = h_eff.shift();
    const int substeps = std::max(1, static_cast<int>(std::ceil(h_eff.shifted_infinity_norm() * dt)));
    const double tau = dt / substeps;
    const Complex step(0.0, -tau);
    const Complex phase = std::exp(Complex(0.0, -tau) * mu);

    Eigen::VectorXcd v = state.amplitudes;
    Eigen::VectorXcd term(v.size()), hv(v.size());
    for (int s = 0; s < substeps; ++s) {
        Eigen::VectorXcd sum = v;
        term = v;
        const double ref = v.norm();
        for (int order = 1; order <= 40; ++order) {
            h_eff.apply(term, hv, mu);
            const Complex f = step / static_cast<double>(order);
            double norm2 = 0.0;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                term[i] = f * hv[i];
                sum[i] += term[i];
                norm2 += std::norm(term[i]);
            }
            if (std::sqrt(norm2) <= 1e-15 * ref) break;
        }
        v = phase * sum;
    }
    if (!v.allFinite()) throw NumericalError("evolve_no_jump: non-finite amplitudes");
    return DenseState{state.basis, std::move(v)};
}

double total_jump_rate(const DenseState& state, const SectorOperator& h_eff) {
    const Complex e = state.amplitudes.dot(h_eff.apply(state.amplitudes));
    return std::max(0.0, -2.0 * e.imag() / state.amplitudes.squaredNorm());
}

std::vector<double> jump_weights(const DenseState& state, std::span<const SectorOperator> jumps, double kappa) {
    std::vector<double> w(jumps.size());
    for (std::size_t l = 0; l < jumps.size(); ++l) w[l] = kappa * (jumps[l].matrix() * state.amplitudes).squaredNorm();
    return w;
}

DenseState apply_jump(const DenseState& state, const SectorOperator& jump) {
    Eigen::VectorXcd v = jump.matrix() * state.amplitudes;
    const double n = v.norm();
    if (!(n > 0.0)) throw std::logic_error("apply_jump: jump has zero weight on this state");
    v /= n;
    return DenseState{state.basis, std::move(v)};
}

DenseState apply_jump(const DenseState& state, const DenseModel& model, int bond) {
    if (bond < 0 || bond >= model.n_bonds()) throw ConfigError("bond index out of range");
    return apply_jump(state, model.jumps()[static_cast<std::size_t>(bond)]);
}

std::vector<double> schmidt_probabilities(const DenseState& state, const CutIndex& cut) {
    const std::size_t nb = cut.block_q.size();
    std::vector<Eigen::MatrixXcd> blocks(nb);
    for (std::size_t b = 0; b < nb; ++b) blocks[b].setZero(cut.rows[b], cut.cols[b]);
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        const auto& e = cut.entries[static_cast<std::size_t>(i)];
        blocks[static_cast<std::size_t>(e.block)](e.row, e.col) = state.amplitudes[i];
    }
    std::vector<double> p;
    for (const auto& m : blocks) {
        if (m.rows() == 1 || m.cols() == 1) {
            p.push_back(m.squaredNorm());
            continue;
        }
        const Eigen::MatrixXcd gram = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint()) : Eigen::MatrixXcd(m.adjoint() * m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) p.push_back(es.eigenvalues()[i]);
    }
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

double entanglement_entropy(const DenseState& state, const CutIndex& cut) {
    const double norm2 = state.amplitudes.squaredNorm();
    double s = 0.0;
    for (double p : schmidt_probabilities(state, cut)) {
        p /= norm2;
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return std::max(0.0, s);
}

double entanglement_entropy(const DenseState& state, int cut) {
    check_cut(state.n_sites(), cut);
    return entanglement_entropy(state, make_cut_index(*state.basis, cut));
}

std::vector<double> entanglement_profile(const DenseState& state, const DenseModel& model) {
    std::vector<double> s;
    for (int cut = 1; cut < state.n_sites(); ++cut) s.push_back(entanglement_entropy(state, model.cut_index(cut)));
    return s;
}

Complex correlator(const DenseState& state, int i, int j) {
    const auto& b = *state.basis;
    check_site(b.n_sites(), i);
    check_site(b.n_sites(), j);
    if (i == j) throw ConfigError("correlator requires i != j");
    const Config mi = b.site_mask(i), mj = b.site_mask(j);
    Complex acc = 0.0;
    for (std::size_t idx = 0; idx < b.dimension(); ++idx) {
        const Config c = b.state(idx);
        if ((c & mj) && !(c & mi)) {
            const Config target = c ^ mi ^ mj;
            acc += std::conj(state.amplitudes[static_cast<Eigen::Index>(b.index_of(target))]) *
                   state.amplitudes[static_cast<Eigen::Index>(idx)];
        }
    }
    return acc / state.amplitudes.squaredNorm();
}

double sigma_z(const DenseState& state, int site) {
    const auto& b = *state.basis;
    check_site(b.n_sites(), site);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < b.dimension(); ++idx) {
        const double w = std::norm(state.amplitudes[static_cast<Eigen::Index>(idx)]);
        acc += b.is_up(b.state(idx), site) ? w : -w;
    }
    return acc / state.amplitudes.squaredNorm();
}

Complex overlap(const DenseState& state, const DenseState& reference) {
    if (state.n_sites() != reference.n_sites() || state.n_excitations() != reference.n_excitations())
        throw ConfigError("overlap: states live in different sectors");
    return reference.amplitudes.dot(state.amplitudes);
}

Eigen::Matrix4cd bond_density_matrix(const DenseState& state, int site) {
    const auto& b = *state.basis;
    check_site(b.n_sites(), site);
    check_site(b.n_sites(), site + 1);
    const Config mi = b.site_mask(site), mj = b.site_mask(site + 1);
    const int k = b.n_excitations();
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (std::size_t idx = 0; idx < b.dimension(); ++idx) {
        const Config c = b.state(idx);
        const int a = 2 * local_index(b, c, site) + local_index(b, c, site + 1);
        const Config rest = c & ~(mi | mj);
        for (int bl = 0; bl < 4; ++bl) {
            const Config other = rest | ((bl >> 1) == kUp ? mi : 0) | ((bl & 1) == kUp ? mj : 0);
            if (std::popcount(other) != k) continue;
            rho(a, bl) += state.amplitudes[static_cast<Eigen::Index>(idx)] *
                          std::conj(state.amplitudes[static_cast<Eigen::Index>(b.index_of(other))]);
        }
    }
    return rho / state.amplitudes.squaredNorm();
}

DenseState random_sector_state(const SectorBasisPtr& basis, Rng& rng) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis->dimension()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v[i] = Complex(re, im);
    }
    v.normalize();
    return DenseState{basis, std::move(v)};
}

DenseState product_state(const SectorBasisPtr& basis, Config config) {
    if (std::popcount(config) != basis->n_excitations() || (config >> basis->n_sites()) != 0)
        throw ConfigError("product_state: configuration is not in the sector");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    v[static_cast<Eigen::Index>(basis->index_of(config))] = 1.0;
    return DenseState{basis, std::move(v)};
}

}  // namespace qjump
