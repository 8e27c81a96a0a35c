#include "qjump/mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "qjump/error.hpp"

namespace qjump {

namespace {

using Eigen::MatrixXcd;

void require_sites(const MpsState& mps) {
    if (mps.n_sites < 2) throw ConfigError("MPS requires at least two sites");
}

void check_bond(const MpsState& mps, int bond) {
    if (bond < 0 || bond > mps.n_sites - 2) throw ConfigError("bond index out of range");
}

// Stack the two physical slices vertically: rows (s, l) -> s * Dl + l.
MatrixXcd left_grouped(const MpsState::Site& a) {
    const auto dl = a[0].rows(), dr = a[0].cols();
    MatrixXcd m(2 * dl, dr);
    m.topRows(dl) = a[0];
    m.bottomRows(dl) = a[1];
    return m;
}

// Place the slices side by side: cols (s, r) -> s * Dr + r.
MatrixXcd right_grouped(const MpsState::Site& a) {
    const auto dl = a[0].rows(), dr = a[0].cols();
    MatrixXcd m(dl, 2 * dr);
    m.leftCols(dr) = a[0];
    m.rightCols(dr) = a[1];
    return m;
}

void shift_right(MpsState& mps) {
    const int i = mps.ortho_center;
    auto& a = mps.tensors[static_cast<std::size_t>(i)];
    auto& b = mps.tensors[static_cast<std::size_t>(i + 1)];
    const MatrixXcd m = left_grouped(a);
    const auto dl = a[0].rows();
    const auto r = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<MatrixXcd> qr(m);
    const MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(m.rows(), r);
    const MatrixXcd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    a[0] = q.topRows(dl);
    a[1] = q.bottomRows(dl);
    b[0] = rr * b[0];
    b[1] = rr * b[1];
    mps.ortho_center = i + 1;
}

void shift_left(MpsState& mps) {
    const int i = mps.ortho_center;
    auto& a = mps.tensors[static_cast<std::size_t>(i)];
    auto& b = mps.tensors[static_cast<std::size_t>(i - 1)];
    const MatrixXcd m = right_grouped(a);
    const auto dr = a[0].cols();
    const auto r = std::min(m.rows(), m.cols());
    // m = L Q with L = R^dagger, Q = Q'^dagger from the QR of m^dagger.
    Eigen::HouseholderQR<MatrixXcd> qr(m.adjoint());
    const MatrixXcd q = (qr.householderQ() * MatrixXcd::Identity(m.cols(), r)).adjoint();
    const MatrixXcd l = MatrixXcd(qr.matrixQR().topRows(r).triangularView<Eigen::Upper>()).adjoint();
    a[0] = q.leftCols(dr);
    a[1] = q.rightCols(dr);
    b[0] = b[0] * l;
    b[1] = b[1] * l;
    mps.ortho_center = i - 1;
}

MatrixXcd two_site_theta(const MpsState& mps, int bond) {
    const auto& a = mps.tensors[static_cast<std::size_t>(bond)];
    const auto& b = mps.tensors[static_cast<std::size_t>(bond + 1)];
    const auto dl = a[0].rows(), dr = b[0].cols();
    MatrixXcd theta(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) theta.block(s1 * dl, s2 * dr, dl, dr).noalias() = a[s1] * b[s2];
    return theta;
}

// 4x4 reduced density matrix of the bond, in the local index 2 s1 + s2.
Eigen::Matrix4cd bond_rdm(const MatrixXcd& theta) {
    const auto dl = theta.rows() / 2, dr = theta.cols() / 2;
    Eigen::Matrix4cd rho;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b <= a; ++b) {
            const Complex v = theta.block((a >> 1) * dl, (a & 1) * dr, dl, dr)
                                  .cwiseProduct(theta.block((b >> 1) * dl, (b & 1) * dr, dl, dr).conjugate())
                                  .sum();
            rho(a, b) = v;
            rho(b, a) = std::conj(v);
        }
    return rho;
}

double entropy_bits(const std::vector<double>& spectrum) {
    double s = 0.0;
    for (double lam : spectrum) {
        const double p = lam * lam;
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return std::max(0.0, s);
}

std::vector<double> normalized_spectrum(const Eigen::VectorXd& sv) {
    const double n = sv.norm();
    std::vector<double> out(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) out[static_cast<std::size_t>(i)] = n > 0 ? sv[i] / n : 0.0;
    return out;
}

struct Svd {
    Eigen::VectorXd s;
    MatrixXcd u, v;
};

// BDCSVD, with a Jacobi fallback when divide-and-conquer returns non-finite
// factors (seen on nearly rank-deficient input).
Svd checked_svd(const MatrixXcd& m, int bond) {
    {
        Eigen::BDCSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Svd out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
        if (out.s.allFinite() && out.u.allFinite() && out.v.allFinite()) return out;
    }
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
    if (!out.s.allFinite() || !out.u.allFinite() || !out.v.allFinite())
        throw NumericalError("SVD failed on bond " + std::to_string(bond));
    return out;
}

Complex transfer_expectation(const MpsState& mps, const std::vector<std::pair<int, Eigen::Matrix2cd>>& ops) {
    MatrixXcd e = MatrixXcd::Ones(1, 1);
    MatrixXcd norm_e = MatrixXcd::Ones(1, 1);
    std::size_t next = 0;
    for (int t = 0; t < mps.n_sites; ++t) {
        const auto& a = mps.tensors[static_cast<std::size_t>(t)];
        MatrixXcd ne = a[0].adjoint() * norm_e * a[0] + a[1].adjoint() * norm_e * a[1];
        norm_e.swap(ne);
        if (next < ops.size() && ops[next].first == t) {
            const auto& o = ops[next].second;
            MatrixXcd acc = MatrixXcd::Zero(a[0].cols(), a[0].cols());
            for (int sp = 0; sp < 2; ++sp)
                for (int s = 0; s < 2; ++s)
                    if (o(sp, s) != Complex{}) acc += o(sp, s) * (a[sp].adjoint() * e * a[s]);
            e.swap(acc);
            ++next;
        } else {
            MatrixXcd acc = a[0].adjoint() * e * a[0] + a[1].adjoint() * e * a[1];
            e.swap(acc);
        }
    }
    return e(0, 0) / norm_e(0, 0).real();
}

}  // namespace

std::vector<int> MpsState::bond_dims() const {
    std::vector<int> d;
    for (int i = 0; i + 1 < n_sites; ++i) d.push_back(static_cast<int>(tensors[static_cast<std::size_t>(i)][0].cols()));
    return d;
}

int MpsState::max_bond_dim() const {
    const auto d = bond_dims();
    return d.empty() ? 1 : *std::max_element(d.begin(), d.end());
}

MpsState product_mps(int n_sites, Config config) {
    if (n_sites < 2 || n_sites > 62) throw ConfigError("product_mps: n_sites must lie in [2, 62]");
    if ((config >> n_sites) != 0) throw ConfigError("product_mps: configuration wider than the chain");
    MpsState mps;
    mps.n_sites = n_sites;
    mps.n_excitations = std::popcount(config);
    mps.tensors.resize(static_cast<std::size_t>(n_sites));
    for (int i = 0; i < n_sites; ++i) {
        const bool up = ((config >> (n_sites - 1 - i)) & 1u) != 0;
        auto& t = mps.tensors[static_cast<std::size_t>(i)];
        t[kUp] = MatrixXcd::Constant(1, 1, up ? 1.0 : 0.0);
        t[kDown] = MatrixXcd::Constant(1, 1, up ? 0.0 : 1.0);
    }
    mps.bond_spectra.assign(static_cast<std::size_t>(n_sites - 1), std::vector<double>{1.0});
    return mps;
}

MpsState dicke_mps(int n_sites, int n_excitations, int max_bond) {
    const int n = n_sites, k = n_excitations;
    if (n < 2 || n > 62) throw ConfigError("dicke_mps: n_sites must lie in [2, 62]");
    if (k < 0 || k > n) throw ConfigError("dicke_mps: excitation number out of range");
    if (max_bond < k + 1) throw ConfigError("dicke_mps: max_bond must be at least k+1");

    // Bond b (right of site b) carries q = excitations to its left.
    auto lo = [&](int b) { return b < 0 ? 0 : std::max(0, k - (n - 1 - b)); };
    auto hi = [&](int b) { return b < 0 ? 0 : std::min(b + 1, k); };

    MpsState mps;
    mps.n_sites = n;
    mps.n_excitations = k;
    mps.tensors.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int l0 = lo(i - 1), l1 = hi(i - 1), r0 = lo(i), r1 = hi(i);
        auto& t = mps.tensors[static_cast<std::size_t>(i)];
        t[kUp] = MatrixXcd::Zero(l1 - l0 + 1, r1 - r0 + 1);
        t[kDown] = MatrixXcd::Zero(l1 - l0 + 1, r1 - r0 + 1);
        for (int q = l0; q <= l1; ++q) {
            if (q + 1 >= r0 && q + 1 <= r1) t[kUp](q - l0, q + 1 - r0) = 1.0;
            if (q >= r0 && q <= r1) t[kDown](q - l0, q - r0) = 1.0;
        }
    }
    mps.bond_spectra.assign(static_cast<std::size_t>(n - 1), {});
    canonicalize(mps);
    entropy_profile(mps);
    return mps;
}

MpsState mps_from_dense(const DenseState& state) {
    const int n = state.n_sites();
    if (n < 2 || n > 24) throw ConfigError("mps_from_dense: n_sites must lie in [2, 24]");
    const auto& basis = *state.basis;
    const std::size_t full = std::size_t{1} << n;
    // Column index: local states s_0 ... s_{N-1} with s_0 most significant.
    MatrixXcd c = MatrixXcd::Zero(1, static_cast<Eigen::Index>(full));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const std::size_t col = (~basis.state(i)) & (full - 1);
        c(0, static_cast<Eigen::Index>(col)) = state.amplitudes[static_cast<Eigen::Index>(i)];
    }
    c /= c.norm();

    MpsState mps;
    mps.n_sites = n;
    mps.n_excitations = state.n_excitations();
    mps.tensors.resize(static_cast<std::size_t>(n));
    mps.bond_spectra.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) {
        const auto dl = c.rows();
        const auto rest = c.cols() / 2;
        MatrixXcd m(2 * dl, rest);
        m.topRows(dl) = c.leftCols(rest);
        m.bottomRows(dl) = c.rightCols(rest);
        const auto svd = checked_svd(m, i);
        const Eigen::VectorXd& sv = svd.s;
        Eigen::Index chi = 0;
        while (chi < sv.size() && sv[chi] > 1e-14 * sv[0]) ++chi;
        chi = std::max<Eigen::Index>(chi, 1);
        auto& t = mps.tensors[static_cast<std::size_t>(i)];
        t[0] = svd.u.block(0, 0, dl, chi);
        t[1] = svd.u.block(dl, 0, dl, chi);
        c = sv.head(chi).asDiagonal() * svd.v.leftCols(chi).adjoint();
        mps.bond_spectra[static_cast<std::size_t>(i)] = normalized_spectrum(sv.head(chi));
    }
    auto& last = mps.tensors[static_cast<std::size_t>(n - 1)];
    last[0] = c.col(0);
    last[1] = c.col(1);
    mps.ortho_center = n - 1;
    return mps;
}

DenseState mps_to_dense(const MpsState& mps, const SectorBasisPtr& basis) {
    if (basis->n_sites() != mps.n_sites) throw ConfigError("mps_to_dense: site count mismatch");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis->dimension()));
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        const Config c = basis->state(i);
        Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Ones(1);
        for (int t = 0; t < mps.n_sites; ++t) {
            const int s = basis->is_up(c, t) ? kUp : kDown;
            row = row * mps.tensors[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
        }
        v[static_cast<Eigen::Index>(i)] = row(0);
    }
    return DenseState{basis, std::move(v)};
}

void move_center(MpsState& mps, int site) {
    if (site < 0 || site >= mps.n_sites) throw ConfigError("move_center: site out of range");
    while (mps.ortho_center < site) shift_right(mps);
    while (mps.ortho_center > site) shift_left(mps);
}

void canonicalize(MpsState& mps) {
    require_sites(mps);
    mps.ortho_center = mps.n_sites - 1;
    move_center(mps, 0);
    auto& a = mps.tensors[0];
    const double n = std::sqrt(a[0].squaredNorm() + a[1].squaredNorm());
    if (!(n > 0.0)) throw NumericalError("canonicalize: zero-norm MPS");
    a[0] /= n;
    a[1] /= n;
}

double mps_norm(const MpsState& mps) {
    const auto& a = mps.tensors[static_cast<std::size_t>(mps.ortho_center)];
    return std::sqrt(a[0].squaredNorm() + a[1].squaredNorm());
}

double apply_two_site_gate(MpsState& mps, const Eigen::Matrix4cd& gate, int bond, const Truncation& trunc,
                           SweepDirection direction) {
    require_sites(mps);
    check_bond(mps, bond);
    if (mps.ortho_center != bond && mps.ortho_center != bond + 1)
        throw std::logic_error("apply_two_site_gate: orthogonality centre not adjacent to bond");

    const MatrixXcd theta = two_site_theta(mps, bond);
    const auto dl = theta.rows() / 2, dr = theta.cols() / 2;
    MatrixXcd out = MatrixXcd::Zero(theta.rows(), theta.cols());
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Complex g = gate(a, b);
            if (g == Complex{}) continue;
            out.block((a >> 1) * dl, (a & 1) * dr, dl, dr) += g * theta.block((b >> 1) * dl, (b & 1) * dr, dl, dr);
        }

    const double before = theta.squaredNorm();
    const double after = out.squaredNorm();
    if (!std::isfinite(after)) throw NumericalError("non-finite gate output on bond " + std::to_string(bond));
    if (!(after > 1e-28 * before)) return -1.0;

    const auto svd = checked_svd(out, bond);
    const Eigen::VectorXd& sv = svd.s;
    const double total = sv.squaredNorm();
    Eigen::Index chi = 0;
    const Eigen::Index cap = std::min<Eigen::Index>(sv.size(), trunc.max_bond);
    const double floor = trunc.cutoff * std::sqrt(total);
    while (chi < cap && sv[chi] >= floor) ++chi;
    chi = std::max<Eigen::Index>(chi, 1);
    const double kept = sv.head(chi).squaredNorm();
    const double eps = std::max(0.0, (total - kept) / total);

    const Eigen::VectorXd s = sv.head(chi) / std::sqrt(kept);
    auto& a = mps.tensors[static_cast<std::size_t>(bond)];
    auto& b = mps.tensors[static_cast<std::size_t>(bond + 1)];
    const MatrixXcd u = svd.u.leftCols(chi);
    const MatrixXcd vh = svd.v.leftCols(chi).adjoint();
    if (direction == SweepDirection::LeftToRight) {
        a[0] = u.topRows(dl);
        a[1] = u.bottomRows(dl);
        const MatrixXcd sv_h = s.asDiagonal() * vh;
        b[0] = sv_h.leftCols(dr);
        b[1] = sv_h.rightCols(dr);
        mps.ortho_center = bond + 1;
    } else {
        const MatrixXcd us = u * s.asDiagonal();
        a[0] = us.topRows(dl);
        a[1] = us.bottomRows(dl);
        b[0] = vh.leftCols(dr);
        b[1] = vh.rightCols(dr);
        mps.ortho_center = bond;
    }
    mps.bond_spectra[static_cast<std::size_t>(bond)].assign(s.data(), s.data() + s.size());
    mps.trunc_ledger += eps;
    return eps;
}

std::vector<Eigen::Matrix4cd> bond_hamiltonians(const ModelConfig& config) {
    config.validate();
    const int n = config.n_sites;
    if (n < 2) throw ConfigError("bond Hamiltonians require N >= 2");
    std::vector<Eigen::Matrix4cd> h(static_cast<std::size_t>(n - 1), Eigen::Matrix4cd::Zero());
    const Eigen::Matrix2cd id = local::identity2();
    for (const LocalTerm& t : build_effective_hamiltonian(config)) {
        if (t.sites.size() == 2) {
            h[static_cast<std::size_t>(t.sites[0])] += t.matrix;
            continue;
        }
        const int i = t.sites[0];
        const Eigen::Matrix2cd m = t.matrix;
        if (i == 0) {
            h[0] += local::kron(m, id);
        } else if (i == n - 1) {
            h[static_cast<std::size_t>(n - 2)] += local::kron(id, m);
        } else {
            h[static_cast<std::size_t>(i - 1)] += local::kron(id, 0.5 * m);
            h[static_cast<std::size_t>(i)] += local::kron(0.5 * m, id);
        }
    }
    return h;
}

TebdPlan make_tebd_plan(const ModelConfig& config, double dt, const Truncation& trunc, int order, int substeps) {
    if (!(dt > 0.0)) throw ConfigError("TEBD dt must be positive");
    if (order != 2 && order != 4) throw ConfigError("TEBD order must be 2 or 4");
    if (substeps < 1) throw ConfigError("TEBD substeps must be positive");
    if (trunc.max_bond < 1 || !(trunc.cutoff >= 0.0)) throw ConfigError("invalid truncation settings");

    // Sequence of (parity, time) layers before merging.
    std::vector<std::pair<int, double>> seq;
    auto strang = [&](double tau) {
        seq.emplace_back(0, 0.5 * tau);
        seq.emplace_back(1, tau);
        seq.emplace_back(0, 0.5 * tau);
    };
    const double tau = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
        if (order == 2) {
            strang(tau);
        } else {
            const double p = 1.0 / (4.0 - std::cbrt(4.0));
            for (double f : {p, p, 1.0 - 4.0 * p, p, p}) strang(f * tau);
        }
    }
    std::vector<std::pair<int, double>> merged;
    for (const auto& layer : seq) {
        if (!merged.empty() && merged.back().first == layer.first)
            merged.back().second += layer.second;
        else
            merged.push_back(layer);
    }

    const auto h = bond_hamiltonians(config);
    TebdPlan plan;
    plan.dt = dt;
    plan.order = order;
    plan.substeps = substeps;
    plan.trunc = trunc;
    for (const auto& [parity, t] : merged) {
        if (parity == 1 && h.size() < 2) continue;
        TebdPlan::Layer layer;
        layer.parity = parity;
        layer.gates.resize(h.size(), Eigen::Matrix4cd::Identity());
        for (std::size_t b = static_cast<std::size_t>(parity); b < h.size(); b += 2)
            layer.gates[b] = (Complex(0.0, -t) * h[b]).exp();
        plan.layers.push_back(std::move(layer));
    }
    return plan;
}

double tebd_no_jump_step(MpsState& mps, const TebdPlan& plan) {
    require_sites(mps);
    const int nb = mps.n_sites - 1;
    double eps = 0.0;
    for (const auto& layer : plan.layers) {
        // Sweep towards the far end from wherever the centre currently is.
        const bool forward = mps.ortho_center <= nb / 2;
        std::vector<int> bonds;
        for (int b = layer.parity; b < nb; b += 2) bonds.push_back(b);
        if (!forward) std::reverse(bonds.begin(), bonds.end());
        for (int b : bonds) {
            move_center(mps, forward ? b : b + 1);
            const double e = apply_two_site_gate(mps, layer.gates[static_cast<std::size_t>(b)], b, plan.trunc,
                                                  forward ? SweepDirection::LeftToRight : SweepDirection::RightToLeft);
            if (e < 0.0) throw NumericalError("no-jump gate annihilated the state on bond " + std::to_string(b));
            eps += e;
        }
    }
    return eps;
}

std::vector<double> mps_jump_weights(MpsState& mps, const Eigen::Matrix4cd& jump, double kappa) {
    require_sites(mps);
    const Eigen::Matrix4cd cc = jump.adjoint() * jump;
    const int nb = mps.n_sites - 1;
    std::vector<double> w(static_cast<std::size_t>(nb));
    const bool forward = mps.ortho_center <= nb / 2;
    for (int i = 0; i < nb; ++i) {
        const int b = forward ? i : nb - 1 - i;
        move_center(mps, forward ? b : b + 1);
        const Eigen::Matrix4cd rho = bond_rdm(two_site_theta(mps, b));
        w[static_cast<std::size_t>(b)] = std::max(0.0, kappa * (cc * rho).trace().real() / rho.trace().real());
    }
    return w;
}

double mps_apply_jump(MpsState& mps, const Eigen::Matrix4cd& jump, int bond, const Truncation& trunc) {
    check_bond(mps, bond);
    if (mps.ortho_center != bond && mps.ortho_center != bond + 1) move_center(mps, bond);
    const auto dir = mps.ortho_center == bond ? SweepDirection::LeftToRight : SweepDirection::RightToLeft;
    const double e = apply_two_site_gate(mps, jump, bond, trunc, dir);
    if (e < 0.0) throw std::logic_error("mps_apply_jump: jump has zero weight on this state");
    return e;
}

std::vector<double> entropy_profile(MpsState& mps) {
    require_sites(mps);
    move_center(mps, 0);
    std::vector<double> s(static_cast<std::size_t>(mps.n_sites - 1));
    for (int b = 0; b < mps.n_sites - 1; ++b) {
        auto& a = mps.tensors[static_cast<std::size_t>(b)];
        auto& next = mps.tensors[static_cast<std::size_t>(b + 1)];
        const auto dl = a[0].rows();
        const auto svd = checked_svd(left_grouped(a), b);
        const Eigen::VectorXd& sv = svd.s;
        a[0] = svd.u.topRows(dl);
        a[1] = svd.u.bottomRows(dl);
        const MatrixXcd carry = sv.asDiagonal() * svd.v.adjoint();
        next[0] = carry * next[0];
        next[1] = carry * next[1];
        mps.ortho_center = b + 1;
        mps.bond_spectra[static_cast<std::size_t>(b)] = normalized_spectrum(sv);
        s[static_cast<std::size_t>(b)] = entropy_bits(mps.bond_spectra[static_cast<std::size_t>(b)]);
    }
    return s;
}

double mps_entropy(MpsState& mps, int cut) {
    require_sites(mps);
    if (cut < 1 || cut > mps.n_sites - 1) throw ConfigError("cut must lie in [1, N-1]");
    const int b = cut - 1;
    if (mps.ortho_center <= b) {
        move_center(mps, b);
        const auto svd = checked_svd(left_grouped(mps.tensors[static_cast<std::size_t>(b)]), b);
        mps.bond_spectra[static_cast<std::size_t>(b)] = normalized_spectrum(svd.s);
    } else {
        move_center(mps, b + 1);
        const auto svd = checked_svd(right_grouped(mps.tensors[static_cast<std::size_t>(b + 1)]), b);
        mps.bond_spectra[static_cast<std::size_t>(b)] = normalized_spectrum(svd.s);
    }
    return entropy_bits(mps.bond_spectra[static_cast<std::size_t>(b)]);
}

Complex mps_correlator(const MpsState& mps, int i, int j) {
    if (i < 0 || j < 0 || i >= mps.n_sites || j >= mps.n_sites || i == j)
        throw ConfigError("mps_correlator: invalid site pair");
    const Eigen::Matrix2cd sp = local::sigma_plus(), sm = local::sigma_minus();
    if (i < j) return transfer_expectation(mps, {{i, sp}, {j, sm}});
    return transfer_expectation(mps, {{j, sm}, {i, sp}});
}

double mps_sigma_z(const MpsState& mps, int site) {
    if (site < 0 || site >= mps.n_sites) throw ConfigError("mps_sigma_z: site out of range");
    return transfer_expectation(mps, {{site, local::sigma_z()}}).real();
}

}  // namespace qjump
