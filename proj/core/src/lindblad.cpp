#include "qjump/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "qjump/dense_backend.hpp"
#include "qjump/error.hpp"
#include "qjump/rng.hpp"
#include "qjump/sector_operator.hpp"

namespace qjump {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

Sparse to_sparse(const SectorBasis& basis, const std::vector<LocalTerm>& terms) {
    return Sparse(SectorOperator(basis, terms).matrix());
}

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_site(const DensityMatrix& rho, int site) {
    if (site < 0 || site >= rho.basis->n_sites()) throw ConfigError("site index out of range");
}

}  // namespace

DensityMatrix pure_density(const DenseState& state) {
    const Eigen::VectorXcd v = state.amplitudes / state.amplitudes.norm();
    return DensityMatrix{state.basis, v * v.adjoint()};
}

DensityMatrix random_mixed_density(const SectorBasisPtr& basis, int n_states, std::uint64_t seed) {
    if (n_states < 1) throw ConfigError("random_mixed_density: needs at least one state");
    Rng rng(seed);
    const auto d = static_cast<Eigen::Index>(basis->dimension());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    double total = 0.0;
    for (int i = 0; i < n_states; ++i) {
        const DenseState s = random_sector_state(basis, rng);
        const double w = 0.05 + rng.uniform();
        rho += w * s.amplitudes * s.amplitudes.adjoint();
        total += w;
    }
    return DensityMatrix{basis, rho / total};
}

LindbladModel::LindbladModel(const ModelConfig& config, RateConvention convention)
    : config_(config),
      basis_((config.validate(), std::make_shared<const SectorBasis>(config.n_sites, config.n_excitations))) {
    if (basis_->dimension() > 2000) throw ConfigError("Lindblad oracle limited to sector dimension <= 2000");
    h0_ = to_sparse(*basis_, build_hamiltonian(config));
    rate_ = convention == RateConvention::Unraveling ? 0.5 * config.kappa : config.kappa;
    const auto d = static_cast<Eigen::Index>(basis_->dimension());
    decay_.resize(d, d);
    if (config.n_sites >= 2) {
        for (const auto& term : build_jump_operators(config)) {
            jumps_.push_back(to_sparse(*basis_, {term}));
            decay_ += rate_ * Sparse(jumps_.back().adjoint() * jumps_.back());
        }
    }
}

Eigen::MatrixXcd LindbladModel::rhs(const Eigen::MatrixXcd& rho) const {
    const Complex mi(0.0, -1.0);
    Eigen::MatrixXcd out = mi * (h0_ * rho - rho * h0_);
    out -= decay_ * rho;
    out -= rho * decay_;
    for (const auto& l : jumps_) out += (2.0 * rate_) * ((l * rho) * l.adjoint());
    return out;
}

Eigen::MatrixXcd LindbladModel::superoperator() const {
    const auto d = dimension();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd h = Eigen::MatrixXcd(h0_);
    const Eigen::MatrixXcd k = Eigen::MatrixXcd(decay_);
    const Complex mi(0.0, -1.0);
    Eigen::MatrixXcd s = mi * (Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval());
    s -= Eigen::kroneckerProduct(id, k).eval();
    s -= Eigen::kroneckerProduct(k.transpose(), id).eval();
    for (const auto& l : jumps_) {
        const Eigen::MatrixXcd ld = Eigen::MatrixXcd(l);
        s += (2.0 * rate_) * Eigen::kroneckerProduct(ld.conjugate(), ld).eval();
    }
    return s;
}

Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const LindbladModel& model) { return model.rhs(rho.rho); }

DensityMatrix integrate_master_equation(const DensityMatrix& rho0, const LindbladModel& model, double t_max, double dt,
                                        const DensityObserver& observer, long long observe_every,
                                        IntegrationReport* report, long long check_every) {
    if (!(dt > 0.0) || !(t_max >= 0.0)) throw ConfigError("integrate_master_equation: bad time grid");
    if (rho0.rho.rows() != model.dimension()) throw ConfigError("integrate_master_equation: sector mismatch");
    const long long steps = std::llround(t_max / dt);
    IntegrationReport rep;
    rep.min_eigenvalue = min_eigenvalue(rho0.rho);
    Eigen::MatrixXcd rho = rho0.rho;
    if (observer) observer(0.0, rho);
    for (long long n = 1; n <= steps; ++n) {
        const Eigen::MatrixXcd k1 = model.rhs(rho);
        const Eigen::MatrixXcd k2 = model.rhs(rho + (0.5 * dt) * k1);
        const Eigen::MatrixXcd k3 = model.rhs(rho + (0.5 * dt) * k2);
        const Eigen::MatrixXcd k4 = model.rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (n % check_every == 0 || n == steps) {
            rep.max_trace_error = std::max(rep.max_trace_error, std::abs(rho.trace() - 1.0));
            rep.max_hermiticity_error = std::max(rep.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            const double lam = min_eigenvalue(rho);
            rep.min_eigenvalue = std::min(rep.min_eigenvalue, lam);
            if (lam < -1e-6)
                throw NumericalError("master equation lost positivity (eigenvalue " + std::to_string(lam) +
                                     "); reduce the step size");
            if (!rho.allFinite()) throw NumericalError("master equation produced non-finite entries");
        }
        if (observer && n % observe_every == 0) observer(static_cast<double>(n) * dt, rho);
    }
    rep.steps = steps;
    if (report) *report = rep;
    return DensityMatrix{rho0.basis, rho};
}

DensityMatrix lindblad_steady_state(const LindbladModel& model) {
    const auto d = model.dimension();
    if (d > 50) throw ConfigError("lindblad_steady_state: sector dimension above 50");
    Eigen::MatrixXcd s = model.superoperator();
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d * d);
    s.row(0).setZero();
    for (Eigen::Index i = 0; i < d; ++i) s(0, i + i * d) = 1.0;
    b[0] = 1.0;
    const Eigen::VectorXcd v = s.fullPivLu().solve(b);
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix{model.basis(), rho / rho.trace()};
}

int lindblad_null_space_dimension(const LindbladModel& model, double tol) {
    if (model.dimension() > 50) throw ConfigError("null-space check limited to sector dimension <= 50");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(model.superoperator());
    const auto& sv = svd.singularValues();
    int count = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] < tol * sv[0]) ++count;
    return count;
}

Complex steady_state_correlations(const DensityMatrix& rho, int i, int j) {
    check_site(rho, i);
    check_site(rho, j);
    if (i == j) throw ConfigError("correlator requires i != j");
    const auto& b = *rho.basis;
    const Config mi = b.site_mask(i), mj = b.site_mask(j);
    Complex acc = 0.0;
    for (std::size_t idx = 0; idx < b.dimension(); ++idx) {
        const Config c = b.state(idx);
        if ((c & mj) && !(c & mi))
            acc += rho.rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(b.index_of(c ^ mi ^ mj)));
    }
    return acc / rho.rho.trace().real();
}

double density_sigma_z(const DensityMatrix& rho, int site) {
    check_site(rho, site);
    const auto& b = *rho.basis;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < b.dimension(); ++idx) {
        const double p = rho.rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
        acc += b.is_up(b.state(idx), site) ? p : -p;
    }
    return acc / rho.rho.trace().real();
}

double fidelity(const DensityMatrix& rho, const DenseState& psi) {
    const Eigen::VectorXcd v = psi.amplitudes / psi.amplitudes.norm();
    return (v.adjoint() * rho.rho * v)(0, 0).real();
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const Eigen::MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double reduced_entropy(const DensityMatrix& rho, int cut) {
    const auto& b = *rho.basis;
    const int n = b.n_sites();
    if (cut < 1 || cut > n - 1) throw ConfigError("cut must lie in [1, N-1]");
    const Config right_mask = (Config{1} << (n - cut)) - 1;
    // Group basis states by their right-hand configuration.
    std::map<Config, std::vector<std::size_t>> by_right;
    for (std::size_t i = 0; i < b.dimension(); ++i) by_right[b.state(i) & right_mask].push_back(i);
    const auto dl = static_cast<Eigen::Index>(1) << cut;
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(dl, dl);
    for (const auto& [r, idx] : by_right)
        for (std::size_t p : idx)
            for (std::size_t q : idx) {
                const auto lp = static_cast<Eigen::Index>(b.state(p) >> (n - cut));
                const auto lq = static_cast<Eigen::Index>(b.state(q) >> (n - cut));
                red(lp, lq) += rho.rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
            }
    red /= red.trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(red, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace qjump
