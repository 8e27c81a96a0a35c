#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qjump/dense_state.hpp"
#include "qjump/model.hpp"

namespace qjump {

/// Rate attached to each jump operator in
///   d rho/dt = -i[H_0, rho] + sum_l kappa_l (2 c rho c^+ - c^+c rho - rho c^+c).
/// Unraveling: kappa_l = kappa / 2, the ensemble limit of trajectories with
/// delta P = kappa <c^+c>. Literal: kappa_l = kappa (twice the trajectory
/// dissipator; kept as a negative control).
enum class RateConvention { Unraveling, Literal };

struct DensityMatrix {
    SectorBasisPtr basis;
    Eigen::MatrixXcd rho;
};

DensityMatrix pure_density(const DenseState& state);

/// Normalized mixture sum_i w_i |psi_i><psi_i| of random sector states,
/// generated from `seed`.
DensityMatrix random_mixed_density(const SectorBasisPtr& basis, int n_states, std::uint64_t seed);

class LindbladModel {
public:
    explicit LindbladModel(const ModelConfig& config, RateConvention convention = RateConvention::Unraveling);

    const ModelConfig& config() const { return config_; }
    const SectorBasisPtr& basis() const { return basis_; }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_->dimension()); }
    double jump_rate() const { return rate_; }

    Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const;

    /// Column-major vectorized generator: vec(rhs(rho)) = L vec(rho).
    Eigen::MatrixXcd superoperator() const;

private:
    ModelConfig config_;
    SectorBasisPtr basis_;
    Eigen::SparseMatrix<Complex> h0_;
    std::vector<Eigen::SparseMatrix<Complex>> jumps_;
    Eigen::SparseMatrix<Complex> decay_;  // rate * sum_l c^+ c
    double rate_ = 0.0;
};

/// Right-hand side of the master equation for rho.
Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const LindbladModel& model);

struct IntegrationReport {
    double min_eigenvalue = 0.0;  // smallest eigenvalue seen at a check
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    long long steps = 0;
};

using DensityObserver = std::function<void(double t, const Eigen::MatrixXcd& rho)>;

/// Classical fourth-order Runge-Kutta with fixed step dt. The observer is
/// called at t = 0 and every `observe_every` steps. Positivity is checked
/// every `check_every` steps; an eigenvalue below -1e-6 throws NumericalError.
DensityMatrix integrate_master_equation(const DensityMatrix& rho0, const LindbladModel& model, double t_max,
                                        double dt = 1e-3, const DensityObserver& observer = {},
                                        long long observe_every = 1000, IntegrationReport* report = nullptr,
                                        long long check_every = 100);

/// Stationary state from the generator with one row replaced by the trace
/// condition. Intended for sectors of dimension <= 50.
DensityMatrix lindblad_steady_state(const LindbladModel& model);

/// Number of singular values of the generator below tol * largest.
int lindblad_null_space_dimension(const LindbladModel& model, double tol = 1e-9);

/// tr(rho sigma_i^+ sigma_j^-).
Complex steady_state_correlations(const DensityMatrix& rho, int i, int j);
double density_sigma_z(const DensityMatrix& rho, int site);

/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const DenseState& psi);

/// (1/2) || a - b ||_1.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Von Neumann entropy (bits) of the first `cut` sites of rho.
double reduced_entropy(const DensityMatrix& rho, int cut);

}  // namespace qjump
