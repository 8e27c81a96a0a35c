#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qjump::analysis {

struct LinearFit {
    Eigen::VectorXd coef;
    Eigen::MatrixXd covariance;  // s^2 (X^T X)^-1 with s^2 = rss / dof
    double rss = 0.0;
    int dof = 0;
    bool full_rank = true;
};

/// Ordinary least squares y ~ X coef by column-pivoting QR.
LinearFit linear_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

/// Separable model y ~ sum_j coef_j phi_j(x; theta) with one nonlinear
/// parameter theta. The linear coefficients are solved exactly for each
/// theta; theta is located by a log-spaced scan followed by Brent
/// refinement on [lo, hi].
struct ProjectedFit {
    double theta = 0.0;
    Eigen::VectorXd coef;
    double rss = 0.0;
    bool interior = false;  // optimum not pinned to an interval end
};

using BasisBuilder = std::function<Eigen::MatrixXd(double theta)>;

ProjectedFit variable_projection(const BasisBuilder& basis, const Eigen::VectorXd& y, double lo, double hi,
                                 int scan_points = 80);

/// Covariance s^2 (J^T J)^+ from a Jacobian at the optimum.
Eigen::MatrixXd jacobian_covariance(const Eigen::MatrixXd& jacobian, double rss);

}  // namespace qjump::analysis
