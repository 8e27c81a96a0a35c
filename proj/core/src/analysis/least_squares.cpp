#include "qjump/analysis/least_squares.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "qjump/error.hpp"

namespace qjump::analysis {

LinearFit linear_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) throw ConfigError("least squares: size mismatch");
    if (x.rows() < x.cols()) throw ConfigError("least squares: fewer points than parameters");
    LinearFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    fit.full_rank = qr.rank() == x.cols();
    fit.coef = qr.solve(y);
    fit.rss = (x * fit.coef - y).squaredNorm();
    fit.dof = static_cast<int>(x.rows() - x.cols());
    const double s2 = fit.dof > 0 ? fit.rss / fit.dof : 0.0;
    fit.covariance = s2 * (x.transpose() * x).completeOrthogonalDecomposition().pseudoInverse();
    return fit;
}

ProjectedFit variable_projection(const BasisBuilder& basis, const Eigen::VectorXd& y, double lo, double hi,
                                 int scan_points) {
    if (!(lo > 0.0) || !(hi > lo) || scan_points < 3) throw ConfigError("variable projection: bad interval");
    auto rss = [&](double log_theta) {
        const Eigen::MatrixXd phi = basis(std::exp(log_theta));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
        const Eigen::VectorXd c = qr.solve(y);
        const double r = (phi * c - y).squaredNorm();
        return std::isfinite(r) ? r : std::numeric_limits<double>::max();
    };
    const double a = std::log(lo), b = std::log(hi);
    const double h = (b - a) / (scan_points - 1);
    int best = 0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan_points; ++i) {
        const double r = rss(a + i * h);
        if (r < best_rss) {
            best_rss = r;
            best = i;
        }
    }
    const double left = a + std::max(0, best - 1) * h;
    const double right = a + std::min(scan_points - 1, best + 1) * h;
    const auto [x, fx] = boost::math::tools::brent_find_minima(rss, left, right, std::numeric_limits<double>::digits / 2);

    ProjectedFit out;
    const bool refined = fx <= best_rss;
    out.theta = std::exp(refined ? x : a + best * h);
    const Eigen::MatrixXd phi = basis(out.theta);
    out.coef = phi.colPivHouseholderQr().solve(y);
    out.rss = (phi * out.coef - y).squaredNorm();
    const double lt = std::log(out.theta);
    out.interior = lt > a + 0.5 * h && lt < b - 0.5 * h;
    return out;
}

Eigen::MatrixXd jacobian_covariance(const Eigen::MatrixXd& j, double rss) {
    const auto dof = j.rows() - j.cols();
    const double s2 = dof > 0 ? rss / static_cast<double>(dof) : 0.0;
    return s2 * (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace qjump::analysis
