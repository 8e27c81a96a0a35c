#include "qjump/analysis/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qjump/analysis/least_squares.hpp"
#include "qjump/error.hpp"

namespace qjump::analysis {

SizePeak fit_peak(const PeakCurve& curve, int window) {
    const auto& g = curve.gamma;
    const auto& v = curve.value;
    if (g.size() != v.size()) throw ConfigError("fit_peak: gamma and value differ in length");
    if (!std::is_sorted(g.begin(), g.end())) throw ConfigError("fit_peak: gamma grid must be increasing");

    SizePeak peak;
    peak.n_sites = curve.n_sites;
    const int size = static_cast<int>(g.size());
    const int w = std::min(window, size);
    if (w < 4) {
        peak.note = "fewer than 4 points around the peak";
        return peak;
    }
    const int arg = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    const int start = std::clamp(arg - w / 2, 0, size - w);

    Eigen::MatrixXd x(w, 3);
    Eigen::VectorXd y(w);
    for (int i = 0; i < w; ++i) {
        const double gi = g[static_cast<std::size_t>(start + i)];
        x.row(i) << gi * gi, gi, 1.0;
        y[i] = v[static_cast<std::size_t>(start + i)];
    }
    const LinearFit fit = linear_least_squares(x, y);
    const double a = fit.coef[0], b = fit.coef[1];
    if (!(a < 0.0)) {
        peak.note = "non-concave quadratic near the maximum";
        return peak;
    }
    peak.gamma_c = -b / (2.0 * a);
    Eigen::Vector3d grad(b / (2.0 * a * a), -1.0 / (2.0 * a), 0.0);
    peak.gamma_c_err = std::sqrt(std::max(0.0, grad.dot(fit.covariance * grad)));
    peak.accepted = true;
    if (peak.gamma_c < g[static_cast<std::size_t>(start)] || peak.gamma_c > g[static_cast<std::size_t>(start + w - 1)])
        peak.note = "vertex outside the fitted window";
    return peak;
}

TransitionEstimate locate_transition(const std::vector<PeakCurve>& curves, int window) {
    TransitionEstimate est;
    std::vector<SizePeak> good;
    for (const auto& c : curves) {
        est.peaks.push_back(fit_peak(c, window));
        if (est.peaks.back().accepted) good.push_back(est.peaks.back());

        double crossing = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 1; i < c.dip_p.size() && i < c.gamma.size(); ++i) {
            const double p0 = c.dip_p[i - 1], p1 = c.dip_p[i];
            if (p0 < 0.9 && p1 >= 0.9) {
                crossing = c.gamma[i - 1] + (0.9 - p0) / (p1 - p0) * (c.gamma[i] - c.gamma[i - 1]);
                break;
            }
        }
        est.dip_crossing.push_back(crossing);
    }
    if (good.size() < 3) {
        est.extrapolation = "none";
        est.note = "fewer than 3 sizes with an accepted peak";
        return est;
    }

    const bool quadratic = good.size() >= 4;
    const auto m = static_cast<Eigen::Index>(good.size());
    Eigen::MatrixXd x(m, quadratic ? 3 : 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double inv = 1.0 / good[static_cast<std::size_t>(i)].n_sites;
        if (quadratic)
            x.row(i) << inv * inv, inv, 1.0;
        else
            x.row(i) << inv, 1.0;
        y[i] = good[static_cast<std::size_t>(i)].gamma_c;
    }
    const LinearFit fit = linear_least_squares(x, y);
    const Eigen::Index ci = x.cols() - 1;
    // Linear weights of c on the per-size estimates, for propagating their errors.
    const Eigen::MatrixXd pinv = x.completeOrthogonalDecomposition().pseudoInverse();
    double var = fit.covariance(ci, ci);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double e = good[static_cast<std::size_t>(i)].gamma_c_err;
        var += pinv(ci, i) * pinv(ci, i) * e * e;
    }
    est.gamma_c = fit.coef[ci];
    est.gamma_c_err = std::sqrt(std::max(0.0, var));
    est.extrapolation = quadratic ? "quadratic-1/N" : "linear-1/N";
    est.valid = fit.full_rank;
    return est;
}

}  // namespace qjump::analysis
