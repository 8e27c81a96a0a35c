#include "qjump/analysis/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qjump/analysis/least_squares.hpp"
#include "qjump/error.hpp"

namespace qjump::analysis {

namespace {

std::size_t index_of(const FitResult& f, std::string_view name) {
    for (std::size_t i = 0; i < f.names.size(); ++i)
        if (f.names[i] == name) return i;
    throw ConfigError("fit has no parameter named " + std::string(name));
}

void check_same_size(std::span<const double> x, std::span<const double> y, std::size_t min_points, const char* what) {
    if (x.size() != y.size()) throw ConfigError(std::string(what) + ": x and y differ in length");
    if (x.size() < min_points)
        throw ConfigError(std::string(what) + ": needs at least " + std::to_string(min_points) + " points");
}

bool is_constant(std::span<const double> y) {
    return std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
}

double safe_sqrt(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

// Shared tail of the two three-parameter offset fits.
FitResult finish_offset_fit(const ProjectedFit& pf, const Eigen::MatrixXd& jac, std::string note) {
    FitResult f;
    const Eigen::MatrixXd cov = jacobian_covariance(jac, pf.rss);
    f.add("a", pf.coef[0], safe_sqrt(cov(0, 0)));
    f.add("b", pf.theta, safe_sqrt(cov(1, 1)));
    f.add("c", pf.coef[1], safe_sqrt(cov(2, 2)));
    f.residual_norm = std::sqrt(pf.rss);
    f.converged = pf.interior && pf.coef.allFinite();
    f.note = f.converged ? std::move(note) : "rate pinned to the search interval";
    return f;
}

FitResult constant_offset_fit(double c) {
    FitResult f;
    f.add("a", 0.0, 0.0);
    f.add("b", 0.0, 0.0);
    f.add("c", c, 0.0);
    f.converged = true;
    f.note = "constant input";
    return f;
}

}  // namespace

double FitResult::value(std::string_view name) const { return params[index_of(*this, name)]; }
double FitResult::error(std::string_view name) const { return std_errors[index_of(*this, name)]; }

void FitResult::add(std::string name, double v, double err) {
    names.push_back(std::move(name));
    params.push_back(v);
    std_errors.push_back(err);
}

FitResult fit_cft(std::span<const double> profile, int n_sites, int l_min, int l_max) {
    if (static_cast<int>(profile.size()) != n_sites - 1) throw ConfigError("fit_cft: profile must hold N-1 values");
    if (l_max < 0) l_max = n_sites - 2;
    if (l_min < 1 || l_max > n_sites - 1 || l_max - l_min + 1 < 6)
        throw ConfigError("fit_cft: fit window must contain at least 6 cuts");

    const int m = l_max - l_min + 1;
    Eigen::MatrixXd x(m, 2);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        const int l = l_min + i;
        x(i, 0) = std::log2(n_sites / std::numbers::pi * std::sin(std::numbers::pi * l / n_sites));
        x(i, 1) = 1.0;
        y[i] = profile[static_cast<std::size_t>(l - 1)];
    }
    FitResult f;
    if (is_constant(std::span<const double>(y.data(), static_cast<std::size_t>(m)))) {
        f.add("c_eff", 0.0, 0.0);
        f.add("s_0", y[0], 0.0);
        f.converged = true;
        f.note = "constant profile";
        return f;
    }
    const LinearFit lf = linear_least_squares(x, y);
    f.add("c_eff", 6.0 * lf.coef[0], 6.0 * safe_sqrt(lf.covariance(0, 0)));
    f.add("s_0", lf.coef[1], safe_sqrt(lf.covariance(1, 1)));
    f.residual_norm = std::sqrt(lf.rss);
    f.converged = lf.full_rank;
    return f;
}

DecayFit fit_decay(std::span<const double> distance, std::span<const double> values) {
    check_same_size(distance, values, 3, "fit_decay");
    DecayFit out;
    std::vector<double> lx, ly, xs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0 && distance[i] > 0.0) {
            xs.push_back(distance[i]);
            lx.push_back(std::log(distance[i]));
            ly.push_back(std::log(values[i]));
        } else {
            ++out.excluded;
        }
    }
    const auto m = static_cast<Eigen::Index>(xs.size());
    if (m < 3) throw ConfigError("fit_decay: fewer than 3 positive values");

    Eigen::MatrixXd xp(m, 2), xe(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        xp(i, 0) = 1.0;
        xp(i, 1) = lx[static_cast<std::size_t>(i)];
        xe(i, 0) = 1.0;
        xe(i, 1) = xs[static_cast<std::size_t>(i)];
        y[i] = ly[static_cast<std::size_t>(i)];
    }
    auto fill = [&](FitResult& f, const LinearFit& lf) {
        const double a = std::exp(lf.coef[0]);
        f.add("a", a, a * safe_sqrt(lf.covariance(0, 0)));
        f.add("b", -lf.coef[1], safe_sqrt(lf.covariance(1, 1)));
        f.residual_norm = std::sqrt(lf.rss);
        f.converged = lf.full_rank;
    };
    fill(out.power_law, linear_least_squares(xp, y));
    fill(out.exponential, linear_least_squares(xe, y));

    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        out.exponent_distance.push_back(xs[i]);
        out.exponent_series.push_back(-(ly[i + 1] - ly[i - 1]) / (lx[i + 1] - lx[i - 1]));
    }
    const auto& e = out.exponent_series;
    const double n = static_cast<double>(e.size());
    out.exponent_mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : e) ss += (v - out.exponent_mean) * (v - out.exponent_mean);
    out.exponent_std = e.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return out;
}

FitResult fit_exp_offset(std::span<const double> t, std::span<const double> y) {
    check_same_size(t, y, 4, "fit_exp_offset");
    if (is_constant(y)) return constant_offset_fit(y.front());
    const auto m = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXd tau(m), yy(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        tau[i] = t[static_cast<std::size_t>(i)] - t.front();
        yy[i] = y[static_cast<std::size_t>(i)];
    }
    const double span = tau[m - 1];
    const double spacing = tau[1];
    if (!(span > 0.0) || !(spacing > 0.0)) throw ConfigError("fit_exp_offset: times must increase");
    auto basis = [&](double b) {
        Eigen::MatrixXd phi(m, 2);
        phi.col(0) = (-b * tau.array()).exp().matrix();
        phi.col(1).setOnes();
        return phi;
    };
    const ProjectedFit pf = variable_projection(basis, yy, 0.01 / span, 10.0 / spacing);
    Eigen::MatrixXd jac(m, 3);
    const Eigen::ArrayXd e = (-pf.theta * tau.array()).exp();
    jac.col(0) = e.matrix();
    jac.col(1) = (-pf.coef[0] * tau.array() * e).matrix();
    jac.col(2).setOnes();
    return finish_offset_fit(pf, jac, "time origin at first sample");
}

FitResult fit_inverse_power_offset(std::span<const double> x, std::span<const double> y) {
    check_same_size(x, y, 4, "fit_inverse_power_offset");
    if (std::any_of(x.begin(), x.end(), [](double v) { return !(v > 0.0); }))
        throw ConfigError("fit_inverse_power_offset: x must be positive");
    if (is_constant(y)) return constant_offset_fit(y.front());
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::ArrayXd xx(m);
    Eigen::VectorXd yy(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        xx[i] = x[static_cast<std::size_t>(i)];
        yy[i] = y[static_cast<std::size_t>(i)];
    }
    auto basis = [&](double b) {
        Eigen::MatrixXd phi(m, 2);
        phi.col(0) = xx.pow(-b).matrix();
        phi.col(1).setOnes();
        return phi;
    };
    const ProjectedFit pf = variable_projection(basis, yy, 1e-3, 20.0);
    Eigen::MatrixXd jac(m, 3);
    const Eigen::ArrayXd p = xx.pow(-pf.theta);
    jac.col(0) = p.matrix();
    jac.col(1) = (-pf.coef[0] * xx.log() * p).matrix();
    jac.col(2).setOnes();
    return finish_offset_fit(pf, jac, "");
}

FitResult bond_dim_extrapolate(std::span<const double> bond_dims, std::span<const double> values) {
    check_same_size(bond_dims, values, 4, "bond_dim_extrapolate");
    FitResult f = fit_inverse_power_offset(bond_dims, values);
    const auto last = std::max_element(bond_dims.begin(), bond_dims.end()) - bond_dims.begin();
    f.add("convergence_error", std::abs(f.value("c") - values[static_cast<std::size_t>(last)]), f.error("c"));
    return f;
}

double statistical_error(double sample_std, long long m) {
    if (m < 2) throw ConfigError("statistical_error: needs at least two trajectories");
    if (!(sample_std >= 0.0)) throw ConfigError("statistical_error: negative standard deviation");
    return sample_std / std::sqrt(static_cast<double>(m));
}

}  // namespace qjump::analysis
