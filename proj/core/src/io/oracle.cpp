#include "qjump/io/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qjump/analysis/dicke_entropy.hpp"
#include "qjump/dense_backend.hpp"
#include "qjump/io/csv.hpp"
#include "qjump/rng.hpp"
#include "qjump/trajectory.hpp"

namespace qjump::io {

OracleCheck check_dicke_formula(int n_max, double tolerance) {
    OracleCheck c{"dicke-formula", false, 0.0, tolerance, {}};
    int cases = 0;
    for (int n = 2; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const DenseState d = dicke_state(n, k);
            for (int cut = 1; cut < n; ++cut) {
                const double err =
                    std::abs(analysis::dicke_entropy(n, k, cut) - entanglement_entropy(d, cut));
                if (err > c.measured) {
                    c.measured = err;
                    c.detail = "worst at N=" + std::to_string(n) + " k=" + std::to_string(k) +
                               " l=" + std::to_string(cut);
                }
                ++cases;
            }
        }
    }
    c.passed = c.measured < tolerance;
    c.detail = std::to_string(cases) + " cases, " + c.detail;
    return c;
}

OracleCheck check_dark_state(const DarkStateOptions& o) {
    OracleCheck c{"dark-state", false, 1.0, o.threshold, {}};
    const ModelConfig model{o.n_sites, o.n_excitations, HamiltonianKind::Staggered, 0.0, 1.0};
    const DenseState dicke = dicke_state(o.n_sites, o.n_excitations);

    TrajectoryOptions topt;
    topt.dt = o.dt;
    const Propagators props(model, topt);
    const auto steps = static_cast<long long>(std::llround(o.t_final / o.dt));
    double worst_traj = 1.0;
    for (int s = 0; s < o.n_states; ++s) {
        Rng init(Rng::derive(o.seed, 2 * static_cast<std::uint64_t>(s)));
        Rng draws(Rng::derive(o.seed, 2 * static_cast<std::uint64_t>(s) + 1));
        auto stepper = props.make_stepper(random_sector_state(dicke.basis, init));
        for (long long n = 0; n < steps; ++n) trajectory_step(*stepper, draws, o.dt);
        worst_traj = std::min(worst_traj, std::norm(overlap(*stepper->dense_state(), dicke)));
    }

    const LindbladModel lindblad(model);
    const DensityMatrix rho0 = random_mixed_density(dicke.basis, 4, o.seed);
    const DensityMatrix rho = integrate_master_equation(rho0, lindblad, o.t_final, 1e-3);
    const double lindblad_fid = fidelity(rho, dicke);

    c.measured = std::min(worst_traj, lindblad_fid);
    c.passed = worst_traj > o.threshold && lindblad_fid > o.threshold;
    c.detail = "min trajectory fidelity " + to_text(worst_traj) + ", master equation fidelity " +
               to_text(lindblad_fid) + " at kappa t=" + to_text(o.t_final);
    return c;
}

OracleCheck check_unraveling(const UnravelingOptions& o) {
    OracleCheck c{"unraveling", false, 0.0, o.sigmas, {}};
    ModelConfig model;
    model.n_sites = o.n_sites;
    model.n_excitations = ModelConfig::default_excitations(o.n_sites);
    model.strength = o.gamma;
    model.validate();

    const int every = static_cast<int>(std::llround(1.0 / o.dt));
    TrajectoryOptions topt;
    topt.dt = o.dt;
    topt.t_max = *std::max_element(o.times.begin(), o.times.end());
    topt.entropy_every = every;
    topt.sample_every = every;
    topt.record_profile = false;
    topt.pairs = {{0, 2}};
    const EnsembleResult ens = run_ensemble(model, topt, o.m, o.seed, o.threads);

    const LindbladModel lindblad(model, o.convention);
    std::vector<Eigen::MatrixXcd> rho_at;
    std::vector<long long> want;
    for (double t : o.times) want.push_back(std::llround(t / 1e-3));
    const long long observe_every = std::llround(1.0 / 1e-3);
    std::vector<std::pair<long long, Eigen::MatrixXcd>> snapshots;
    integrate_master_equation(pure_density(dicke_state(model.n_sites, model.n_excitations)), lindblad,
                              topt.t_max, 1e-3,
                              [&](double t, const Eigen::MatrixXcd& rho) {
                                  snapshots.emplace_back(std::llround(t / 1e-3), rho);
                              },
                              observe_every);

    const double sqrt_m = std::sqrt(static_cast<double>(ens.effective));
    double worst = 0.0;
    int compared = 0;
    for (std::size_t ti = 0; ti < o.times.size(); ++ti) {
        const auto sample = std::find_if(ens.sample_times.begin(), ens.sample_times.end(),
                                         [&](double t) { return std::abs(t - o.times[ti]) < 1e-9; });
        const auto snap = std::find_if(snapshots.begin(), snapshots.end(),
                                       [&](const auto& s) { return s.first == want[ti]; });
        if (sample == ens.sample_times.end() || snap == snapshots.end()) {
            c.detail = "time " + to_text(o.times[ti]) + " not sampled";
            return c;
        }
        const auto si = static_cast<std::size_t>(sample - ens.sample_times.begin());
        const DensityMatrix rho{lindblad.basis(), snap->second};
        auto compare = [&](double mean, double sd, double exact, const std::string& what) {
            const double se = std::max(sd / sqrt_m, 1e-12);
            const double z = std::abs(mean - exact) / se;
            if (z > worst) {
                worst = z;
                c.detail = "worst " + what + " at kappa t=" + to_text(o.times[ti]) + ": trajectories " +
                           to_text(mean) + " vs master equation " + to_text(exact);
            }
            ++compared;
        };
        for (int i = 0; i < model.n_sites; ++i)
            compare(ens.sigma_z_mean[si][i], ens.sigma_z_std[si][i], density_sigma_z(rho, i),
                    "sigma_z(" + std::to_string(i + 1) + ")");
        compare(ens.corr_re_mean[si][0], ens.corr_re_std[si][0], steady_state_correlations(rho, 0, 2).real(),
                "Re O_13");
    }
    c.measured = worst;
    c.passed = worst <= o.sigmas;
    c.detail = std::to_string(compared) + " comparisons with M=" + std::to_string(ens.effective) + " (" +
               (o.convention == RateConvention::Unraveling ? "unraveling" : "literal") + " rates), " + c.detail;
    return c;
}

OracleCheck check_replay(const ReplayOptions& o) {
    OracleCheck c{"replay", false, 0.0, o.tolerance, {}};
    ModelConfig model;
    model.n_sites = o.n_sites;
    model.n_excitations = ModelConfig::default_excitations(o.n_sites);
    model.strength = o.gamma;
    model.validate();

    TrajectoryOptions topt;
    topt.dt = o.dt;
    topt.t_max = o.t_max;
    topt.record_profile = false;
    topt.record_sigma_z = false;
    topt.sample_every = std::numeric_limits<int>::max();
    const TrajectoryRecord dense = run_trajectory(model, topt, o.seed);

    topt.backend = Backend::Mps;
    topt.mps = {{o.max_bond, o.cutoff}, o.order, o.substeps};
    topt.replay = dense.events;
    const TrajectoryRecord mps = run_trajectory(model, topt, o.seed);

    if (!dense.valid || !mps.valid || dense.entropy.values.size() != mps.entropy.values.size()) {
        c.detail = "trajectory failed: " + dense.error + mps.error;
        return c;
    }
    std::size_t at = 0;
    for (std::size_t i = 0; i < dense.entropy.values.size(); ++i) {
        const double d = std::abs(dense.entropy.values[i] - mps.entropy.values[i]);
        if (d > c.measured) {
            c.measured = d;
            at = i;
        }
    }
    c.passed = c.measured < o.tolerance;
    c.detail = std::to_string(dense.events.size()) + " jumps, worst at kappa t=" + to_text(dense.entropy.times[at]) +
               ", truncation ledger " + to_text(mps.trunc_ledger);
    return c;
}

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& o) {
    return {check_dicke_formula(o.dicke_n_max), check_dark_state(o.dark), check_unraveling(o.unraveling),
            check_replay(o.replay)};
}

std::string format_check(const OracleCheck& c) {
    std::ostringstream s;
    s << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << to_text(c.measured)
      << " tolerance=" << to_text(c.tolerance) << "  " << c.detail;
    return s.str();
}

}  // namespace qjump::io
