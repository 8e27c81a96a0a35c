#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qjump/analysis/fit.hpp"
#include "qjump/dense_backend.hpp"
#include "qjump/mps.hpp"
#include "qjump/rng.hpp"

namespace qjump {

enum class Backend { Dense, Mps };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view name);

struct MpsSettings {
    Truncation trunc;
    int order = 2;
    int substeps = 1;
};

struct JumpEvent {
    double time = 0.0;  // kappa t at the end of the step in which the jump happened
    int bond = 0;

    bool operator==(const JumpEvent&) const = default;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> values;
};

struct TrajectoryOptions {
    Backend backend = Backend::Dense;
    MpsSettings mps;
    double dt = 0.01;
    double t_max = 10.0;
    int entropy_every = 1;    // steps between half-chain entropy samples
    int sample_every = 250;   // steps between profile / correlator / sigma^z samples
    bool record_profile = true;
    bool record_sigma_z = true;
    /// Correlator pairs (i, j), 0-based. Empty: default_pairs(N).
    std::vector<std::pair<int, int>> pairs;
    /// Initial state; the Dicke state when absent.
    std::optional<DenseState> initial_state;
    /// When set, jumps are taken from this schedule and no random draws happen.
    std::optional<std::vector<JumpEvent>> replay;
    /// MPS backend: write the state to checkpoint_path every
    /// `checkpoint_every` steps when the path is non-empty.
    int checkpoint_every = 10000;
    std::string checkpoint_path;
};

/// (N/4, j) for j = N/4 + 1 ... 3N/4, 0-based.
std::vector<std::pair<int, int>> default_pairs(int n_sites);

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    ModelConfig model;
    std::vector<JumpEvent> events;
    ObservableSeries entropy;  // half-chain entropy, bits

    std::vector<double> sample_times;
    std::vector<std::vector<double>> profiles;   // [sample][cut-1]
    std::vector<std::vector<double>> sigma_z;    // [sample][site]
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<Complex>> correlators;  // [sample][pair]

    double trunc_ledger = 0.0;
    double final_norm_drift = 0.0;  // |<psi|psi> - 1| after the last renormalization
    double max_magnetization_drift = 0.0;
    bool valid = true;
    std::string error;
};

/// One backend-agnostic trajectory state.
class Stepper {
public:
    virtual ~Stepper() = default;
    virtual int n_sites() const = 0;
    /// Sum over bonds of delta P_mu for the current (normalized) state.
    virtual double total_rate() = 0;
    virtual std::vector<double> weights() = 0;
    virtual void jump(int bond) = 0;
    /// No-jump step followed by renormalization.
    virtual void evolve() = 0;
    virtual double half_chain_entropy() = 0;
    virtual std::vector<double> profile() = 0;
    virtual Complex correlator(int i, int j) = 0;
    virtual double sigma_z(int site) = 0;
    virtual double trunc_ledger() const { return 0.0; }
    virtual double norm_drift() const = 0;
    virtual void checkpoint(const std::string&) const {}
    /// Current state for the dense backend, nullptr otherwise.
    virtual const DenseState* dense_state() const { return nullptr; }
};

/// Shared read-only model data for one configuration and backend; build once
/// per ensemble and hand to every worker.
class Propagators {
public:
    Propagators(const ModelConfig& model, const TrajectoryOptions& options);

    const ModelConfig& model() const { return model_; }
    std::unique_ptr<Stepper> make_stepper(const std::optional<DenseState>& initial) const;

private:
    ModelConfig model_;
    Backend backend_;
    double dt_;
    std::shared_ptr<const DenseModel> dense_;
    std::shared_ptr<const Eigen::MatrixXcd> propagator_;  // exp(-i H_eff dt) for small sectors
    std::shared_ptr<const TebdPlan> plan_;
    Eigen::Matrix4cd jump_;
    int initial_bond_ = 0;
};

/// One step of the jump protocol. One uniform decides jump / no jump; a
/// second one, drawn only on a jump, picks the bond with probability
/// delta P_mu / sum delta P.
std::optional<int> trajectory_step(Stepper& stepper, Rng& rng, double dt);

TrajectoryRecord run_trajectory(const ModelConfig& model, const TrajectoryOptions& options, std::uint64_t seed);
TrajectoryRecord run_trajectory(const Propagators& props, const TrajectoryOptions& options, std::uint64_t seed);

struct SeriesStats {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> std;  // sample standard deviation across trajectories
};

struct EnsembleResult {
    ModelConfig model;
    long long requested = 0;
    long long effective = 0;  // valid trajectories
    long long invalid = 0;
    SeriesStats entropy;

    std::vector<double> sample_times;
    std::vector<std::pair<int, int>> pairs;
    // [sample][site] / [sample][cut-1] / [sample][pair]
    std::vector<std::vector<double>> sigma_z_mean, sigma_z_std;
    std::vector<std::vector<double>> profile_mean, profile_std;
    std::vector<std::vector<double>> corr_re_mean, corr_re_std, corr_im_mean, corr_im_std;
    std::vector<std::vector<double>> corr_abs_mean, corr_abs_std, corr_abs2_mean, corr_abs2_std;

    double mean_jumps = 0.0;
    double mean_trunc_ledger = 0.0;
    std::vector<TrajectoryRecord> records;  // kept when requested
};

/// Seed of trajectory m: Rng::derive(master_seed, m).
std::uint64_t trajectory_seed(std::uint64_t master_seed, long long m);

/// Runs M trajectories on `threads` workers. Aggregation is in trajectory
/// order, so results do not depend on the worker count.
EnsembleResult run_ensemble(const ModelConfig& model, const TrajectoryOptions& options, long long m,
                            std::uint64_t master_seed, int threads = 1, bool keep_records = false);

struct SteadyState {
    double t_s = 0.0;
    bool fallback = false;  // fit failed or threshold not reached: t_s = t_max / 2
    analysis::FitResult fit;
};

/// Fits a exp(-b (t - t_0)) + c and returns the first time where the fitted
/// slope |a b exp(-b (t - t_0))| drops below 1e-3 |a| b, i.e.
/// t_0 + ln(1000) / b.
SteadyState detect_steady_state(const ObservableSeries& series);

struct TimeAverage {
    double mean = 0.0;
    double std = 0.0;
    long long samples = 0;
};

TimeAverage time_average(const ObservableSeries& series, double t_s);

}  // namespace qjump
