#include "qjump/trajectory.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qjump/error.hpp"

namespace qjump {

namespace {

std::atomic<bool> g_rate_warned{false};

constexpr std::size_t kDensePropagatorMaxDim = 128;

class DenseStepper final : public Stepper {
public:
    DenseStepper(std::shared_ptr<const DenseModel> model, std::shared_ptr<const Eigen::MatrixXcd> propagator,
                 DenseState state, double dt)
        : model_(std::move(model)), propagator_(std::move(propagator)), state_(std::move(state)), dt_(dt) {}

    int n_sites() const override { return state_.n_sites(); }
    double total_rate() override { return total_jump_rate(state_, model_->effective_hamiltonian()); }
    std::vector<double> weights() override { return jump_weights(state_, model_->jumps(), model_->config().kappa); }
    void jump(int bond) override { state_ = apply_jump(state_, *model_, bond); }
    void evolve() override {
        if (propagator_) {
            buffer_.noalias() = *propagator_ * state_.amplitudes;
            state_.amplitudes.swap(buffer_);
            if (!state_.amplitudes.allFinite()) throw NumericalError("evolve: non-finite amplitudes");
        } else {
            state_ = evolve_no_jump(state_, model_->effective_hamiltonian(), dt_);
        }
        const double n = state_.norm();
        if (!(n > 0.0)) throw NumericalError("state norm vanished during no-jump evolution");
        state_.amplitudes /= n;
    }
    double half_chain_entropy() override {
        return entanglement_entropy(state_, model_->cut_index(state_.n_sites() / 2));
    }
    std::vector<double> profile() override { return entanglement_profile(state_, *model_); }
    Complex correlator(int i, int j) override { return qjump::correlator(state_, i, j); }
    double sigma_z(int site) override { return qjump::sigma_z(state_, site); }
    double norm_drift() const override { return std::abs(state_.amplitudes.squaredNorm() - 1.0); }
    const DenseState* dense_state() const override { return &state_; }

private:
    std::shared_ptr<const DenseModel> model_;
    std::shared_ptr<const Eigen::MatrixXcd> propagator_;
    DenseState state_;
    Eigen::VectorXcd buffer_;
    double dt_;
};

class MpsStepper final : public Stepper {
public:
    MpsStepper(std::shared_ptr<const TebdPlan> plan, const Eigen::Matrix4cd& jump, double kappa, MpsState state)
        : plan_(std::move(plan)), jump_(jump), kappa_(kappa), mps_(std::move(state)) {}

    int n_sites() const override { return mps_.n_sites; }
    double total_rate() override {
        cached_ = mps_jump_weights(mps_, jump_, kappa_);
        cache_valid_ = true;
        double s = 0.0;
        for (double w : cached_) s += w;
        return s;
    }
    std::vector<double> weights() override {
        if (!cache_valid_) total_rate();
        return cached_;
    }
    void jump(int bond) override {
        cache_valid_ = false;
        mps_apply_jump(mps_, jump_, bond, plan_->trunc);
    }
    void evolve() override {
        cache_valid_ = false;
        tebd_no_jump_step(mps_, *plan_);
    }
    double half_chain_entropy() override { return mps_entropy(mps_, mps_.n_sites / 2); }
    std::vector<double> profile() override { return entropy_profile(mps_); }
    Complex correlator(int i, int j) override { return mps_correlator(mps_, i, j); }
    double sigma_z(int site) override { return mps_sigma_z(mps_, site); }
    double trunc_ledger() const override { return mps_.trunc_ledger; }
    double norm_drift() const override {
        const double n = mps_norm(mps_);
        return std::abs(n * n - 1.0);
    }
    void checkpoint(const std::string& path) const override { save_checkpoint(mps_, path); }

private:
    std::shared_ptr<const TebdPlan> plan_;
    Eigen::Matrix4cd jump_;
    double kappa_;
    MpsState mps_;
    std::vector<double> cached_;
    bool cache_valid_ = false;
};

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::Dense ? "dense" : "mps"; }

Backend backend_from_string(std::string_view name) {
    if (name == "dense") return Backend::Dense;
    if (name == "mps") return Backend::Mps;
    throw ConfigError("unknown backend '" + std::string(name) + "' (expected dense or mps)");
}

std::vector<std::pair<int, int>> default_pairs(int n) {
    std::vector<std::pair<int, int>> p;
    const int i0 = n / 4;
    for (int j = i0 + 1; j <= (3 * n) / 4 && j < n; ++j) p.emplace_back(i0, j);
    return p;
}

Propagators::Propagators(const ModelConfig& model, const TrajectoryOptions& options)
    : model_(model), backend_(options.backend), dt_(options.dt) {
    model.validate();
    if (model.n_sites < 2) throw ConfigError("trajectories need at least two sites");
    if (!(options.dt > 0.0)) throw ConfigError("trajectory dt must be positive");
    if (backend_ == Backend::Dense) {
        dense_ = std::make_shared<const DenseModel>(model);
        // Below this size one dense mat-vec is cheaper than the Taylor series.
        if (dense_->basis()->dimension() <= kDensePropagatorMaxDim) {
            const Eigen::MatrixXcd h = dense_->effective_hamiltonian().to_dense();
            propagator_ = std::make_shared<const Eigen::MatrixXcd>((Complex(0.0, -options.dt) * h).exp());
        }
    } else {
        plan_ = std::make_shared<const TebdPlan>(
            make_tebd_plan(model, options.dt, options.mps.trunc, options.mps.order, options.mps.substeps));
        jump_ = build_jump_operators(model).front().matrix;
    }
}

std::unique_ptr<Stepper> Propagators::make_stepper(const std::optional<DenseState>& initial) const {
    if (initial && (initial->n_sites() != model_.n_sites || initial->n_excitations() != model_.n_excitations))
        throw ConfigError("initial state does not match the model sector");
    if (backend_ == Backend::Dense) {
        DenseState s = initial ? *initial : DenseState{dense_->basis(), dicke_state(model_.n_sites, model_.n_excitations).amplitudes};
        s.normalize();
        return std::make_unique<DenseStepper>(dense_, propagator_, std::move(s), dt_);
    }
    MpsState mps = initial ? mps_from_dense(*initial)
                           : dicke_mps(model_.n_sites, model_.n_excitations, plan_->trunc.max_bond);
    if (initial) canonicalize(mps);
    return std::make_unique<MpsStepper>(plan_, jump_, model_.kappa, std::move(mps));
}

std::optional<int> trajectory_step(Stepper& stepper, Rng& rng, double dt) {
    const double r = rng.uniform();
    const double total = stepper.total_rate();
    if (dt * total >= 0.1 && !g_rate_warned.exchange(true))
        spdlog::warn("dt * sum(delta P) = {:.3g} >= 0.1; first-order jump sampling is inaccurate", dt * total);
    if (r < dt * total) {
        const double r2 = rng.uniform();
        const auto w = stepper.weights();
        double sum = 0.0;
        for (double v : w) sum += v;
        if (sum > 0.0) {
            const double target = r2 * sum;
            int chosen = -1;
            double acc = 0.0;
            for (std::size_t l = 0; l < w.size(); ++l) {
                if (w[l] <= 0.0) continue;
                acc += w[l];
                chosen = static_cast<int>(l);
                if (acc > target) break;
            }
            stepper.jump(chosen);
            return chosen;
        }
    }
    stepper.evolve();
    return std::nullopt;
}

TrajectoryRecord run_trajectory(const ModelConfig& model, const TrajectoryOptions& options, std::uint64_t seed) {
    return run_trajectory(Propagators(model, options), options, seed);
}

TrajectoryRecord run_trajectory(const Propagators& props, const TrajectoryOptions& options, std::uint64_t seed) {
    if (!(options.t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (options.entropy_every < 1 || options.sample_every < 1) throw ConfigError("sampling cadences must be positive");

    const ModelConfig& model = props.model();
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.model = model;
    rec.pairs = options.pairs.empty() ? default_pairs(model.n_sites) : options.pairs;

    const double dt = options.dt;
    const long long n_steps = std::llround(options.t_max / dt);
    const double magnetization = 2.0 * model.n_excitations - model.n_sites;
    Rng rng(seed);
    std::size_t replay_next = 0;
    long long step = 0;

    try {
        auto stepper = props.make_stepper(options.initial_state);
        auto sample = [&](double t) {
            rec.sample_times.push_back(t);
            if (options.record_profile) rec.profiles.push_back(stepper->profile());
            if (options.record_sigma_z) {
                std::vector<double> z(static_cast<std::size_t>(model.n_sites));
                double total = 0.0;
                for (int i = 0; i < model.n_sites; ++i) total += (z[static_cast<std::size_t>(i)] = stepper->sigma_z(i));
                rec.max_magnetization_drift = std::max(rec.max_magnetization_drift, std::abs(total - magnetization));
                rec.sigma_z.push_back(std::move(z));
            }
            std::vector<Complex> c;
            c.reserve(rec.pairs.size());
            for (const auto& [i, j] : rec.pairs) c.push_back(stepper->correlator(i, j));
            rec.correlators.push_back(std::move(c));
        };

        rec.entropy.times.push_back(0.0);
        rec.entropy.values.push_back(stepper->half_chain_entropy());
        sample(0.0);
        for (step = 0; step < n_steps; ++step) {
            const long long done = step + 1;
            const double t = static_cast<double>(done) * dt;
            if (options.replay) {
                const auto& sched = *options.replay;
                if (replay_next < sched.size() && std::llround(sched[replay_next].time / dt) == done) {
                    stepper->jump(sched[replay_next].bond);
                    rec.events.push_back({t, sched[replay_next].bond});
                    ++replay_next;
                } else {
                    stepper->evolve();
                }
            } else if (const auto bond = trajectory_step(*stepper, rng, dt)) {
                rec.events.push_back({t, *bond});
            }
            if (done % options.entropy_every == 0) {
                rec.entropy.times.push_back(t);
                rec.entropy.values.push_back(stepper->half_chain_entropy());
            }
            if (done % options.sample_every == 0) sample(t);
            if (!options.checkpoint_path.empty() && done % options.checkpoint_every == 0)
                stepper->checkpoint(options.checkpoint_path);
        }
        rec.trunc_ledger = stepper->trunc_ledger();
        rec.final_norm_drift = stepper->norm_drift();
    } catch (const std::exception& e) {
        rec.valid = false;
        rec.error = std::string(e.what()) + " (at kappa t = " + std::to_string(static_cast<double>(step) * dt) + ")";
        spdlog::error("trajectory seed {:#x} aborted: {}", seed, rec.error);
    }
    return rec;
}

}  // namespace qjump
