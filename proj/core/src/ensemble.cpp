#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qjump/error.hpp"
#include "qjump/trajectory.hpp"

namespace qjump {

namespace {

// Running mean / variance, fed in trajectory order.
struct Welford {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double std() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

using Grid = std::vector<std::vector<Welford>>;

Grid make_grid(std::size_t rows, std::size_t cols) { return Grid(rows, std::vector<Welford>(cols)); }

void unpack(const Grid& g, std::vector<std::vector<double>>& mean, std::vector<std::vector<double>>& std) {
    mean.assign(g.size(), {});
    std.assign(g.size(), {});
    for (std::size_t r = 0; r < g.size(); ++r)
        for (const auto& w : g[r]) {
            mean[r].push_back(w.mean);
            std[r].push_back(w.std());
        }
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master_seed, long long m) {
    return Rng::derive(master_seed, static_cast<std::uint64_t>(m));
}

EnsembleResult run_ensemble(const ModelConfig& model, const TrajectoryOptions& options, long long m,
                            std::uint64_t master_seed, int threads, bool keep_records) {
    if (m < 1) throw ConfigError("ensemble size M must be at least 1");
    if (threads < 1) throw ConfigError("thread count must be at least 1");

    const Propagators props(model, options);
    std::vector<TrajectoryRecord> records(static_cast<std::size_t>(m));
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (long long i = next++; i < m; i = next++)
            records[static_cast<std::size_t>(i)] = run_trajectory(props, options, trajectory_seed(master_seed, i));
    };
    const int nt = static_cast<int>(std::min<long long>(threads, m));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    }

    EnsembleResult out;
    out.model = model;
    out.requested = m;
    const TrajectoryRecord* first = nullptr;
    for (const auto& r : records) {
        if (r.valid) {
            if (!first) first = &r;
        } else {
            ++out.invalid;
        }
    }
    out.effective = m - out.invalid;
    if (!first) {
        if (keep_records) out.records = std::move(records);
        return out;
    }

    out.entropy.times = first->entropy.times;
    out.sample_times = first->sample_times;
    out.pairs = first->pairs;
    const std::size_t ns = out.sample_times.size();
    std::vector<Welford> ent(out.entropy.times.size());
    Grid z = make_grid(ns, first->sigma_z.empty() ? 0 : first->sigma_z.front().size());
    Grid prof = make_grid(ns, first->profiles.empty() ? 0 : first->profiles.front().size());
    Grid cre = make_grid(ns, out.pairs.size()), cim = cre, cab = cre, cab2 = cre;
    Welford jumps, ledger;

    for (const auto& r : records) {
        if (!r.valid) continue;
        for (std::size_t i = 0; i < ent.size(); ++i) ent[i].add(r.entropy.values[i]);
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t i = 0; i < z[s].size(); ++i) z[s][i].add(r.sigma_z[s][i]);
            for (std::size_t i = 0; i < prof[s].size(); ++i) prof[s][i].add(r.profiles[s][i]);
            for (std::size_t p = 0; p < out.pairs.size(); ++p) {
                const Complex c = r.correlators[s][p];
                cre[s][p].add(c.real());
                cim[s][p].add(c.imag());
                cab[s][p].add(std::abs(c));
                cab2[s][p].add(std::norm(c));
            }
        }
        jumps.add(static_cast<double>(r.events.size()));
        ledger.add(r.trunc_ledger);
    }

    for (const auto& w : ent) {
        out.entropy.mean.push_back(w.mean);
        out.entropy.std.push_back(w.std());
    }
    unpack(z, out.sigma_z_mean, out.sigma_z_std);
    unpack(prof, out.profile_mean, out.profile_std);
    unpack(cre, out.corr_re_mean, out.corr_re_std);
    unpack(cim, out.corr_im_mean, out.corr_im_std);
    unpack(cab, out.corr_abs_mean, out.corr_abs_std);
    unpack(cab2, out.corr_abs2_mean, out.corr_abs2_std);
    out.mean_jumps = jumps.mean;
    out.mean_trunc_ledger = ledger.mean;
    if (keep_records) out.records = std::move(records);
    return out;
}

}  // namespace qjump
