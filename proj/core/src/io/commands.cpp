#include "qjump/io/commands.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "qjump/error.hpp"
#include "qjump/io/csv.hpp"
#include "qjump/io/oracle.hpp"

namespace qjump::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// c_eff counted as zero once it is within two standard errors of this floor.
constexpr double kCeffZero = 0.1;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool on_grid(double t, double spacing) {
    const double q = t / spacing;
    return std::abs(q - std::round(q)) < 1e-6;
}

json fit_json(const analysis::FitResult& f) {
    json params = json::object();
    for (std::size_t i = 0; i < f.names.size(); ++i)
        params[f.names[i]] = {{"value", f.params[i]}, {"error", f.std_errors[i]}};
    return {{"params", params}, {"residual_norm", f.residual_norm}, {"converged", f.converged}, {"note", f.note}};
}

json decay_json(const analysis::DecayFit& d) {
    return {{"power_law", fit_json(d.power_law)},
            {"exponential", fit_json(d.exponential)},
            {"exponent_distance", d.exponent_distance},
            {"exponent_series", d.exponent_series},
            {"exponent_mean", d.exponent_mean},
            {"exponent_std", d.exponent_std},
            {"excluded", d.excluded}};
}

// Mean of `value` over rows with time >= t_min, grouped by `key`.
std::map<long long, double> window_mean(const CsvTable& t, const std::string& key, const std::string& value,
                                        double t_min) {
    const auto& time = t.column("time_kappa_t");
    const auto& k = t.column(key);
    const auto& v = t.column(value);
    double t_from = t_min;
    if (!time.empty() && *std::max_element(time.begin(), time.end()) < t_min)
        t_from = *std::max_element(time.begin(), time.end());
    std::map<long long, std::pair<double, long long>> acc;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (time[r] < t_from) continue;
        auto& a = acc[std::llround(k[r])];
        a.first += v[r];
        ++a.second;
    }
    std::map<long long, double> out;
    for (const auto& [key_value, a] : acc) out[key_value] = a.first / static_cast<double>(a.second);
    return out;
}

std::vector<fs::path> expand_inputs(const fs::path& input) {
    const std::string s = input.string();
    if (s.find_first_of("*?[") == std::string::npos) {
        if (!fs::is_directory(input)) throw IoError("not a result directory: " + s);
        return {input};
    }
    const fs::path parent = input.has_parent_path() ? input.parent_path() : fs::path(".");
    const std::string pattern = input.filename().string();
    std::vector<fs::path> out;
    if (fs::is_directory(parent))
        for (const auto& e : fs::directory_iterator(parent))
            if (e.is_directory() && fnmatch(pattern.c_str(), e.path().filename().c_str(), 0) == 0)
                out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw IoError("no directory matches " + s);
    return out;
}

int report_failure(const std::exception& e, int code) {
    spdlog::error("{}", e.what());
    return code;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        return report_failure(e, kConfigFailure);
    } catch (const IoError& e) {
        return report_failure(e, kConfigFailure);
    } catch (const NumericalError& e) {
        return report_failure(e, kNumericalFailure);
    } catch (const std::exception& e) {
        return report_failure(e, kNumericalFailure);
    }
}

RunConfig command_config(const CommandOptions& o) {
    if (!o.config) throw ConfigError("--config is required");
    RunConfig c = load_run_config(*o.config);
    if (o.seed) c.trajectory.master_seed = *o.seed;
    if (o.out) c.output.directory = o.out->string();
    return c;
}

}  // namespace

std::vector<Cell> expand_cells(const RunConfig& config) {
    auto make = [&](ModelConfig m) {
        m.validate();
        Cell c{m, {std::string(to_string(m.hamiltonian)), m.n_sites, m.n_excitations, m.competition_ratio(),
                   std::string(to_string(config.backend))}};
        return c;
    };
    if (!config.analysis.scan) return {make(config.model)};

    std::vector<int> sizes = config.analysis.sizes;
    if (sizes.empty()) sizes.push_back(config.model.n_sites);
    std::vector<double> grid = config.analysis.gamma_grid;
    if (grid.empty()) grid.push_back(config.model.competition_ratio());
    std::vector<Cell> cells;
    for (int n : sizes)
        for (double g : grid) {
            ModelConfig m = config.model;
            m.n_sites = n;
            if (n != config.model.n_sites) m.n_excitations = ModelConfig::default_excitations(n);
            m.strength = g * m.kappa;
            cells.push_back(make(m));
        }
    return cells;
}

RunConfig cell_config(const RunConfig& config, const Cell& cell) {
    RunConfig c = config;
    c.analysis.scan = false;
    c.model = cell.model;
    return c;
}

std::vector<std::string> write_cell_outputs(const EnsembleResult& ens, const RunConfig& config,
                                            const fs::path& dir) {
    const double sqrt_m = std::sqrt(static_cast<double>(std::max<long long>(ens.effective, 1)));
    {
        CsvWriter w(dir / kEntropySeriesCsv,
                    {"time_kappa_t", "mean_entropy_bits", "std_entropy_bits", "sem_entropy_bits"});
        for (std::size_t i = 0; i < ens.entropy.times.size(); ++i) {
            w << ens.entropy.times[i] << ens.entropy.mean[i] << ens.entropy.std[i] << ens.entropy.std[i] / sqrt_m;
            w.end_row();
        }
        w.close();
    }
    {
        CsvWriter w(dir / kEntropyProfileCsv, {"time_kappa_t", "cut_l", "mean_entropy_bits", "std_entropy_bits"});
        for (std::size_t s = 0; s < ens.profile_mean.size(); ++s)
            for (std::size_t l = 0; l < ens.profile_mean[s].size(); ++l) {
                w << ens.sample_times[s] << static_cast<long long>(l + 1) << ens.profile_mean[s][l]
                  << ens.profile_std[s][l];
                w.end_row();
            }
        w.close();
    }
    {
        CsvWriter w(dir / kEntropySamplesCsv, {"trajectory", "time_kappa_t", "entropy_bits"});
        const long long every = config.trajectory.entropy_every;
        const long long stride = config.analysis.sample_stride;
        for (std::size_t m = 0; m < ens.records.size(); ++m) {
            const auto& r = ens.records[m];
            if (!r.valid) continue;
            for (std::size_t i = 0; i < r.entropy.times.size(); ++i) {
                if ((static_cast<long long>(i) * every) % stride != 0) continue;
                w << static_cast<long long>(m) << r.entropy.times[i] << r.entropy.values[i];
                w.end_row();
            }
        }
        w.close();
    }
    {
        CsvWriter w(dir / kCorrelatorsCsv,
                    {"time_kappa_t", "site_i", "site_j", "distance", "re_mean", "re_std", "im_mean", "im_std",
                     "abs_mean", "abs_std", "abs2_mean", "abs2_std"});
        for (std::size_t s = 0; s < ens.corr_re_mean.size(); ++s)
            for (std::size_t p = 0; p < ens.pairs.size(); ++p) {
                const auto [i, j] = ens.pairs[p];
                w << ens.sample_times[s] << i << j << std::abs(j - i) << ens.corr_re_mean[s][p]
                  << ens.corr_re_std[s][p] << ens.corr_im_mean[s][p] << ens.corr_im_std[s][p]
                  << ens.corr_abs_mean[s][p] << ens.corr_abs_std[s][p] << ens.corr_abs2_mean[s][p]
                  << ens.corr_abs2_std[s][p];
                w.end_row();
            }
        w.close();
    }
    {
        CsvWriter w(dir / kJumpsCsv, {"trajectory", "time_kappa_t", "bond"});
        for (std::size_t m = 0; m < ens.records.size(); ++m) {
            if (!ens.records[m].valid) continue;
            for (const auto& e : ens.records[m].events) {
                w << static_cast<long long>(m) << e.time << e.bond;
                w.end_row();
            }
        }
        w.close();
    }
    return {kEntropySeriesCsv, kEntropyProfileCsv, kEntropySamplesCsv, kCorrelatorsCsv, kJumpsCsv};
}

CellOutcome run_cell(const RunConfig& config, const Cell& cell, const fs::path& out_root, int threads) {
    const RunConfig cc = cell_config(config, cell);
    const std::string text = serialize_run_config(cc);
    const std::string hash = sha256_hex(text);
    const std::string name = cell_directory_name(cell.key);
    const fs::path dir = out_root / name;

    CellOutcome out;
    out.directory = dir;
    if (fs::exists(dir / kManifest)) {
        try {
            ResultManifest m = read_manifest(dir / kManifest);
            if (m.config_hash == hash && verify_manifest(m, dir)) {
                spdlog::info("{}: finished earlier, skipping", name);
                out.skipped = true;
                out.manifest = std::move(m);
                return out;
            }
        } catch (const IoError& e) {
            spdlog::warn("{}: unreadable manifest ({}), rerunning", name, e.what());
        }
    }

    const fs::path partial = out_root / (name + ".partial");
    fs::remove_all(partial);
    fs::create_directories(partial);
    const auto start = std::chrono::steady_clock::now();
    spdlog::info("{}: running M={} to kappa t={}", name, cc.trajectory.m, to_text(cc.trajectory.t_max));

    const EnsembleResult ens = run_ensemble(cc.model, cc.trajectory_options(), cc.trajectory.m,
                                            cc.trajectory.master_seed, threads, true);
    if (ens.effective == 0) throw NumericalError(name + ": every trajectory failed");
    if (ens.invalid > 0) spdlog::warn("{}: {} of {} trajectories invalid", name, ens.invalid, ens.requested);

    std::vector<std::string> files = write_cell_outputs(ens, cc, partial);
    {
        std::ofstream cfg(partial / kCellConfig);
        cfg << text;
        if (!cfg) throw IoError("cannot write " + (partial / kCellConfig).string());
    }
    files.emplace_back(kCellConfig);

    ResultManifest& m = out.manifest;
    m.config_hash = hash;
    m.code_version = code_version();
    m.cell = cell.key;
    for (const auto& f : files) m.files[f] = sha256_file(partial / f);
    m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m.finished_at = utc_now();
    m.requested_m = ens.requested;
    m.effective_m = ens.effective;
    m.invalid_m = ens.invalid;
    m.master_seed = cc.trajectory.master_seed;
    write_manifest(m, partial / kManifest);

    fs::remove_all(dir);
    fs::rename(partial, dir);
    spdlog::info("{}: done in {:.1f} s, mean jumps {:.1f}", name, m.wall_clock_seconds, ens.mean_jumps);
    return out;
}

std::vector<CellOutcome> run_all(const RunConfig& config, const fs::path& out_root, int threads) {
    fs::create_directories(out_root);
    {
        std::ofstream run(out_root / "run_config.ini");
        run << serialize_run_config(config);
    }
    std::vector<CellOutcome> out;
    for (const Cell& c : expand_cells(config)) out.push_back(run_cell(config, c, out_root, threads));
    return out;
}

CellAnalysis analyze_cell(const fs::path& dir, const AnalysisConfig& s) {
    CellAnalysis a;
    a.directory = dir;
    const ResultManifest manifest = read_manifest(dir / kManifest);
    a.key = manifest.cell;
    a.effective_m = manifest.effective_m;
    if (!verify_manifest(manifest, dir)) a.warnings.push_back("checksum mismatch against manifest");
    const int n = a.key.n_sites;

    const CsvTable series = read_csv(dir / kEntropySeriesCsv);
    const ObservableSeries mean{series.column("time_kappa_t"), series.column("mean_entropy_bits")};
    try {
        a.steady = detect_steady_state(mean);
    } catch (const std::exception& e) {
        a.steady.t_s = s.t_min;
        a.steady.fallback = true;
        a.warnings.push_back(std::string("steady state: ") + e.what());
    }
    try {
        a.half_chain = time_average(mean, a.steady.t_s);
    } catch (const std::exception& e) {
        a.warnings.push_back(std::string("time average: ") + e.what());
    }

    const CsvTable samples = read_csv(dir / kEntropySamplesCsv);
    const auto& st = samples.column("time_kappa_t");
    const auto& sv = samples.column("entropy_bits");
    std::vector<double> pooled, dip_samples;
    for (std::size_t r = 0; r < samples.rows(); ++r) {
        if (st[r] < s.t_min) continue;
        const double v = std::max(0.0, sv[r]);
        pooled.push_back(v);
        if (on_grid(st[r], s.dip_spacing)) dip_samples.push_back(v);
    }
    if (pooled.size() < 1000)
        a.warnings.push_back("only " + std::to_string(pooled.size()) + " entropy samples after t_min");
    if (!pooled.empty()) a.distribution = analysis::entropy_distribution(pooled, s.bin_width, 1);
    if (dip_samples.empty())
        a.warnings.push_back("no samples on the dip spacing grid");
    else
        a.dip = analysis::hartigan_dip(dip_samples);

    const CsvTable profile = read_csv(dir / kEntropyProfileCsv);
    for (const auto& [cut, v] : window_mean(profile, "cut_l", "mean_entropy_bits", s.t_min)) {
        (void)cut;
        a.profile.push_back(v);
    }
    if (static_cast<int>(a.profile.size()) == n - 1) {
        try {
            a.cft = analysis::fit_cft(a.profile, n, s.fit_l_min, s.fit_l_max);
        } catch (const std::exception& e) {
            a.warnings.push_back(std::string("c_eff fit: ") + e.what());
        }
    } else {
        a.warnings.push_back("entropy profile incomplete");
    }

    const CsvTable corr = read_csv(dir / kCorrelatorsCsv);
    const auto o = window_mean(corr, "distance", "abs_mean", s.t_min);
    const auto d = window_mean(corr, "distance", "abs2_mean", s.t_min);
    for (const auto& [dist, v] : o) {
        a.distance.push_back(static_cast<double>(dist));
        a.o_mean.push_back(v);
        a.d_mean.push_back(d.at(dist));
    }
    try {
        a.o_decay = analysis::fit_decay(a.distance, a.o_mean);
        a.d_decay = analysis::fit_decay(a.distance, a.d_mean);
    } catch (const std::exception& e) {
        a.warnings.push_back(std::string("correlation decay fit: ") + e.what());
    }
    return a;
}

AnalysisReport analyze_results(const fs::path& root, const std::optional<AnalysisConfig>& settings) {
    return analyze_results(std::vector<fs::path>{root}, settings);
}

AnalysisReport analyze_results(const std::vector<fs::path>& roots, const std::optional<AnalysisConfig>& settings) {
    AnalysisReport report;
    std::vector<fs::path> dirs;
    for (const auto& root : roots) {
        if (fs::exists(root / kManifest)) dirs.push_back(root);
        for (const auto& e : fs::recursive_directory_iterator(root)) {
            if (!e.is_regular_file() || e.path().filename() != kManifest) continue;
            const fs::path dir = e.path().parent_path();
            if (dir == root || dir.extension() == ".partial") continue;
            dirs.push_back(dir);
        }
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    for (const auto& dir : dirs) {
        const AnalysisConfig s = settings ? *settings : load_run_config(dir / kCellConfig).analysis;
        CellAnalysis a = analyze_cell(dir, s);
        for (const auto& w : a.warnings) spdlog::warn("{}: {}", dir.filename().string(), w);
        report.cells.push_back(std::move(a));
    }
    std::sort(report.cells.begin(), report.cells.end(), [](const CellAnalysis& x, const CellAnalysis& y) {
        return std::tie(x.key.model, x.key.n_sites, x.key.gamma) < std::tie(y.key.model, y.key.n_sites, y.key.gamma);
    });

    std::set<std::string> models;
    for (const auto& c : report.cells) models.insert(c.key.model);
    for (const auto& model : models) {
        ModelTransition t;
        t.model = model;
        std::map<int, analysis::PeakCurve> curves;
        for (const auto& c : report.cells) {
            if (c.key.model != model || c.distribution.sample_count == 0) continue;
            auto& curve = curves[c.key.n_sites];
            curve.n_sites = c.key.n_sites;
            curve.gamma.push_back(c.key.gamma);
            curve.value.push_back(c.distribution.std);
            curve.dip_p.push_back(c.dip.p_multimodal);
        }
        std::map<int, CeffBound> bounds;
        for (const auto& c : report.cells) {
            if (c.key.model != model || !c.cft.converged) continue;
            auto& b = bounds[c.key.n_sites];
            b.n_sites = c.key.n_sites;
            if (!b.found && c.cft.value("c_eff") <= kCeffZero + 2.0 * c.cft.error("c_eff")) {
                b.gamma_upper = c.key.gamma;
                b.found = true;
            }
        }
        for (const auto& [size, b] : bounds) t.c_eff_bounds.push_back(b);

        std::vector<analysis::PeakCurve> usable;
        for (const auto& [size, curve] : curves)
            if (curve.gamma.size() >= 3) usable.push_back(curve);
        if (usable.size() < 3) {
            report.warnings.push_back(model + ": " + std::to_string(usable.size()) +
                                      " sizes with a gamma scan; at least 3 are needed to locate the transition");
        } else {
            try {
                t.sigma_peak = analysis::locate_transition(usable);
                if (!t.sigma_peak->valid) report.warnings.push_back(model + ": " + t.sigma_peak->note);
            } catch (const std::exception& e) {
                report.warnings.push_back(model + ": " + e.what());
            }
        }
        report.transitions.push_back(std::move(t));
    }
    for (const auto& w : report.warnings) spdlog::warn("{}", w);
    return report;
}

void write_analysis(const AnalysisReport& report, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    json cells = json::array();
    for (const auto& c : report.cells) {
        json j{{"model", c.key.model},
               {"n_sites", c.key.n_sites},
               {"n_excitations", c.key.n_excitations},
               {"gamma", c.key.gamma},
               {"backend", c.key.backend},
               {"directory", c.directory.filename().string()},
               {"effective_m", c.effective_m},
               {"steady_state", {{"t_s", c.steady.t_s}, {"fallback", c.steady.fallback}, {"fit", fit_json(c.steady.fit)}}},
               {"half_chain_entropy", {{"mean", c.half_chain.mean}, {"std", c.half_chain.std}, {"samples", c.half_chain.samples}}},
               {"distribution",
                {{"mean", c.distribution.mean},
                 {"sigma_s", c.distribution.std},
                 {"samples", c.distribution.sample_count},
                 {"bin_edges", c.distribution.bin_edges},
                 {"counts", c.distribution.counts}}},
               {"dip",
                {{"dip", c.dip.dip},
                 {"n", c.dip.n},
                 {"p_multimodal", c.dip.p_multimodal},
                 {"method", std::string(analysis::to_string(c.dip.method))}}},
               {"profile", c.profile},
               {"cft_fit", fit_json(c.cft)},
               {"distance", c.distance},
               {"o_mean", c.o_mean},
               {"d_mean", c.d_mean},
               {"warnings", c.warnings}};
        if (c.o_decay) j["o_decay"] = decay_json(*c.o_decay);
        if (c.d_decay) j["d_decay"] = decay_json(*c.d_decay);
        cells.push_back(std::move(j));
    }
    json transitions = json::array();
    for (const auto& t : report.transitions) {
        json j{{"model", t.model}};
        json bounds = json::array();
        for (const auto& b : t.c_eff_bounds)
            bounds.push_back({{"n_sites", b.n_sites}, {"gamma_upper", b.gamma_upper}, {"found", b.found}});
        j["c_eff_bounds"] = bounds;
        if (t.sigma_peak) {
            const auto& e = *t.sigma_peak;
            json peaks = json::array();
            for (const auto& p : e.peaks)
                peaks.push_back({{"n_sites", p.n_sites},
                                 {"gamma_c", p.gamma_c},
                                 {"gamma_c_err", p.gamma_c_err},
                                 {"accepted", p.accepted},
                                 {"note", p.note}});
            json crossing = json::array();
            for (double x : e.dip_crossing) crossing.push_back(std::isfinite(x) ? json(x) : json(nullptr));
            j["sigma_peak"] = {{"peaks", peaks},
                               {"gamma_c", e.gamma_c},
                               {"gamma_c_err", e.gamma_c_err},
                               {"extrapolation", e.extrapolation},
                               {"dip_crossing", crossing},
                               {"valid", e.valid},
                               {"note", e.note}};
        }
        transitions.push_back(std::move(j));
    }
    const json doc{{"code_version", code_version()},
                   {"cells", cells},
                   {"transitions", transitions},
                   {"warnings", report.warnings}};
    {
        std::ofstream out(out_dir / "analysis.json");
        out << doc.dump(2) << '\n';
        if (!out) throw IoError("cannot write " + (out_dir / "analysis.json").string());
    }

    CsvWriter w(out_dir / "transition_summary.csv",
                {"quantity", "model", "n_sites", "gamma", "value", "error", "note"});
    auto row = [&](std::string_view q, const std::string& model, std::string_view n, double g, double v, double e,
                   std::string_view note) {
        w << q << model << n << g << v << e << note;
        w.end_row();
    };
    for (const auto& c : report.cells) {
        const std::string n = std::to_string(c.key.n_sites);
        if (c.cft.converged) row("c_eff", c.key.model, n, c.key.gamma, c.cft.value("c_eff"), c.cft.error("c_eff"), "");
        if (c.distribution.sample_count > 0)
            row("sigma_s_bits", c.key.model, n, c.key.gamma, c.distribution.std, 0.0, "");
        if (c.dip.n > 0) row("dip_p_multimodal", c.key.model, n, c.key.gamma, c.dip.p_multimodal, 0.0, "");
    }
    for (const auto& t : report.transitions) {
        for (const auto& b : t.c_eff_bounds)
            if (b.found)
                row("gamma_c_ceff_upper", t.model, std::to_string(b.n_sites), b.gamma_upper, b.gamma_upper, 0.0,
                    "first gamma with c_eff consistent with zero");
        if (!t.sigma_peak) continue;
        const auto& e = *t.sigma_peak;
        for (std::size_t i = 0; i < e.peaks.size(); ++i) {
            const auto& p = e.peaks[i];
            row("gamma_c_sigma_peak", t.model, std::to_string(p.n_sites), p.gamma_c, p.gamma_c, p.gamma_c_err,
                p.accepted ? p.note : "rejected: " + p.note);
            if (i < e.dip_crossing.size() && std::isfinite(e.dip_crossing[i]))
                row("gamma_dip_crossing", t.model, std::to_string(p.n_sites), e.dip_crossing[i], e.dip_crossing[i],
                    0.0, "p_multimodal = 0.9");
        }
        if (e.valid) row("gamma_c_sigma_peak", t.model, "inf", e.gamma_c, e.gamma_c, e.gamma_c_err, e.extrapolation);
    }
    w.close();
}

std::vector<JumpEvent> read_schedule(const fs::path& path, long long trajectory) {
    const CsvTable t = read_csv(path);
    const auto& time = t.column("time_kappa_t");
    const auto& bond = t.column("bond");
    const bool has_traj = t.columns.count("trajectory") > 0;
    std::vector<JumpEvent> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (has_traj && std::llround(t.column("trajectory")[r]) != trajectory) continue;
        out.push_back({time[r], static_cast<int>(std::llround(bond[r]))});
    }
    std::stable_sort(out.begin(), out.end(), [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    return out;
}

int cmd_run(const CommandOptions& o) {
    return guarded([&] {
        const RunConfig c = command_config(o);
        const auto cells = run_all(c, c.output.directory, o.threads);
        for (const auto& cell : cells)
            std::cout << (cell.skipped ? "skipped " : "wrote   ") << cell.directory.string() << '\n';
        return static_cast<int>(kSuccess);
    });
}

int cmd_analyze(const fs::path& input, const CommandOptions& o) {
    return guarded([&] {
        std::optional<AnalysisConfig> settings;
        if (o.config) settings = load_run_config(*o.config).analysis;
        const auto roots = expand_inputs(input);
        const AnalysisReport report = analyze_results(roots, settings);
        if (report.cells.empty()) throw IoError("no result manifests under " + input.string());
        const fs::path out = o.out ? *o.out : (roots.size() == 1 ? roots.front() : roots.front().parent_path());
        write_analysis(report, out);
        std::cout << "wrote " << (out / "analysis.json").string() << " and "
                  << (out / "transition_summary.csv").string() << '\n';
        return static_cast<int>(kSuccess);
    });
}

int cmd_oracle(const CommandOptions& o) {
    return guarded([&] {
        OracleSuiteOptions s;
        if (o.config) {
            const RunConfig c = load_run_config(*o.config);
            s.dark.n_sites = c.model.n_sites;
            s.dark.n_excitations = c.model.n_excitations;
            s.unraveling.seed = c.trajectory.master_seed;
        }
        if (o.seed) {
            s.dark.seed = *o.seed;
            s.unraveling.seed = *o.seed;
            s.replay.seed = *o.seed;
        }
        s.unraveling.threads = o.threads;
        if (o.corrupt_rate_convention) s.unraveling.convention = RateConvention::Literal;
        bool ok = true;
        for (const auto& check : run_oracle_suite(s)) {
            std::cout << format_check(check) << '\n';
            ok = ok && check.passed;
        }
        return static_cast<int>(ok ? kSuccess : kOracleFailure);
    });
}

int cmd_replay(const CommandOptions& o) {
    return guarded([&] {
        const RunConfig c = command_config(o);
        if (!o.schedule) throw ConfigError("--schedule is required");
        TrajectoryOptions topt = c.trajectory_options();
        topt.replay = read_schedule(*o.schedule, o.trajectory);
        topt.record_profile = false;
        const std::uint64_t seed = trajectory_seed(c.trajectory.master_seed, o.trajectory);
        const TrajectoryRecord rec = run_trajectory(c.model, topt, seed);
        if (!rec.valid) throw NumericalError("replay failed: " + rec.error);

        std::optional<TrajectoryRecord> other;
        if (o.compare_backends) {
            TrajectoryOptions t2 = topt;
            t2.backend = topt.backend == Backend::Dense ? Backend::Mps : Backend::Dense;
            other = run_trajectory(c.model, t2, seed);
            if (!other->valid) throw NumericalError("replay on the second backend failed: " + other->error);
        }

        const fs::path out = c.output.directory;
        fs::create_directories(out);
        std::vector<std::string> header{"time_kappa_t", "entropy_bits"};
        if (other) header.insert(header.end(), {"entropy_other_bits", "abs_diff_bits"});
        CsvWriter w(out / "replay_entropy.csv", header);
        double worst = 0.0;
        for (std::size_t i = 0; i < rec.entropy.times.size(); ++i) {
            w << rec.entropy.times[i] << rec.entropy.values[i];
            if (other) {
                const double d = std::abs(rec.entropy.values[i] - other->entropy.values[i]);
                worst = std::max(worst, d);
                w << other->entropy.values[i] << d;
            }
            w.end_row();
        }
        w.close();
        std::cout << "replayed " << rec.events.size() << " of " << topt.replay->size() << " jumps on "
                  << to_string(topt.backend) << " into " << (out / "replay_entropy.csv").string() << '\n';
        if (other) {
            const ReplayOptions defaults;
            std::cout << (worst < defaults.tolerance ? "PASS" : "FAIL") << " backend agreement max |dS|="
                      << to_text(worst) << " bits\n";
            if (worst >= defaults.tolerance) return static_cast<int>(kOracleFailure);
        }
        return static_cast<int>(kSuccess);
    });
}

}  // namespace qjump::io
