#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qjump/analysis/dip.hpp"
#include "qjump/analysis/distribution.hpp"
#include "qjump/analysis/fit.hpp"
#include "qjump/analysis/transition.hpp"
#include "qjump/io/manifest.hpp"
#include "qjump/io/run_config.hpp"
#include "qjump/trajectory.hpp"

namespace qjump::io {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kNumericalFailure = 2, kOracleFailure = 3 };

/// Files written into every cell directory.
inline constexpr const char* kEntropySeriesCsv = "entropy_series.csv";
inline constexpr const char* kEntropyProfileCsv = "entropy_profile.csv";
inline constexpr const char* kEntropySamplesCsv = "entropy_samples.csv";
inline constexpr const char* kCorrelatorsCsv = "correlators.csv";
inline constexpr const char* kJumpsCsv = "jumps.csv";
inline constexpr const char* kCellConfig = "config.ini";
inline constexpr const char* kManifest = "manifest.json";

struct Cell {
    ModelConfig model;
    CellKey key;
};

/// One cell for the configured model, or sizes x gamma_grid when
/// analysis.scan is set (gamma = strength / kappa; k = N/4 for sizes other
/// than model.n_sites).
std::vector<Cell> expand_cells(const RunConfig& config);

/// Configuration of a single cell: the scan flag cleared and the model
/// replaced, with the size-dependent defaults of the run config kept.
RunConfig cell_config(const RunConfig& config, const Cell& cell);

/// Writes the five CSV files for one ensemble; returns their names.
std::vector<std::string> write_cell_outputs(const EnsembleResult& ensemble, const RunConfig& config,
                                            const std::filesystem::path& directory);

struct CellOutcome {
    std::filesystem::path directory;
    bool skipped = false;  // finished earlier with the same configuration hash
    ResultManifest manifest;
};

/// Runs one cell into out_root/<cell name>. A cell whose manifest matches the
/// configuration hash and file checksums is skipped; an unfinished one is
/// discarded and rerun.
CellOutcome run_cell(const RunConfig& config, const Cell& cell, const std::filesystem::path& out_root,
                     int threads = 1);

std::vector<CellOutcome> run_all(const RunConfig& config, const std::filesystem::path& out_root, int threads = 1);

struct CellAnalysis {
    CellKey key;
    std::filesystem::path directory;
    long long effective_m = 0;
    SteadyState steady;
    TimeAverage half_chain;          // mean entropy series after t_s
    analysis::EntropyDistribution distribution;  // pooled samples with t >= t_min
    analysis::DipResult dip;
    std::vector<double> profile;     // time-averaged S(l), l = 1..N-1
    analysis::FitResult cft;
    std::vector<double> distance;
    std::vector<double> o_mean;      // time-averaged |O_ij| by distance
    std::vector<double> d_mean;      // time-averaged |O_ij|^2 by distance
    std::optional<analysis::DecayFit> o_decay;
    std::optional<analysis::DecayFit> d_decay;
    std::vector<std::string> warnings;
};

CellAnalysis analyze_cell(const std::filesystem::path& directory, const AnalysisConfig& settings);

struct CeffBound {
    int n_sites = 0;
    double gamma_upper = 0.0;  // first gamma with c_eff <= 0.1 + 2 sigma
    bool found = false;
};

struct ModelTransition {
    std::string model;
    std::optional<analysis::TransitionEstimate> sigma_peak;
    std::vector<CeffBound> c_eff_bounds;
};

struct AnalysisReport {
    std::vector<CellAnalysis> cells;
    std::vector<ModelTransition> transitions;
    std::vector<std::string> warnings;
};

/// Every cell directory (one holding a manifest) under `root`. Analysis
/// settings come from each cell's stored configuration unless overridden.
AnalysisReport analyze_results(const std::filesystem::path& root,
                               const std::optional<AnalysisConfig>& settings = std::nullopt);
AnalysisReport analyze_results(const std::vector<std::filesystem::path>& roots,
                               const std::optional<AnalysisConfig>& settings = std::nullopt);

/// analysis.json and transition_summary.csv.
void write_analysis(const AnalysisReport& report, const std::filesystem::path& out_dir);

struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    bool corrupt_rate_convention = false;
    std::optional<std::filesystem::path> schedule;  // replay: CSV with time and bond columns
    long long trajectory = 0;                       // replay: row filter on a trajectory column
    bool compare_backends = false;                  // replay: run dense and MPS side by side
};

/// Subcommand entry points; they print diagnostics and return an ExitCode.
int cmd_run(const CommandOptions& options);
int cmd_analyze(const std::filesystem::path& input, const CommandOptions& options);
int cmd_oracle(const CommandOptions& options);
int cmd_replay(const CommandOptions& options);

/// Jump schedule from a CSV with columns time_kappa_t and bond (and
/// optionally trajectory, filtered to `trajectory`).
std::vector<JumpEvent> read_schedule(const std::filesystem::path& path, long long trajectory = 0);

}  // namespace qjump::io
