#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qjump/model.hpp"
#include "qjump/trajectory.hpp"

namespace qjump::io {

struct MpsConfig {
    int max_bond = 30;
    double cutoff = 1e-12;
    int order = 2;
    int substeps = 1;
    int checkpoint_every = 10000;

    bool operator==(const MpsConfig&) const = default;
};

struct TrajectoryConfig {
    long long m = 256;
    double t_max = 100.0;
    std::uint64_t master_seed = 1;
    double dt = 0.01;
    int entropy_every = 1;  // steps
    int sample_every = 250;  // steps, profiles and correlators

    bool operator==(const TrajectoryConfig&) const = default;
};

struct AnalysisConfig {
    bool scan = false;  // run every (size, gamma) cell instead of the single model
    std::vector<double> gamma_grid;
    std::vector<int> sizes;  // empty: model.n_sites only
    double bin_width = 0.02;
    double t_min = 10.0;
    int fit_l_min = 2;
    int fit_l_max = -1;  // -1: N-2
    int sample_stride = 10;  // steps between stored entropy samples
    double dip_spacing = 1.0;  // kappa t between samples fed to the dip test

    bool operator==(const AnalysisConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "results";

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    ModelConfig model;
    Backend backend = Backend::Dense;
    MpsConfig mps;
    TrajectoryConfig trajectory;
    AnalysisConfig analysis;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;

    /// Trajectory options for one cell of this configuration.
    TrajectoryOptions trajectory_options() const;
};

/// Bond dimension of the smallest tabulated size >= N (30 up to N = 24,
/// then 50, 60, 80, 100).
int table_bond_dimension(int n_sites);
/// 100 for N <= 48, 150 above.
double table_t_max(int n_sites);
/// {0.05, 0.10, ..., 1.00, 1.5, 2, 5}.
std::vector<double> default_gamma_grid();

/// Defaults for a chain of N sites.
RunConfig default_run_config(int n_sites);

/// INI-style text with sections [model] [backend] [mps] [trajectory]
/// [analysis] [output]. Missing keys take size-dependent defaults; unknown
/// keys and malformed values throw ConfigError naming section.key.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Every key, doubles written in shortest round-trip form.
std::string serialize_run_config(const RunConfig& config);

}  // namespace qjump::io
