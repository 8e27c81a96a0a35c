#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qjump/lindblad.hpp"

namespace qjump::io {

struct OracleCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst observed value of the checked quantity
    double tolerance = 0.0;  // bound it was compared against
    std::string detail;
};

/// Closed-form Dicke entropy against dense Schmidt entropies for every
/// N <= n_max, every k and every cut.
OracleCheck check_dicke_formula(int n_max = 12, double tolerance = 1e-9);

struct DarkStateOptions {
    int n_sites = 6;
    int n_excitations = 2;
    int n_states = 20;
    double t_final = 50.0;
    double dt = 0.01;
    double threshold = 0.999;
    std::uint64_t seed = 7;
};

/// V = 0: every trajectory from a random sector state, and the master
/// equation from a random mixed state, must reach fidelity > threshold with
/// the Dicke state by t_final.
OracleCheck check_dark_state(const DarkStateOptions& options = {});

struct UnravelingOptions {
    int n_sites = 4;
    double gamma = 0.5;
    long long m = 2000;
    std::vector<double> times{1.0, 5.0, 20.0};
    double dt = 0.01;
    double sigmas = 3.0;
    std::uint64_t seed = 11;
    int threads = 1;
    /// Negative-control hook: Literal makes the oracle disagree.
    RateConvention convention = RateConvention::Unraveling;
};

/// Ensemble means of sigma^z_i and Re O_{1,3} against the master equation,
/// within `sigmas` standard errors of the mean.
OracleCheck check_unraveling(const UnravelingOptions& options = {});

struct ReplayOptions {
    int n_sites = 10;
    double gamma = 0.5;
    double t_max = 20.0;
    double dt = 0.01;
    int max_bond = 64;
    double cutoff = 1e-12;
    int order = 4;
    int substeps = 1;
    double tolerance = 1e-6;
    std::uint64_t seed = 3;
};

/// Dense trajectory, then the MPS backend driven by the same jump schedule;
/// compares the half-chain entropy series.
OracleCheck check_replay(const ReplayOptions& options = {});

struct OracleSuiteOptions {
    DarkStateOptions dark;
    UnravelingOptions unraveling;
    ReplayOptions replay;
    int dicke_n_max = 12;
};

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options);

/// One line per check: "PASS name measured=... tolerance=... detail".
std::string format_check(const OracleCheck& check);

}  // namespace qjump::io
