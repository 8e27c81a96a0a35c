#pragma once

#include <string>
#include <vector>

namespace qjump::analysis {

/// sigma_S (or any peaked statistic) sampled on a gamma grid for one size.
struct PeakCurve {
    int n_sites = 0;
    std::vector<double> gamma;
    std::vector<double> value;
    std::vector<double> dip_p;  // optional p_multimodal per gamma
};

struct SizePeak {
    int n_sites = 0;
    double gamma_c = 0.0;
    double gamma_c_err = 0.0;
    bool accepted = false;
    std::string note;
};

struct TransitionEstimate {
    std::vector<SizePeak> peaks;
    double gamma_c = 0.0;  // N -> infinity
    double gamma_c_err = 0.0;
    std::string extrapolation;  // "quadratic-1/N", "linear-1/N", or "none"
    std::vector<double> dip_crossing;  // gamma where dip_p crosses 0.9, per size (NaN if absent)
    bool valid = false;
    std::string note;
};

/// Quadratic a g^2 + b g + c through the `window` points centred on the
/// argmax; gamma_c = -b / 2a. Rejected when a >= 0; a vertex outside the
/// fitted window is kept but noted.
SizePeak fit_peak(const PeakCurve& curve, int window = 5);

/// Per-size peaks followed by a/N^2 + b/N + c (four or more accepted sizes)
/// or b/N + c (exactly three). Needs at least three accepted sizes.
TransitionEstimate locate_transition(const std::vector<PeakCurve>& curves, int window = 5);

}  // namespace qjump::analysis
