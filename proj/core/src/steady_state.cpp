#include <algorithm>
#include <cmath>

#include "qjump/error.hpp"
#include "qjump/trajectory.hpp"

namespace qjump {

SteadyState detect_steady_state(const ObservableSeries& series) {
    if (series.times.size() != series.values.size()) throw ConfigError("detect_steady_state: length mismatch");
    if (series.times.size() < 50) throw ConfigError("detect_steady_state: needs at least 50 points");

    SteadyState out;
    const double t0 = series.times.front();
    const double t_end = series.times.back();
    // A series flat to rounding (a dark state) is stationary from the start.
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    if (*hi - *lo <= 1e-12 * (1.0 + std::abs(*hi))) {
        out.fit.add("a", 0.0, 0.0);
        out.fit.add("b", 0.0, 0.0);
        out.fit.add("c", *hi, 0.0);
        out.fit.converged = true;
        out.fit.note = "constant series";
        out.t_s = t0;
        return out;
    }
    out.fit = analysis::fit_exp_offset(series.times, series.values);
    const double a = out.fit.value("a"), b = out.fit.value("b");
    if (out.fit.converged && a == 0.0) {
        out.t_s = t0;
        return out;
    }
    const double t_s = t0 + std::log(1000.0) / b;
    if (!out.fit.converged || !std::isfinite(t_s) || t_s > t_end) {
        out.fallback = true;
        out.t_s = 0.5 * t_end;
        return out;
    }
    out.t_s = t_s;
    return out;
}

TimeAverage time_average(const ObservableSeries& series, double t_s) {
    if (series.times.size() != series.values.size()) throw ConfigError("time_average: length mismatch");
    TimeAverage out;
    double sum = 0.0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] < t_s) continue;
        sum += series.values[i];
        ++out.samples;
    }
    if (out.samples == 0) throw ConfigError("time_average: no samples at or after t_s");
    out.mean = sum / static_cast<double>(out.samples);
    double ss = 0.0;
    for (std::size_t i = 0; i < series.times.size(); ++i)
        if (series.times[i] >= t_s) ss += (series.values[i] - out.mean) * (series.values[i] - out.mean);
    out.std = out.samples > 1 ? std::sqrt(ss / static_cast<double>(out.samples - 1)) : 0.0;
    return out;
}

}  // namespace qjump
