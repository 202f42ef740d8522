#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "nsatk/ext_real.hpp"

namespace nsatk {

namespace tol {
// Two-tier comparison accuracy: closed-form oracles vs pure sampling.
inline constexpr double oracle = 1e-6;
inline constexpr double sampling = 1e-3;
} // namespace tol

// Geometric step schedule t_k = t0 * rho^k used by every one-sided limit.
// Steps below floor_rel * (1 + |t_ref|) are dropped.
struct SamplingSchedule {
    double t0 = 1e-2;
    double rho = 0.5;
    int steps = 40;
    int tail = 12;
    double floor_rel = 1e-14;

    void validate() const {
        if (!(t0 > 0.0)) throw std::invalid_argument("SamplingSchedule: t0 must be > 0");
        if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("SamplingSchedule: rho must be in (0,1)");
        if (steps < 2 || tail < 2 || tail > steps)
            throw std::invalid_argument("SamplingSchedule: need steps >= tail >= 2");
        if (!(floor_rel > 0.0)) throw std::invalid_argument("SamplingSchedule: floor must be > 0");
    }

    std::vector<double> generate(double t_ref) const {
        validate();
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(steps));
        const double lo = floor_rel * (1.0 + std::fabs(t_ref));
        double t = t0;
        for (int k = 0; k < steps && t >= lo; ++k, t *= rho) out.push_back(t);
        return out;
    }
};

// Numeric limit estimate emitted by every sampling-based operation.
// converged means the tail statistic settled within tolerance, or the
// samples diverged monotonically so an infinite value is the honest answer.
struct Estimate {
    ExtReal value;
    double spread = 0.0;
    int samples = 0;
    bool converged = false;
    double tolerance = 0.0;
};

enum class ExtremeKind { minimum, maximum };

namespace detail {
inline constexpr double div_magnitude = 1e3; // extremes below this are never called infinite
inline constexpr double div_ratio = 4.0;     // growth across tail halves that declares divergence
} // namespace detail

// Tail-window extremum estimator for liminf/limsup over samples ordered from
// the coarsest scale to the finest. The tail is split in half; the spread is
// the gap between the two half-window extrema. Divergence to +/-inf is
// declared when the extrema grow by div_ratio across the halves beyond
// div_magnitude, or when a sample passes hard_cap in the extremal direction.
inline Estimate estimate_limit(std::span<const ExtReal> samples, ExtremeKind kind, int tail,
                               double rel_tol, double hard_cap = 1e14) {
    Estimate e;
    e.samples = static_cast<int>(samples.size());
    e.tolerance = rel_tol;
    if (samples.empty()) return e;

    const int n = e.samples;
    const int m = tail < n ? tail : n;
    const auto win = samples.subspan(static_cast<std::size_t>(n - m));
    const int half = (m + 1) / 2;

    const bool want_max = kind == ExtremeKind::maximum;
    auto extreme = [&](std::span<const ExtReal> s) {
        ExtReal best = s[0];
        for (const auto& v : s) best = want_max ? max(best, v) : min(best, v);
        return best;
    };

    const ExtReal e_old = extreme(win.first(static_cast<std::size_t>(half)));
    const ExtReal e_new = extreme(win.subspan(static_cast<std::size_t>(half)));
    const ExtReal ext = want_max ? max(e_old, e_new) : min(e_old, e_new);
    const double sign = want_max ? 1.0 : -1.0;

    // Infinite samples in the extremal direction: persistent across both
    // halves means the window sits at the infinity; otherwise unsettled.
    if (!ext.finite()) {
        e.value = ext;
        const bool persistent = (e_old == ext) && (e_new == ext);
        e.spread = persistent ? 0.0 : std::numeric_limits<double>::infinity();
        e.converged = persistent;
        return e;
    }

    // Divergence may run toward either infinity regardless of which
    // extremum is being tracked: the window statistic escaping in one
    // direction is decided by the data.
    const double vo = e_old.raw();
    const double vn = e_new.raw();
    const bool pos_div = (vn >= detail::div_magnitude && vo >= detail::div_magnitude &&
                          vn >= detail::div_ratio * vo) ||
                         ext.raw() >= hard_cap;
    const bool neg_div = (vn <= -detail::div_magnitude && vo <= -detail::div_magnitude &&
                          vn <= detail::div_ratio * vo) ||
                         ext.raw() <= -hard_cap;
    if (pos_div || neg_div) {
        e.value = pos_div ? ExtReal::pos_inf() : ExtReal::neg_inf();
        e.spread = 0.0;
        e.converged = true;
        e.tolerance = rel_tol;
        return e;
    }
    (void)sign;

    e.value = ext;
    e.spread = ext_distance(e_old, e_new);
    const double eff = rel_tol * (1.0 + std::fabs(ext.raw()));
    e.tolerance = eff;
    e.converged = e.spread <= eff;
    return e;
}

inline Estimate estimate_limit(const std::vector<ExtReal>& samples, ExtremeKind kind, int tail,
                               double rel_tol, double hard_cap = 1e14) {
    return estimate_limit(std::span<const ExtReal>(samples), kind, tail, rel_tol, hard_cap);
}

} // namespace nsatk
