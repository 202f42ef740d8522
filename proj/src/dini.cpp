#include "nsatk/dini.hpp"

#include <cmath>
#include <sstream>

namespace nsatk {

namespace {

constexpr double kEps = 2.220446049250313e-16;

ExtReal eval_checked(const Fn1& phi, double t) {
    try {
        const ExtReal v = phi(t);
        if (v.is_neg_inf()) throw EvalError("function returned -inf at t=" + std::to_string(t));
        return v;
    } catch (const std::domain_error&) { // NaN rejected by ExtReal
        throw EvalError("function evaluated to NaN at t=" + std::to_string(t));
    }
}

struct QuotientSample {
    double step;
    ExtReal q;
    double noise; // rounding-noise bound on q; +inf marks an infinite value
};

// Forward difference quotients along the schedule, coarse to fine, with a
// per-sample bound on the floating-point noise of the quotient (value
// rounding of phi plus argument rounding of t+h). Returns false when phi(t)
// is not finite.
bool right_quotients(const Fn1& phi, double t, const SamplingSchedule& sched,
                     std::vector<QuotientSample>& out) {
    const ExtReal at = eval_checked(phi, t);
    if (!at.finite()) return false;
    const auto hs = sched.generate(t);
    out.clear();
    out.reserve(hs.size());
    for (double h : hs) {
        const ExtReal ph = eval_checked(phi, t + h);
        const ExtReal q = (ph - at).divided(h);
        double noise = std::numeric_limits<double>::infinity();
        if (q.finite())
            noise = 32.0 * kEps *
                    (std::fabs(at.raw()) + std::fabs(ph.raw()) +
                     (std::fabs(t) + h) * std::fabs(q.raw())) /
                    h;
        out.push_back({h, q, noise});
    }
    return true;
}

Estimate outside_domain_estimate(double rel_tol) {
    Estimate e;
    e.value = ExtReal::neg_inf();
    e.converged = true;
    e.tolerance = rel_tol;
    return e;
}

struct DiniEstimates {
    Estimate lower, upper;
};

// Window selection and estimation shared by both one-sided derivatives.
//
// Steps whose quotient noise exceeds a small fraction of the quotient are
// measurement-limited and excluded from the window (the window shifts to
// the finest noise-safe steps). When the windowed quotients fit a straight
// line in the step within the noise, the limit exists at the probe's
// resolution and the intercept is reported for both the liminf and the
// limsup; otherwise each side reports its tail-window extremum with the
// divergence rules of estimate_limit.
DiniEstimates estimate_both(const std::vector<QuotientSample>& samples, int tail, double rel_tol,
                            double hard_cap) {
    DiniEstimates out;

    std::vector<QuotientSample> window;
    for (const auto& s : samples) {
        const double budget = s.q.finite() ? 5e-3 * (1.0 + std::fabs(s.q.raw())) : 0.0;
        if (!s.q.finite() || s.noise <= budget) window.push_back(s);
    }
    if (window.empty()) window = samples;
    if (static_cast<int>(window.size()) > tail)
        window.erase(window.begin(), window.end() - tail);

    // Trend fit on the strictly noise-safe suffix.
    std::vector<QuotientSample> fitw;
    for (const auto& s : samples)
        if (s.q.finite() && s.noise <= 1e-7 * (1.0 + std::fabs(s.q.raw()))) fitw.push_back(s);
    if (static_cast<int>(fitw.size()) > tail) fitw.erase(fitw.begin(), fitw.end() - tail);
    if (fitw.size() >= 6) {
        const double n = static_cast<double>(fitw.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const auto& s : fitw) {
            sx += s.step;
            sy += s.q.raw();
            sxx += s.step * s.step;
            sxy += s.step * s.q.raw();
        }
        const double det = n * sxx - sx * sx;
        if (det > 0.0) {
            const double c1 = (n * sxy - sx * sy) / det;
            const double c0 = (sy - c1 * sx) / n;
            double resid = 0.0, nmax = 0.0;
            for (const auto& s : fitw) {
                resid = std::max(resid, std::fabs(s.q.raw() - c0 - c1 * s.step));
                nmax = std::max(nmax, s.noise);
            }
            if (resid <= std::max(16.0 * nmax, 1e-9 * (1.0 + std::fabs(c0)))) {
                Estimate e;
                e.value = ExtReal(c0);
                e.spread = resid;
                e.samples = static_cast<int>(samples.size());
                e.tolerance = rel_tol * (1.0 + std::fabs(c0));
                e.converged = true;
                out.lower = e;
                out.upper = e;
                return out;
            }
        }
    }

    std::vector<ExtReal> vals;
    vals.reserve(window.size());
    for (const auto& s : window) vals.push_back(s.q);
    out.lower = estimate_limit(vals, ExtremeKind::minimum, static_cast<int>(vals.size()), rel_tol,
                               hard_cap);
    out.upper = estimate_limit(vals, ExtremeKind::maximum, static_cast<int>(vals.size()), rel_tol,
                               hard_cap);
    out.lower.samples = out.upper.samples = static_cast<int>(samples.size());
    return out;
}

DiniEstimates dini_both(const Fn1& phi, double t, const SamplingSchedule& sched, double rel_tol) {
    std::vector<QuotientSample> q;
    if (!right_quotients(phi, t, sched, q))
        return {outside_domain_estimate(rel_tol), outside_domain_estimate(rel_tol)};
    return estimate_both(q, sched.tail, rel_tol, 1.0 / sched.floor_rel);
}

} // namespace

Estimate lower_right_dini(const Fn1& phi, double t, const SamplingSchedule& sched, double rel_tol) {
    return dini_both(phi, t, sched, rel_tol).lower;
}

Estimate upper_right_dini(const Fn1& phi, double t, const SamplingSchedule& sched, double rel_tol) {
    return dini_both(phi, t, sched, rel_tol).upper;
}

std::pair<Estimate, Estimate> dini_pair(const Fn1& phi, double t, const SamplingSchedule& sched,
                                        double rel_tol) {
    const DiniEstimates d = dini_both(phi, t, sched, rel_tol);
    return {d.lower, d.upper};
}

Verdict is_right_differentiable(const Fn1& phi, double t, double tol, const SamplingSchedule& sched) {
    const auto [lo, hi] = dini_pair(phi, t, sched, tol);
    std::ostringstream ev;
    ev << "D+ in [" << lo.value.str() << ", " << hi.value.str() << "]";

    if (!lo.value.finite() || !hi.value.finite()) {
        ev << "; infinite one-sided derivative";
        return Verdict::fail(ev.str());
    }
    if (!lo.converged || !hi.converged) {
        ev << "; estimates did not settle (spread " << lo.spread << ", " << hi.spread << ")";
        return Verdict::unknown(ev.str());
    }
    const double gap = hi.value.raw() - lo.value.raw();
    const double scale = 1.0 + std::fabs(lo.value.raw());
    if (gap <= tol * scale) {
        ev << "; right derivative ~ " << 0.5 * (lo.value.raw() + hi.value.raw());
        return Verdict::pass(ev.str());
    }
    if (gap > 3.0 * tol * scale) {
        ev << "; liminf/limsup gap " << gap;
        return Verdict::fail(ev.str());
    }
    ev << "; gap " << gap << " within the undecided band";
    return Verdict::unknown(ev.str());
}

double oscillation_lower_bound(const Fn1& phi, double c, double d, int grid_size) {
    if (!(d > c)) throw std::invalid_argument("oscillation: empty interval");
    if (grid_size < 2) throw std::invalid_argument("oscillation: grid_size must be >= 2");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_size; ++i) {
        const double t = c + (d - c) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const ExtReal v = eval_checked(phi, t);
        if (!v.finite()) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, v.raw());
        hi = std::max(hi, v.raw());
    }
    return hi - lo;
}

} // namespace nsatk
