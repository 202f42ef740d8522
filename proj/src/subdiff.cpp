#include "nsatk/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace nsatk {

namespace {

[[maybe_unused]] Point axpy(const Point& x, double s, const Point& v) {
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * v[i];
    return out;
}

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::string point_str(const Point& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ')';
    return os.str();
}

// verified equality of two estimates under the ExtReal order, with the
// trichotomy used by all semismoothness checks.
Verdict equality_verdict(const Estimate& a, const Estimate& b, double tol, const char* lhs,
                         const char* rhs) {
    std::ostringstream ev;
    ev << lhs << "=" << a.value.str() << " " << rhs << "=" << b.value.str();
    const bool a_inf = !a.value.finite();
    const bool b_inf = !b.value.finite();
    if (a_inf && b_inf)
        return a.value == b.value ? Verdict::pass(ev.str()) : Verdict::fail(ev.str());
    if (a_inf != b_inf) {
        if ((a_inf && a.converged) || (b_inf && b.converged)) return Verdict::fail(ev.str());
        return Verdict::unknown(ev.str());
    }
    if (!a.converged || !b.converged) {
        ev << " (unsettled)";
        return Verdict::unknown(ev.str());
    }
    const double gap = std::fabs(a.value.raw() - b.value.raw());
    const double scale = 1.0 + std::min(std::fabs(a.value.raw()), std::fabs(b.value.raw()));
    if (gap <= tol * scale) return Verdict::pass(ev.str());
    if (gap > 3.0 * tol * scale) return Verdict::fail(ev.str());
    ev << " (gap in undecided band)";
    return Verdict::unknown(ev.str());
}

} // namespace

ExtReal support_value(const SubdiffOracle& oracle, const Point& x, const Point& u) {
    if (!oracle.support) throw MissingOracleError("support_value: oracle has no support function");
    return oracle.support(x, u);
}

Verdict mr_member(const CatalogEntry& f, const Point& x, const Point& xstar, int probe_budget,
                  Rng& rng) {
    if (!f.has_tag(tags::convex))
        throw std::invalid_argument("mr_member: entry '" + f.name + "' is not tagged convex");
    const ExtReal fx = f.eval(x);
    if (!fx.finite()) return Verdict::fail("x outside the effective domain");

    auto violated_at = [&](const Point& y) -> bool {
        const ExtReal fy = f.eval(y);
        if (!fy.finite()) return false; // inequality holds trivially at +inf
        Point diff(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - x[i];
        return dot(xstar, diff) + fx.raw() > fy.raw() + 1e-12;
    };

    int checked = 0;
    for (const auto& y : f.domain.extreme_points(f.dim)) {
        if (violated_at(y))
            return Verdict::fail("subgradient inequality violated at extreme point " + point_str(y));
        ++checked;
    }
    // A short deterministic ray scan toward each extreme point catches
    // violations that concentrate near x (steep boundaries).
    for (const auto& y : f.domain.extreme_points(f.dim)) {
        for (double t : {1e-6, 1e-4, 1e-2, 0.1, 0.5}) {
            Point mid(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) mid[i] = x[i] + t * (y[i] - x[i]);
            if (violated_at(mid))
                return Verdict::fail("subgradient inequality violated at " + point_str(mid));
            ++checked;
        }
    }
    while (checked < probe_budget) {
        const Point y = f.domain.sample(f.dim, rng);
        if (violated_at(y))
            return Verdict::fail("subgradient inequality violated at " + point_str(y));
        ++checked;
    }
    if (probe_budget < 8) return Verdict::unknown("budget too small to support membership");
    return Verdict::pass("no violation over " + std::to_string(checked) + " probes");
}

std::vector<Point> clarke_sample(const CatalogEntry& f, const Point& x, int budget, double radius,
                                 Rng& rng) {
    if (!f.has_tag(tags::locally_lipschitz))
        throw std::invalid_argument("clarke_sample: entry '" + f.name +
                                    "' is not tagged locally_lipschitz");
    if (f.dim > 3) throw std::invalid_argument("clarke_sample: dim must be <= 3");

    std::vector<Point> grads;
    for (int k = 0; k < budget; ++k) {
        Point p = x;
        const Point dirn = rng.unit_vector(f.dim);
        const double r = radius * std::pow(rng.uniform01(), 1.0 / f.dim);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += r * dirn[i];
        Point g(p.size());
        bool ok = true;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double h = 1e-7 * (1.0 + std::fabs(p[i]));
            Point pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const ExtReal fp = f.eval(pp), fm = f.eval(pm);
            if (!fp.finite() || !fm.finite()) {
                ok = false;
                break;
            }
            g[i] = (fp.raw() - fm.raw()) / (2.0 * h);
        }
        if (ok) grads.push_back(std::move(g));
    }
    std::sort(grads.begin(), grads.end());
    grads.erase(std::unique(grads.begin(), grads.end(),
                            [](const Point& a, const Point& b) {
                                for (std::size_t i = 0; i < a.size(); ++i)
                                    if (std::fabs(a[i] - b[i]) > 1e-9) return false;
                                return true;
                            }),
                grads.end());
    return grads;
}

SubdiffOracle make_gradient_sample_oracle(const CatalogEntry& f, int budget, double radius,
                                          std::uint64_t seed) {
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::gradient_sample;
    auto entry = std::make_shared<CatalogEntry>(f);
    o.support = [entry, budget, radius, seed](const Point& x, const Point& u) -> ExtReal {
        Rng rng = Rng(seed).split("gradient_sample");
        const auto grads = clarke_sample(*entry, x, budget, radius, rng);
        if (grads.empty()) return ExtReal::neg_inf();
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& g : grads) best = std::max(best, dot(g, u));
        return ExtReal(best);
    };
    o.sample = [entry, budget, radius, seed](const Point& x, int b, Rng&) {
        Rng rng = Rng(seed).split("gradient_sample");
        return clarke_sample(*entry, x, std::min(b, budget), radius, rng);
    };
    return o;
}

Verdict upper_semismooth_check(const CatalogEntry& f, const Point& x, const Point& u,
                               const DirectionalProbe& probe, double tol) {
    const Estimate r = radial(f, x, u, probe.approach, probe.rel_tol);
    const Estimate nat = natural_dir(f, x, u, probe, NaturalMode::from_radial);
    return equality_verdict(nat, r, tol, "nat", "r");
}

Verdict strictly_upper_semismooth_check(const CatalogEntry& f, const Point& x, const Point& u,
                                        const DirectionalProbe& probe, double tol) {
    const Estimate r = radial(f, x, u, probe.approach, probe.rel_tol);
    const Estimate nn = natural_full(f, x, u, probe, NaturalMode::from_radial);
    return equality_verdict(nn, r, tol, "natnat", "r");
}

std::vector<Segment> default_segments(const CatalogEntry& entry) {
    std::vector<double> lo, hi;
    entry.domain.sampling_box(entry.dim, lo, hi);
    std::vector<Segment> segs;
    for (int i = 0; i < entry.dim; ++i) {
        Point base(static_cast<std::size_t>(entry.dim));
        Point dir(static_cast<std::size_t>(entry.dim), 0.0);
        for (int j = 0; j < entry.dim; ++j)
            base[static_cast<std::size_t>(j)] =
                j == i ? lo[static_cast<std::size_t>(j)]
                       : 0.5 * (lo[static_cast<std::size_t>(j)] + hi[static_cast<std::size_t>(j)]);
        dir[static_cast<std::size_t>(i)] =
            hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
        segs.push_back({std::move(base), std::move(dir)});
    }
    return segs;
}

std::map<std::string, Verdict> class_check(const CatalogEntry& entry,
                                           const std::vector<Segment>& segments,
                                           const ClassCheckOptions& opts, Rng& rng) {
    struct ClassSpec {
        const char* tag;
        bool full;            // uses the omnidirectional regularization
        bool need_finite;     // radial subderivative must be finite
        bool forbid_pos_inf;  // radial subderivative must not be +inf
        bool allow_exceptions;
        bool exclude_right_end; // condition quantified over [0,1) only
    };
    static const ClassSpec specs[] = {
        {tags::lsc_natnat, true, false, true, false, true},
        {tags::lc_natn, false, true, false, true, false},
        {tags::lacg_nata, false, true, false, true, false},
        {tags::lacgstar_nata, false, false, false, true, false},
    };

    std::map<std::string, Verdict> out;
    Rng local = rng.split("class_check");

    for (const auto& spec : specs) {
        Outcome worst = Outcome::verified;
        std::string evidence = "all sampled points pass";
        for (const auto& seg : segments) {
            const Restriction r = restrict_to_segment(entry, seg);
            std::vector<double> params;
            for (int i = 0; i < opts.grid; ++i)
                params.push_back(static_cast<double>(i) / static_cast<double>(opts.grid - 1));
            for (int i = 0; i < opts.random; ++i) params.push_back(local.uniform01());
            std::sort(params.begin(), params.end());

            for (double t : params) {
                if (spec.exclude_right_end && t >= 1.0) continue;
                if (spec.allow_exceptions) {
                    bool excluded = false;
                    for (double te : r.exception_params)
                        if (std::fabs(t - te) <= opts.exclusion_window) excluded = true;
                    if (excluded) continue;
                }
                const Point x = seg.at(t);
                if (!entry.eval(x).finite()) continue;
                const Estimate rad = radial(entry, x, seg.dir, opts.probe.approach, opts.probe.rel_tol);
                if (spec.need_finite && !rad.value.finite() && rad.converged) {
                    worst = Outcome::falsified;
                    evidence = "radial subderivative not finite at t=" + std::to_string(t);
                    break;
                }
                if (spec.forbid_pos_inf && rad.value.is_pos_inf() && rad.converged) {
                    worst = Outcome::falsified;
                    evidence = "radial subderivative +inf at t=" + std::to_string(t);
                    break;
                }
                const Estimate reg = spec.full
                                         ? natural_full(entry, x, seg.dir, opts.probe)
                                         : natural_dir(entry, x, seg.dir, opts.probe);
                const Verdict v = equality_verdict(reg, rad, opts.tol, "reg", "r");
                if (v.falsified()) {
                    worst = Outcome::falsified;
                    evidence = "regularization mismatch at t=" + std::to_string(t) + ": " + v.evidence;
                    break;
                }
                if (v.inconclusive() && worst == Outcome::verified) {
                    worst = Outcome::inconclusive;
                    evidence = "unsettled estimate at t=" + std::to_string(t);
                }
            }
            if (worst == Outcome::falsified) break;
        }
        out[spec.tag] = Verdict{worst, evidence};
    }
    return out;
}

} // namespace nsatk
