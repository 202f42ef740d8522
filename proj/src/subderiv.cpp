#include "nsatk/subderiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsatk/dini.hpp"

namespace nsatk {

namespace {

Point axpy(const Point& x, double s, const Point& v) {
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * v[i];
    return out;
}

double norm(const Point& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

Fn1 ray_function(const CatalogEntry& f, Point x, Point d) {
    return [eval = f.eval, x = std::move(x), d = std::move(d)](double t) {
        Point p(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] + t * d[i];
        return eval(p);
    };
}

Estimate minus_inf_estimate(double rel_tol) {
    Estimate e;
    e.value = ExtReal::neg_inf();
    e.converged = true;
    e.tolerance = rel_tol;
    return e;
}

// Inner one-sided liminf at an approach point, with the step schedule scaled
// to the approach distance so the inner limit resolves structure at that
// scale.
Estimate zoomed_radial(const CatalogEntry& f, const Point& x, const Point& d, double scale,
                       const DirectionalProbe::Zoom& z, double rel_tol) {
    SamplingSchedule s;
    s.t0 = z.lead * scale;
    s.rho = z.rho;
    s.steps = z.steps;
    s.tail = z.tail;
    s.floor_rel = std::max(z.floor_rel * scale, 1e-300);
    // floor is applied relative to (1+|t|) inside the schedule; t is 0 here
    // so floor_rel is the absolute inner floor.
    return lower_right_dini(ray_function(f, x, d), 0.0, s, rel_tol);
}

ExtReal support_or_throw(const CatalogEntry& f, const Point& x, const Point& d) {
    if (!f.subdiff || !f.subdiff->support)
        throw MissingOracleError("natural estimate: entry '" + f.name +
                                 "' has no subdifferential oracle");
    return f.subdiff->support(x, d);
}

struct NaturalResult {
    Estimate est;
    std::size_t argmin = 0;
};

// Core of both regularizations: for each alpha, the limsup over approach
// points x = xbar + s*v of the inner value at direction u + alpha(xbar - x);
// then the exhaustive minimum over the alpha grid.
NaturalResult natural_core(const CatalogEntry& f, const Point& xbar, const Point& u,
                           const DirectionalProbe& probe, NaturalMode mode, bool omnidirectional,
                           const std::vector<double>& alphas) {
    const double rel_tol = probe.rel_tol;
    if (!f.eval(xbar).finite()) return {minus_inf_estimate(rel_tol), 0};

    const auto ss = probe.approach.generate(0.0);
    const int tail = std::min<int>(probe.approach.tail, static_cast<int>(ss.size()));
    std::vector<double> s_tail(ss.end() - tail, ss.end());

    // Approach directions. The directional regularization uses the ray
    // direction plus a cone of radius = smallest positive perturbation; the
    // full regularization approaches from every probe direction and also
    // keeps the base point itself in the candidate set.
    std::vector<Point> dirs;
    dirs.push_back(u);
    double delta = 0.0;
    for (double d : probe.dir_perturb)
        if (d > 0.0 && (delta == 0.0 || d < delta)) delta = d;
    const auto perturbs =
        probe.perturb_dirs.empty() ? probe.directions_for(f.dim) : probe.perturb_dirs;
    const double u_norm = norm(u);
    // In one dimension the perturbed directions are collinear with u and
    // only reparametrize the approach; skip them.
    if (delta > 0.0 && f.dim > 1) {
        for (const auto& w : perturbs) dirs.push_back(axpy(u, delta * std::max(u_norm, 1.0), w));
    }
    if (omnidirectional) {
        const double scale = u_norm > 0.0 ? u_norm : 1.0;
        for (const auto& w : perturbs) {
            Point v(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) v[i] = scale * w[i];
            dirs.push_back(std::move(v));
        }
    }

    auto inner_value = [&](const Point& x, const Point& d, double scale) -> ExtReal {
        if (mode == NaturalMode::from_subdiff) return support_or_throw(f, x, d);
        const Estimate e = zoomed_radial(f, x, d, scale, probe.zoom, rel_tol);
        return e.value;
    };

    ExtReal best = ExtReal::pos_inf();
    std::size_t best_idx = 0;
    Estimate best_est;
    bool best_set = false;

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const double alpha = alphas[ai];
        Estimate level;
        bool level_set = false;
        for (const auto& v : dirs) {
            std::vector<ExtReal> samples;
            samples.reserve(s_tail.size());
            for (double s : s_tail) {
                const Point x = axpy(xbar, s, v);
                // direction u + alpha (xbar - x) = u - alpha s v
                const Point d = axpy(u, -alpha * s, v);
                const double scale = s * std::max(norm(v), 1e-12);
                samples.push_back(inner_value(x, d, scale));
            }
            const Estimate e =
                estimate_limit(samples, ExtremeKind::maximum, static_cast<int>(samples.size()),
                               rel_tol, 1.0 / probe.approach.floor_rel);
            if (!level_set || e.value > level.value ||
                (e.value == level.value && e.spread > level.spread)) {
                level = e;
                level_set = true;
            }
        }
        if (omnidirectional) {
            // The trivial net sitting at xbar: inner value in direction u.
            const ExtReal at_base = mode == NaturalMode::from_subdiff
                                        ? support_or_throw(f, xbar, u)
                                        : radial(f, xbar, u, {}, rel_tol).value;
            if (at_base > level.value) {
                Estimate e;
                e.value = at_base;
                e.converged = true;
                e.samples = 1;
                e.tolerance = rel_tol;
                level = e;
            }
        }
        if (!best_set || level.value < best) {
            best = level.value;
            best_est = level;
            best_idx = ai;
            best_set = true;
        }
    }
    return {best_est, best_idx};
}

Estimate natural_estimate(const CatalogEntry& f, const Point& xbar, const Point& u,
                          const DirectionalProbe& probe, NaturalMode mode, bool omnidirectional) {
    NaturalResult r = natural_core(f, xbar, u, probe, mode, omnidirectional, probe.alphas);
    Estimate e = r.est;

    // Grid-boundary and stability guards on the alpha minimum for entries
    // without the locally Lipschitz tag: an argmin at the largest alpha, or a
    // minimum that moves under 2x grid refinement, is flagged unconverged.
    if (e.value.finite() && probe.alpha_refine_check && !f.has_tag(tags::locally_lipschitz)) {
        if (r.argmin + 1 == probe.alphas.size() && probe.alphas.size() > 1) {
            e.converged = false;
        } else {
            std::vector<double> refined;
            for (std::size_t i = 0; i < probe.alphas.size(); ++i) {
                refined.push_back(probe.alphas[i]);
                if (i + 1 < probe.alphas.size())
                    refined.push_back(0.5 * (probe.alphas[i] + probe.alphas[i + 1]));
            }
            NaturalResult r2 = natural_core(f, xbar, u, probe, mode, omnidirectional, refined);
            if (ext_distance(r2.est.value, e.value) > probe.rel_tol * (1.0 + std::fabs(e.value.raw())))
                e.converged = false;
            if (r2.est.value < e.value) e.value = r2.est.value;
        }
    }
    return e;
}

} // namespace

std::vector<Point> DirectionalProbe::directions_for(int dim) const {
    std::vector<Point> dirs;
    for (int i = 0; i < dim; ++i) {
        Point p(static_cast<std::size_t>(dim), 0.0);
        p[static_cast<std::size_t>(i)] = 1.0;
        dirs.push_back(p);
        p[static_cast<std::size_t>(i)] = -1.0;
        dirs.push_back(p);
    }
    return dirs;
}

Estimate radial(const CatalogEntry& f, const Point& x, const Point& u, const SamplingSchedule& sched,
                double rel_tol) {
    if (!f.eval(x).finite()) return minus_inf_estimate(rel_tol);
    return lower_right_dini(ray_function(f, x, u), 0.0, sched, rel_tol);
}

Estimate upper_radial(const CatalogEntry& f, const Point& x, const Point& u,
                      const SamplingSchedule& sched, double rel_tol) {
    if (!f.eval(x).finite()) return minus_inf_estimate(rel_tol);
    return upper_right_dini(ray_function(f, x, u), 0.0, sched, rel_tol);
}

Estimate directional(const CatalogEntry& f, const Point& x, const Point& u,
                     const DirectionalProbe& probe) {
    if (!f.eval(x).finite()) return minus_inf_estimate(probe.rel_tol);
    const ExtReal fx = f.eval(x);
    const auto ts = probe.approach.generate(0.0);
    const auto perturbs = probe.perturb_dirs.empty() ? probe.directions_for(f.dim) : probe.perturb_dirs;
    const double u_norm = std::max(norm(u), 1.0);

    // Per-radius liminf of the quotient minimized over the direction ball,
    // then extrapolation of the two smallest radii toward radius 0.
    std::vector<double> deltas;
    for (double d : probe.dir_perturb)
        if (d > 0.0) deltas.push_back(d);
    std::sort(deltas.begin(), deltas.end());

    auto ball_liminf = [&](double delta) {
        std::vector<ExtReal> samples;
        samples.reserve(ts.size());
        for (double t : ts) {
            ExtReal q = (f.eval(axpy(x, t, u)) - fx).divided(t);
            if (delta > 0.0) {
                for (const auto& w : perturbs) {
                    const Point uprime = axpy(u, delta * u_norm, w);
                    q = min(q, (f.eval(axpy(x, t, uprime)) - fx).divided(t));
                }
            }
            samples.push_back(q);
        }
        return estimate_limit(samples, ExtremeKind::minimum, probe.approach.tail, probe.rel_tol,
                              1.0 / probe.approach.floor_rel);
    };

    if (deltas.empty()) return ball_liminf(0.0);
    const Estimate d1 = ball_liminf(deltas[0]); // smallest positive radius
    if (deltas.size() < 2 || !d1.value.finite()) return d1;
    const Estimate d2 = ball_liminf(deltas[1]);
    Estimate out = d1;
    if (d2.value.finite()) {
        // Linear extrapolation in the radius when the trend is mild.
        const double l1 = d1.value.raw(), l2 = d2.value.raw();
        if (std::fabs(l1 - l2) <= 0.1 * (1.0 + std::fabs(l1))) {
            const double slope = (l1 - l2) / (deltas[0] - deltas[1]);
            out.value = ExtReal(l1 - slope * deltas[0]);
            out.spread = std::max(d1.spread, std::fabs(out.value.raw() - l1));
            out.converged = d1.converged && out.spread <= out.tolerance * (1.0 + std::fabs(l1));
        }
    }
    return out;
}

Estimate clarke(const CatalogEntry& f, const Point& xbar, const Point& u,
                const DirectionalProbe& probe) {
    const ExtReal fxbar = f.eval(xbar);
    if (!fxbar.finite()) return minus_inf_estimate(probe.rel_tol);

    const auto rs = probe.approach.generate(0.0);
    const auto perturbs = probe.perturb_dirs.empty() ? probe.directions_for(f.dim) : probe.perturb_dirs;

    // Value filter: keep base points with |f(x)-f(xbar)| within the observed
    // local modulus times a sub-linear radius power, so lsc jumps and points
    // off the effective domain never enter the limsup.
    double modulus = 1.0;
    {
        const double r0 = rs.front();
        for (const auto& w : perturbs) {
            const ExtReal fx = f.eval(axpy(xbar, r0, w));
            if (fx.finite())
                modulus = std::max(modulus, std::fabs(fx.raw() - fxbar.raw()) / std::sqrt(r0));
        }
        modulus *= 4.0;
    }

    static const double t_fracs[3] = {1.0, 0.25, 0.0625};
    std::vector<ExtReal> stage_max;
    stage_max.reserve(rs.size());
    for (double r : rs) {
        ExtReal m = ExtReal::neg_inf();
        // the base point itself participates at every stage
        for (double tf : t_fracs) {
            const double t = r * tf;
            m = max(m, (f.eval(axpy(xbar, t, u)) - fxbar).divided(t));
        }
        for (const auto& w : perturbs) {
            const Point x = axpy(xbar, r, w);
            const ExtReal fx = f.eval(x);
            if (!fx.finite() || std::fabs(fx.raw() - fxbar.raw()) > modulus * std::sqrt(r)) continue;
            for (double tf : t_fracs) {
                const double t = r * tf;
                m = max(m, (f.eval(axpy(x, t, u)) - fx).divided(t));
            }
        }
        stage_max.push_back(m);
    }
    return estimate_limit(stage_max, ExtremeKind::maximum, probe.approach.tail, probe.rel_tol,
                          1.0 / probe.approach.floor_rel);
}

Estimate clarke_rockafellar(const CatalogEntry& f, const Point& xbar, const Point& u,
                            const DirectionalProbe& probe) {
    const ExtReal fxbar = f.eval(xbar);
    if (!fxbar.finite()) return minus_inf_estimate(probe.rel_tol);

    const auto rs = probe.approach.generate(0.0);
    const auto perturbs = probe.perturb_dirs.empty() ? probe.directions_for(f.dim) : probe.perturb_dirs;
    const double u_norm = std::max(norm(u), 1.0);

    std::vector<double> deltas;
    for (double d : probe.dir_perturb)
        if (d > 0.0) deltas.push_back(d);
    std::sort(deltas.begin(), deltas.end());
    if (deltas.empty()) deltas.push_back(1e-3);

    double modulus = 1.0;
    {
        const double r0 = rs.front();
        for (const auto& w : perturbs) {
            const ExtReal fx = f.eval(axpy(xbar, r0, w));
            if (fx.finite())
                modulus = std::max(modulus, std::fabs(fx.raw() - fxbar.raw()) / std::sqrt(r0));
        }
        modulus *= 4.0;
    }

    static const double t_fracs[3] = {1.0, 0.25, 0.0625};
    auto level = [&](double delta) {
        std::vector<ExtReal> stage_max;
        stage_max.reserve(rs.size());
        for (double r : rs) {
            ExtReal m = ExtReal::neg_inf();
            auto consider = [&](const Point& x, const ExtReal& fx) {
                for (double tf : t_fracs) {
                    const double t = r * tf;
                    // infimum over the sampled direction ball
                    ExtReal q = (f.eval(axpy(x, t, u)) - fx).divided(t);
                    for (const auto& w : perturbs) {
                        const Point uprime = axpy(u, delta * u_norm, w);
                        q = min(q, (f.eval(axpy(x, t, uprime)) - fx).divided(t));
                    }
                    m = max(m, q);
                }
            };
            consider(xbar, fxbar);
            for (const auto& w : perturbs) {
                const Point x = axpy(xbar, r, w);
                const ExtReal fx = f.eval(x);
                if (!fx.finite() || std::fabs(fx.raw() - fxbar.raw()) > modulus * std::sqrt(r)) continue;
                consider(x, fx);
            }
            stage_max.push_back(m);
        }
        return estimate_limit(stage_max, ExtremeKind::maximum, probe.approach.tail, probe.rel_tol,
                              1.0 / probe.approach.floor_rel);
    };

    // sup over delta > 0 realized as the radius-0 extrapolation of the two
    // smallest sampled radii (the level is nonincreasing in delta).
    const Estimate e1 = level(deltas[0]);
    if (deltas.size() < 2 || !e1.value.finite()) return e1;
    const Estimate e2 = level(deltas[1]);
    Estimate out = e1;
    if (e2.value.finite()) {
        const double l1 = e1.value.raw(), l2 = e2.value.raw();
        if (std::fabs(l1 - l2) <= 0.1 * (1.0 + std::fabs(l1))) {
            const double slope = (l1 - l2) / (deltas[0] - deltas[1]);
            out.value = ExtReal(l1 - slope * deltas[0]);
            out.spread = std::max(e1.spread, std::fabs(out.value.raw() - l1));
            out.converged = e1.converged && out.spread <= out.tolerance * (1.0 + std::fabs(l1));
        }
    }
    return out;
}

Estimate natural_dir(const CatalogEntry& f, const Point& x, const Point& u,
                     const DirectionalProbe& probe, NaturalMode mode) {
    return natural_estimate(f, x, u, probe, mode, false);
}

Estimate natural_full(const CatalogEntry& f, const Point& x, const Point& u,
                      const DirectionalProbe& probe, NaturalMode mode) {
    return natural_estimate(f, x, u, probe, mode, true);
}

DiagramValues diagram_values(const CatalogEntry& f, const Point& x, const Point& u,
                             const DirectionalProbe& probe) {
    DiagramValues v;
    v.radial = radial(f, x, u, probe.approach, probe.rel_tol);
    v.upper_radial = upper_radial(f, x, u, probe.approach, probe.rel_tol);
    v.directional = directional(f, x, u, probe);
    v.clarke = clarke(f, x, u, probe);
    v.clarke_rockafellar = clarke_rockafellar(f, x, u, probe);
    v.natural_directional = natural_dir(f, x, u, probe, NaturalMode::from_radial);
    v.natural_full = natural_full(f, x, u, probe, NaturalMode::from_radial);
    return v;
}

Verdict diagram_check(const CatalogEntry& f, const Point& x, const Point& u,
                      const DirectionalProbe& probe, double slack) {
    const DiagramValues v = diagram_values(f, x, u, probe);

    auto scale_slack = [&](const Estimate& a, const Estimate& b) {
        double m = 0.0;
        if (a.value.finite()) m = std::max(m, std::fabs(a.value.raw()));
        if (b.value.finite()) m = std::max(m, std::fabs(b.value.raw()));
        return slack * (1.0 + m) + 1e-12;
    };
    std::ostringstream ev;
    auto arrow = [&](const char* name, const Estimate& a, const Estimate& b) {
        if (leq_with_slack(a.value, b.value, scale_slack(a, b))) return true;
        ev << "violated " << name << ": " << a.value.str() << " > " << b.value.str();
        return false;
    };

    if (!arrow("r <= r+", v.radial, v.upper_radial)) return Verdict::fail(ev.str());
    if (!arrow("d <= r", v.directional, v.radial)) return Verdict::fail(ev.str());
    if (!arrow("d <= up", v.directional, v.clarke_rockafellar)) return Verdict::fail(ev.str());
    if (!arrow("up <= natnat", v.clarke_rockafellar, v.natural_full)) return Verdict::fail(ev.str());
    if (!arrow("nat <= natnat", v.natural_directional, v.natural_full)) return Verdict::fail(ev.str());

    // r+ <= nat needs f(xbar) = liminf f(xbar + t u); check that premise on
    // the ray samples.
    {
        const auto ts = probe.approach.generate(0.0);
        std::vector<ExtReal> vals;
        for (double t : ts) vals.push_back(f.eval(axpy(x, t, u)));
        const Estimate lim =
            estimate_limit(vals, ExtremeKind::minimum, probe.approach.tail, probe.rel_tol);
        const ExtReal fx = f.eval(x);
        if (lim.converged && fx.finite() &&
            ext_distance(lim.value, fx) <= probe.rel_tol * (1.0 + std::fabs(fx.raw()))) {
            if (!arrow("r+ <= nat", v.upper_radial, v.natural_directional))
                return Verdict::fail(ev.str());
        }
    }
    if (f.has_tag(tags::continuous_on_domain)) {
        if (!arrow("natnat <= circ", v.natural_full, v.clarke)) return Verdict::fail(ev.str());
    }

    if (f.has_tag(tags::locally_lipschitz)) {
        auto equal = [&](const char* name, const Estimate& a, const Estimate& b) {
            if (ext_distance(a.value, b.value) <= scale_slack(a, b)) return true;
            ev << "violated " << name << ": " << a.value.str() << " vs " << b.value.str();
            return false;
        };
        if (!equal("r = d", v.radial, v.directional)) return Verdict::fail(ev.str());
        if (!equal("natnat = circ", v.natural_full, v.clarke)) return Verdict::fail(ev.str());
        if (!equal("natnat = up", v.natural_full, v.clarke_rockafellar)) return Verdict::fail(ev.str());
        if (!arrow("r <= r+", v.radial, v.upper_radial)) return Verdict::fail(ev.str());
        if (!arrow("r+ <= nat", v.upper_radial, v.natural_directional)) return Verdict::fail(ev.str());
    }

    const bool settled = v.radial.converged && v.upper_radial.converged &&
                         v.natural_directional.converged && v.natural_full.converged;
    if (!settled) return Verdict::unknown("estimates did not all settle");
    ev << "r=" << v.radial.value.str() << " r+=" << v.upper_radial.value.str()
       << " d=" << v.directional.value.str() << " nat=" << v.natural_directional.value.str()
       << " natnat=" << v.natural_full.value.str() << " circ=" << v.clarke.value.str()
       << " up=" << v.clarke_rockafellar.value.str();
    return Verdict::pass(ev.str());
}

} // namespace nsatk
