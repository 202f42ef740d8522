#include "nsatk/hk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "nsatk/dini.hpp"

namespace nsatk {

namespace {

double eval_finite(const Fn1& phi, double t) {
    try {
        const ExtReal v = phi(t);
        if (!v.finite())
            throw IntegrationError("integrand infinite at t=" + std::to_string(t) +
                                   " off the declared singular set");
        return v.raw();
    } catch (const std::domain_error&) { // NaN rejected by ExtReal
        throw EvalError("integrand evaluated to NaN at t=" + std::to_string(t));
    }
}

// 7/15-point Gauss-Kronrod pair on [lo,hi]; err receives |K15-G7|.
double gk_panel(const Fn1& phi, double lo, double hi, double& err) {
    static const double nodes[8] = {
        0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
        0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
    static const double wg[4] = {0.417959183673469, 0.381830050505119, 0.279705391489277,
                                 0.129484966168870};
    static const double wk[8] = {0.209482141084728, 0.190350578064785, 0.140653259715525,
                                 0.063092092629979, 0.204432940075298, 0.169004726639267,
                                 0.104790010322250, 0.022935322010529};
    const double mid = 0.5 * (lo + hi);
    const double hal = 0.5 * (hi - lo);
    const double f0 = eval_finite(phi, mid);
    double g = wg[0] * f0;
    double k = wk[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hal * nodes[i];
        const double fs = eval_finite(phi, mid + dx) + eval_finite(phi, mid - dx);
        k += wk[i] * fs;
        if (i < 4) g += wg[i] * fs;
    }
    g *= hal;
    k *= hal;
    err = std::fabs(k - g);
    return k;
}

struct QuadAcc {
    double sum = 0.0, comp = 0.0, err = 0.0;
    void add(double v) { // Kahan
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Adaptive bisection with an absolute budget for the whole interval.
// presplit seeds the recursion with uniform panels (the Cauchy stages use it
// to carry the learned oscillation density from one stage to the next, which
// avoids re-discovering the resolution by bisection every stage).
// panels_used reports the number of accepted panels.
void adaptive_quad(const Fn1& phi, double lo, double hi, double budget, int max_depth, QuadAcc& acc,
                   int presplit = 1, long* panels_used = nullptr) {
    struct Item {
        double lo, hi, budget;
        int depth;
    };
    std::vector<Item> stack;
    presplit = std::max(1, presplit);
    const double w = (hi - lo) / presplit;
    for (int i = presplit - 1; i >= 0; --i)
        stack.push_back({lo + i * w, i + 1 == presplit ? hi : lo + (i + 1) * w, budget / presplit, 0});
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double v = gk_panel(phi, it.lo, it.hi, err);
        const bool tiny = (it.hi - it.lo) < 1e-15 * (1.0 + std::fabs(it.lo) + std::fabs(it.hi));
        if (err <= it.budget || it.depth >= max_depth || tiny) {
            acc.add(v);
            acc.err += err;
            if (panels_used) ++*panels_used;
            continue;
        }
        const double mid = 0.5 * (it.lo + it.hi);
        stack.push_back({it.lo, mid, 0.5 * it.budget, it.depth + 1});
        stack.push_back({mid, it.hi, 0.5 * it.budget, it.depth + 1});
    }
}

// Cauchy/Hake limit toward a singular endpoint: stage k integrates the gap
// between eps/2 and eps, eps halving each stage. Stops when either
//   (a) three consecutive stage increments fall below tol/4, or
//   (b) the increment-envelope projection of the remaining tail falls below
//       tol/2 (handles conditionally convergent oscillatory tails whose
//       increments have erratic signs but a decaying envelope; resolving
//       such tails to rule (a) alone can cost orders of magnitude more
//       integrand evaluations for no accuracy gain).
// The envelope decay rate is learned from the observed increments, floored
// at 0.35 per stage so an accidental run of small increments cannot fake
// convergence. When the signed increment ratio is stable the projected
// geometric tail is folded into the value, which recovers power-law tails
// like 1/sqrt to near the quadrature accuracy.
void cauchy_tail(const Fn1& phi, double sing, double far, double tol, const HKOptions& opts,
                 QuadAcc& acc, int& refinements) {
    const double len = std::fabs(far - sing);
    const double sign = far > sing ? 1.0 : -1.0;
    double eps = len * opts.eps0_frac;

    adaptive_quad(phi, std::min(sing + sign * eps, far), std::max(sing + sign * eps, far),
                  tol / 8.0, opts.max_quad_depth, acc);

    std::vector<double> incs;
    double env = 0.0;
    std::vector<double> env_ratios;
    int small_run = 0;
    long prev_panels = 1, prev_prev_panels = 1;
    for (int k = 0; k < opts.max_refinements; ++k) {
        const double eps_next = 0.5 * eps;
        const double u = sing + sign * eps_next;
        const double v = sing + sign * eps;
        QuadAcc stage;
        // Panel prediction: extrapolate the per-stage panel count by its
        // observed growth (capped), so oscillation density is not
        // re-discovered by bisection at every stage.
        long growth = prev_prev_panels > 0 ? prev_panels / std::max(prev_prev_panels, 1L) : 1;
        growth = std::clamp(growth, 1L, 8L);
        const int presplit =
            static_cast<int>(std::min<long>(std::max(1L, prev_panels * growth / 2), 4'000'000L));
        long panels = 0;
        adaptive_quad(phi, std::min(u, v), std::max(u, v), tol / (6.0 * (k + 2.0)),
                      opts.max_quad_depth, stage, presplit, &panels);
        prev_prev_panels = prev_panels;
        prev_panels = panels;
        const double inc = stage.sum;
        acc.add(inc);
        acc.err += stage.err;
        incs.push_back(inc);
        ++refinements;
        eps = eps_next;

        const double prev_env = env;
        env = std::max(std::fabs(inc), 0.25 * env);
        if (k >= 1 && prev_env > 0.0) {
            env_ratios.push_back(std::clamp(env / prev_env, 0.05, 0.95));
            if (env_ratios.size() > 5) env_ratios.erase(env_ratios.begin());
        }

        small_run = std::fabs(inc) < tol / 4.0 ? small_run + 1 : 0;
        // Median of the recent envelope decay, floored so a lucky run of
        // small increments cannot fake convergence.
        double rho = 0.9;
        if (env_ratios.size() >= 4) {
            std::vector<double> sorted(env_ratios);
            std::sort(sorted.begin(), sorted.end());
            rho = std::clamp(sorted[sorted.size() / 2], 0.2, 0.9);
        }
        const double projected_tail = env * rho / (1.0 - rho);
        const bool enveloped =
            env_ratios.size() >= 4 && projected_tail <= tol && std::fabs(inc) <= tol;
        if (std::getenv("NSATK_HK_TRACE"))
            std::fprintf(stderr, "stage %d eps %.3e inc %.3e env %.3e rho %.2f That %.3e tol %.3e panels %ld\n",
                         k, eps, inc, env, rho, projected_tail, tol, panels);
        if (small_run >= 3 || enveloped) {
            const std::size_t n = incs.size();
            bool corrected = false;
            if (n >= 3 && incs[n - 2] != 0.0 && incs[n - 3] != 0.0) {
                const double r1 = incs[n - 1] / incs[n - 2];
                const double r2 = incs[n - 2] / incs[n - 3];
                if (std::isfinite(r1) && std::isfinite(r2) && std::fabs(r1 - r2) < 0.2 &&
                    std::fabs(r1) < 0.95) {
                    const double tail = incs[n - 1] * r1 / (1.0 - r1);
                    acc.add(tail);
                    acc.err += 0.5 * std::fabs(tail) + 1e-18;
                    corrected = true;
                }
            }
            if (!corrected) acc.err += std::max(projected_tail, std::fabs(incs[n - 1]));
            return;
        }
    }
    std::ostringstream os;
    os << "Cauchy tail toward t=" << sing << " did not settle after " << opts.max_refinements
       << " refinements (last increment " << (incs.empty() ? 0.0 : incs.back()) << ")";
    throw IntegrationError(os.str());
}

struct Piece {
    double lo, hi;
    bool sing_lo, sing_hi;
};

std::vector<Piece> split_pieces(double lo, double hi, const std::vector<double>& singular) {
    std::vector<double> cuts = {lo, hi};
    for (double s : singular)
        if (s >= lo && s <= hi) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto is_sing = [&](double x) {
        return std::find(singular.begin(), singular.end(), x) != singular.end();
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            pieces.push_back({cuts[i], cuts[i + 1], is_sing(cuts[i]), is_sing(cuts[i + 1])});
    return pieces;
}

} // namespace

HKResult hk_integrate(const Fn1& phi, double a, double b, std::vector<double> singular_set,
                      double tol, const HKOptions& opts) {
    if (!(tol > 0.0)) throw std::invalid_argument("hk_integrate: tol must be > 0");
    if (a == b) return {0.0, 0.0, 0, true};
    const double flip = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);

    std::sort(singular_set.begin(), singular_set.end());
    singular_set.erase(std::unique(singular_set.begin(), singular_set.end()), singular_set.end());
    const auto pieces = split_pieces(lo, hi, singular_set);

    // Pieces touching a singular point share half the budget; clean pieces
    // split the rest by length.
    double clean_len = 0.0;
    int n_sing = 0;
    for (const auto& p : pieces) {
        if (p.sing_lo || p.sing_hi) ++n_sing;
        else clean_len += p.hi - p.lo;
    }

    QuadAcc acc;
    int refinements = 0;
    for (const auto& p : pieces) {
        const bool singular = p.sing_lo || p.sing_hi;
        double piece_tol;
        if (n_sing == 0)
            piece_tol = tol * (p.hi - p.lo) / clean_len;
        else if (singular)
            piece_tol = 0.8 * tol / n_sing;
        else
            piece_tol = 0.2 * tol * (p.hi - p.lo) / std::max(clean_len, 1e-300);

        if (!singular) {
            adaptive_quad(phi, p.lo, p.hi, piece_tol / 2.0, opts.max_quad_depth, acc);
        } else if (p.sing_lo && !p.sing_hi) {
            cauchy_tail(phi, p.lo, p.hi, piece_tol, opts, acc, refinements);
        } else if (!p.sing_lo && p.sing_hi) {
            cauchy_tail(phi, p.hi, p.lo, piece_tol, opts, acc, refinements);
        } else {
            const double mid = 0.5 * (p.lo + p.hi);
            cauchy_tail(phi, p.lo, mid, piece_tol / 2.0, opts, acc, refinements);
            cauchy_tail(phi, p.hi, mid, piece_tol / 2.0, opts, acc, refinements);
        }
    }

    HKResult r;
    r.value = flip * acc.sum;
    r.error_bound = acc.err;
    r.refinements = refinements;
    r.converged = acc.err <= tol;
    return r;
}

std::vector<HKResult> hk_indefinite(const Fn1& phi, double a, const std::vector<double>& xs,
                                    std::vector<double> singular_set, double tol,
                                    const HKOptions& opts) {
    if (xs.empty()) return {};
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] <= xs[i + 1])) throw std::invalid_argument("hk_indefinite: xs must be ascending");
    if (!(a <= xs.front())) throw std::invalid_argument("hk_indefinite: xs must start at or after a");

    std::sort(singular_set.begin(), singular_set.end());
    const double total = std::max(xs.back() - a, 1e-300);

    // Cells touching a singular point carry the Cauchy-stage work and get a
    // fixed budget share; clean cells split the rest by length.
    auto cell_singular = [&](double lo, double hi) {
        for (double s : singular_set)
            if (s >= lo && s <= hi) return true;
        return false;
    };
    int n_sing_cells = 0;
    {
        double prev = a;
        for (double x : xs) {
            if (x > prev && cell_singular(prev, x)) ++n_sing_cells;
            prev = x;
        }
    }

    std::vector<HKResult> out;
    out.reserve(xs.size());
    HKResult run;
    double prev = a;
    for (double x : xs) {
        if (x > prev) {
            double piece_tol;
            if (cell_singular(prev, x))
                piece_tol = 0.8 * tol / n_sing_cells;
            else if (n_sing_cells > 0)
                piece_tol = std::max(0.2 * tol * (x - prev) / total, tol * 1e-3);
            else
                piece_tol = std::max(tol * (x - prev) / total, tol * 1e-3);
            const HKResult piece = hk_integrate(phi, prev, x, singular_set, piece_tol, opts);
            run.value += piece.value;
            run.error_bound += piece.error_bound;
            run.refinements += piece.refinements;
        }
        run.converged = run.error_bound <= tol;
        out.push_back(run);
        prev = x;
    }

    // Additivity cross-check: re-integrate the largest singular-free suffix
    // in one piece and compare with the accumulated differences. (A full-span
    // re-integration would double the cost of the singular tails for no
    // extra information: their stages are shared across the grid already.)
    double from = a;
    for (double s : singular_set)
        if (s >= a && s <= xs.back()) from = std::max(from, s);
    std::size_t i0 = 0;
    while (i0 < xs.size() && xs[i0] < from) ++i0;
    if (i0 + 1 < xs.size()) {
        const double c = xs[i0], d = xs.back();
        if (d > c) {
            const HKResult direct = hk_integrate(phi, c, d, {}, tol, opts);
            const double pieced = out.back().value - out[i0].value;
            if (std::fabs(direct.value - pieced) > 2.0 * tol) {
                std::ostringstream os;
                os << "additivity violated on [" << c << "," << d << "]: piecewise " << pieced
                   << " vs direct " << direct.value << " beyond 2*tol=" << 2.0 * tol;
                throw IntegrationError(os.str());
            }
        }
    }
    return out;
}

Verdict roundtrip_check(const CatalogEntry& entry, double a, double b, RoundtripMode mode,
                        double tol, const HKOptions& opts) {
    if (entry.dim != 1) throw std::invalid_argument("roundtrip_check: needs a 1-d entry");
    if (!entry.has_tag(tags::acgstar_segments))
        throw std::invalid_argument("roundtrip_check: entry '" + entry.name +
                                    "' lacks the acgstar_segments tag");
    if (!(b > a)) throw std::invalid_argument("roundtrip_check: need b > a");

    Segment seg{{a}, {b - a}};
    const Restriction r = restrict_to_segment(entry, seg);
    if (mode == RoundtripMode::oracle && !r.has_deriv)
        throw MissingOracleError("roundtrip_check: oracle mode needs a derivative oracle on '" +
                                 entry.name + "'");

    Fn1 integrand;
    if (mode == RoundtripMode::oracle) {
        integrand = r.deriv;
    } else {
        SamplingSchedule light{1e-3, 0.5, 26, 8, 1e-13};
        Fn1 phi = r.value;
        integrand = [phi, light](double x) { return lower_right_dini(phi, x, light).value; };
    }

    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / 100.0;
    const auto cumulative = hk_indefinite(integrand, 0.0, grid, r.singular_params, 0.75 * tol, opts);

    const ExtReal phi0 = r.value(0.0);
    if (!phi0.finite()) return Verdict::fail("phi(a) not finite");
    double worst = 0.0;
    double worst_x = a;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ExtReal ph = r.value(grid[i]);
        if (!ph.finite()) return Verdict::fail("phi not finite inside [a,b]");
        const double dev = std::fabs(ph.raw() - phi0.raw() - cumulative[i].value);
        if (dev > worst) {
            worst = dev;
            worst_x = a + grid[i] * (b - a);
        }
    }
    std::ostringstream ev;
    ev << "max |phi(x)-phi(a)-int| = " << worst << " at x=" << worst_x << "; endpoint integral "
       << cumulative.back().value;
    return worst <= tol ? Verdict::pass(ev.str()) : Verdict::fail(ev.str());
}

} // namespace nsatk
