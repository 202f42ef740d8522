#include "nsatk/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace nsatk {

const std::vector<std::string>& known_tags() {
    static const std::vector<std::string> all = {
        tags::convex,     tags::locally_lipschitz, tags::lsc,
        tags::continuous_on_domain, tags::regular,  tags::semismooth,
        tags::lsc_natnat, tags::lc_natn,           tags::lacg_nata,
        tags::lacgstar_nata, tags::acgstar_segments,
    };
    return all;
}

// ---------------------------------------------------------------------------
// Domain

Domain Domain::box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("Domain::box: bad bounds");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("Domain::box: lo > hi");
    Domain d;
    d.kind = Kind::box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

Domain Domain::hull(std::vector<Point> vertices) {
    if (vertices.empty()) throw std::invalid_argument("Domain::hull: no vertices");
    Domain d;
    d.kind = Kind::hull;
    d.vertices = std::move(vertices);
    return d;
}

bool Domain::contains(const Point& x, double slack) const {
    switch (kind) {
        case Kind::all: return true;
        case Kind::box:
            for (std::size_t i = 0; i < lo.size(); ++i)
                if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
            return true;
        case Kind::hull: {
            // Bounding-box check; entries with hull domains enforce the exact
            // shape in eval. Adequate for the samplers that consult this.
            for (std::size_t i = 0; i < x.size(); ++i) {
                double mn = vertices[0][i], mx = vertices[0][i];
                for (const auto& v : vertices) {
                    mn = std::min(mn, v[i]);
                    mx = std::max(mx, v[i]);
                }
                if (x[i] < mn - slack || x[i] > mx + slack) return false;
            }
            return true;
        }
    }
    return false;
}

void Domain::sampling_box(int dim, std::vector<double>& lo_out, std::vector<double>& hi_out) const {
    lo_out.assign(static_cast<std::size_t>(dim), -1.0);
    hi_out.assign(static_cast<std::size_t>(dim), 1.0);
    if (kind == Kind::box) {
        lo_out = lo;
        hi_out = hi;
    } else if (kind == Kind::hull) {
        for (int i = 0; i < dim; ++i) {
            double mn = vertices[0][static_cast<std::size_t>(i)], mx = mn;
            for (const auto& v : vertices) {
                mn = std::min(mn, v[static_cast<std::size_t>(i)]);
                mx = std::max(mx, v[static_cast<std::size_t>(i)]);
            }
            lo_out[static_cast<std::size_t>(i)] = mn;
            hi_out[static_cast<std::size_t>(i)] = mx;
        }
    }
}

Point Domain::sample(int dim, Rng& rng, double margin) const {
    std::vector<double> blo, bhi;
    sampling_box(dim, blo, bhi);
    Point x(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double w = bhi[static_cast<std::size_t>(i)] - blo[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(i)] =
            blo[static_cast<std::size_t>(i)] + w * (margin + (1.0 - 2.0 * margin) * rng.uniform01());
    }
    return x;
}

std::vector<Point> Domain::extreme_points(int dim) const {
    if (kind == Kind::hull) return vertices;
    std::vector<double> blo, bhi;
    sampling_box(dim, blo, bhi);
    std::vector<Point> corners;
    const int n = 1 << dim;
    for (int mask = 0; mask < n; ++mask) {
        Point p(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i)
            p[static_cast<std::size_t>(i)] =
                (mask >> i) & 1 ? bhi[static_cast<std::size_t>(i)] : blo[static_cast<std::size_t>(i)];
        corners.push_back(std::move(p));
    }
    return corners;
}

// ---------------------------------------------------------------------------
// Segment / Restriction

Point Segment::at(double t) const {
    Point x(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) x[i] = base[i] + t * dir[i];
    return x;
}

double Segment::dir_norm() const {
    double s = 0.0;
    for (double c : dir) s += c * c;
    return std::sqrt(s);
}

Restriction restrict_to_segment(const CatalogEntry& entry, const Segment& seg) {
    if (seg.dim() != entry.dim)
        throw std::invalid_argument("restrict_to_segment: segment dim " + std::to_string(seg.dim()) +
                                    " != entry dim " + std::to_string(entry.dim));
    if (!(seg.dir_norm() > 0.0)) throw std::invalid_argument("restrict_to_segment: zero direction");

    Restriction r;
    r.seg = seg;
    const CatalogEntry* e = &entry; // entries are immutable and outlive restrictions
    const FnN eval = entry.eval;
    Segment s = seg;
    r.value = [eval, s](double t) { return eval(s.at(t)); };

    // Map declared exceptional points onto segment parameters.
    const double n2 = [&] {
        double acc = 0.0;
        for (double c : seg.dir) acc += c * c;
        return acc;
    }();
    auto param_of = [&](const Point& p) -> std::optional<double> {
        double dot = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) dot += (p[i] - seg.base[i]) * seg.dir[i];
        const double t = dot / n2;
        double dist2 = 0.0;
        const Point on = seg.at(t);
        for (std::size_t i = 0; i < p.size(); ++i) dist2 += (on[i] - p[i]) * (on[i] - p[i]);
        if (dist2 > 1e-18 * (1.0 + n2)) return std::nullopt; // off the segment line
        if (t < -1e-12 || t > 1.0 + 1e-12) return std::nullopt;
        return t;
    };
    for (const auto& p : entry.singular_set)
        if (auto t = param_of(p)) r.singular_params.push_back(*t);
    for (const auto& p : entry.exception_set)
        if (auto t = param_of(p)) r.exception_params.push_back(*t);
    std::sort(r.singular_params.begin(), r.singular_params.end());
    std::sort(r.exception_params.begin(), r.exception_params.end());

    if (entry.radial_oracle) {
        auto oracle = entry.radial_oracle;
        r.deriv = [oracle, s](double t) { return oracle(s.at(t), s.dir); };
        r.has_deriv = true;
    }
    (void)e;
    return r;
}

// ---------------------------------------------------------------------------
// Built-in entries

namespace {

ExtReal inf() { return ExtReal::pos_inf(); }

Point pt(double x) { return Point{x}; }

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Interval subdifferential [lo,hi] at a kink of a 1-d function, singleton
// derivative elsewhere.
SubdiffOracle interval_oracle(std::function<double(double)> deriv, double kink, double klo, double khi) {
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::closed_form;
    o.support = [deriv, kink, klo, khi](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi == kink) return ui >= 0.0 ? khi * ui : klo * ui;
        return deriv(xi) * ui;
    };
    o.member = [deriv, kink, klo, khi](const Point& x, const Point& g) -> Verdict {
        const double xi = x[0], gi = g[0];
        const bool ok = xi == kink ? (gi >= klo - 1e-12 && gi <= khi + 1e-12)
                                   : std::fabs(gi - deriv(xi)) <= 1e-12;
        return ok ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [deriv, kink, klo, khi](const Point& x, int budget, Rng& rng) {
        std::vector<Point> out;
        const double xi = x[0];
        if (xi == kink) {
            out.push_back(pt(klo));
            out.push_back(pt(khi));
            for (int i = 2; i < budget; ++i) out.push_back(pt(rng.uniform(klo, khi)));
        } else {
            out.push_back(pt(deriv(xi)));
        }
        return out;
    };
    return o;
}

// Singleton-gradient subdifferential for 1-d functions smooth off a point
// where the set is empty (support -inf) or the whole line (support +inf).
SubdiffOracle point_oracle(std::function<double(double)> deriv, double bad, bool empty_at_bad) {
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::closed_form;
    o.support = [deriv, bad, empty_at_bad](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi == bad) {
            if (empty_at_bad) return ExtReal::neg_inf();
            return ui == 0.0 ? ExtReal(0.0) : ExtReal::pos_inf();
        }
        return deriv(xi) * ui;
    };
    o.member = [deriv, bad, empty_at_bad](const Point& x, const Point& g) -> Verdict {
        const double xi = x[0];
        if (xi == bad) return empty_at_bad ? Verdict::fail() : Verdict::pass();
        return std::fabs(g[0] - deriv(xi)) <= 1e-12 ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [deriv, bad, empty_at_bad](const Point& x, int, Rng&) {
        std::vector<Point> out;
        if (x[0] != bad) out.push_back(pt(deriv(x[0])));
        else if (!empty_at_bad) out.push_back(pt(0.0));
        return out;
    };
    return o;
}

std::set<std::string> nice_lipschitz_tags() {
    return {tags::convex,  tags::locally_lipschitz, tags::lsc,        tags::continuous_on_domain,
            tags::regular, tags::semismooth,        tags::lsc_natnat, tags::lc_natn,
            tags::lacg_nata, tags::lacgstar_nata,   tags::acgstar_segments};
}

CatalogEntry make_linear(double c) {
    CatalogEntry e;
    e.name = "linear";
    e.dim = 1;
    e.eval = [c](const Point& x) { return ExtReal(c * x[0]); };
    e.domain = Domain::all_space();
    e.tags = nice_lipschitz_tags();
    e.radial_oracle = [c](const Point&, const Point& u) { return ExtReal(c * u[0]); };
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::closed_form;
    o.support = [c](const Point&, const Point& u) { return ExtReal(c * u[0]); };
    o.member = [c](const Point&, const Point& g) {
        return std::fabs(g[0] - c) <= 1e-12 ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [c](const Point&, int, Rng&) { return std::vector<Point>{pt(c)}; };
    e.subdiff = o;
    return e;
}

CatalogEntry make_abs() {
    CatalogEntry e;
    e.name = "abs";
    e.dim = 1;
    e.eval = [](const Point& x) { return ExtReal(std::fabs(x[0])); };
    e.domain = Domain::all_space();
    e.tags = nice_lipschitz_tags();
    e.radial_oracle = [](const Point& x, const Point& u) {
        const double xi = x[0], ui = u[0];
        if (xi > 0.0) return ExtReal(ui);
        if (xi < 0.0) return ExtReal(-ui);
        return ExtReal(std::fabs(ui));
    };
    e.subdiff = interval_oracle([](double x) { return x > 0.0 ? 1.0 : -1.0; }, 0.0, -1.0, 1.0);
    return e;
}

CatalogEntry make_neg_abs() {
    CatalogEntry e;
    e.name = "neg_abs";
    e.dim = 1;
    e.eval = [](const Point& x) { return ExtReal(-std::fabs(x[0])); };
    e.domain = Domain::all_space();
    e.tags = {tags::locally_lipschitz, tags::lsc,      tags::continuous_on_domain,
              tags::semismooth,        tags::lc_natn,  tags::lacg_nata,
              tags::lacgstar_nata,     tags::acgstar_segments};
    e.radial_oracle = [](const Point& x, const Point& u) {
        const double xi = x[0], ui = u[0];
        if (xi > 0.0) return ExtReal(-ui);
        if (xi < 0.0) return ExtReal(ui);
        return ExtReal(-std::fabs(ui));
    };
    // Clarke set [-1,1] at the kink.
    e.subdiff = interval_oracle([](double x) { return x > 0.0 ? -1.0 : 1.0; }, 0.0, -1.0, 1.0);
    return e;
}

CatalogEntry make_sqrt_abs(bool negated) {
    CatalogEntry e;
    e.name = negated ? "neg_sqrt_abs" : "sqrt_abs";
    e.dim = 1;
    const double s = negated ? -1.0 : 1.0;
    e.eval = [s](const Point& x) { return ExtReal(s * std::sqrt(std::fabs(x[0]))); };
    e.domain = Domain::all_space();
    e.tags = {tags::lsc,     tags::continuous_on_domain, tags::lc_natn,
              tags::lacg_nata, tags::lacgstar_nata,      tags::acgstar_segments};
    e.exception_set = {pt(0.0)};
    e.singular_set = {pt(0.0)};
    e.radial_oracle = [s](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi != 0.0) {
            const double d = s * (xi > 0.0 ? 1.0 : -1.0) / (2.0 * std::sqrt(std::fabs(xi)));
            return ExtReal(d * ui);
        }
        if (ui == 0.0) return ExtReal(0.0);
        return s > 0.0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
    };
    auto deriv = [s](double x) { return s * (x > 0.0 ? 1.0 : -1.0) / (2.0 * std::sqrt(std::fabs(x))); };
    // At 0 the slopes blow up: the set is the whole line for sqrt, empty for
    // its negative.
    e.subdiff = point_oracle(deriv, 0.0, negated);
    return e;
}

CatalogEntry make_neg_sqrt_01() {
    CatalogEntry e;
    e.name = "neg_sqrt_01";
    e.dim = 1;
    e.eval = [](const Point& x) -> ExtReal {
        const double xi = x[0];
        if (xi < 0.0 || xi > 1.0) return inf();
        return ExtReal(-std::sqrt(xi));
    };
    e.domain = Domain::interval(0.0, 1.0);
    e.tags = {tags::convex,      tags::lsc,       tags::continuous_on_domain, tags::lsc_natnat,
              tags::lc_natn,     tags::lacg_nata, tags::lacgstar_nata,        tags::acgstar_segments};
    e.exception_set = {pt(0.0)};
    e.singular_set = {pt(0.0)};
    e.radial_oracle = [](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi < 0.0 || xi > 1.0) return ExtReal::neg_inf(); // outside the domain
        if (ui == 0.0) return ExtReal(0.0);
        if (xi == 0.0) return ui > 0.0 ? ExtReal::neg_inf() : ExtReal::pos_inf();
        if (xi == 1.0 && ui > 0.0) return ExtReal::pos_inf();
        return ExtReal(-ui / (2.0 * std::sqrt(xi)));
    };
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::convex_membership;
    o.support = [](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi < 0.0 || xi > 1.0) return ExtReal::neg_inf();
        if (xi == 0.0) return ExtReal::neg_inf(); // empty set: unbounded slope
        if (xi == 1.0) {
            // Set [-1/2, +inf).
            if (ui > 0.0) return ExtReal::pos_inf();
            return ExtReal(-0.5 * ui);
        }
        return ExtReal(-ui / (2.0 * std::sqrt(xi)));
    };
    o.member = [](const Point& x, const Point& g) -> Verdict {
        const double xi = x[0], gi = g[0];
        if (xi < 0.0 || xi > 1.0 || xi == 0.0) return Verdict::fail();
        if (xi == 1.0) return gi >= -0.5 - 1e-12 ? Verdict::pass() : Verdict::fail();
        return std::fabs(gi + 1.0 / (2.0 * std::sqrt(xi))) <= 1e-12 ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [](const Point& x, int, Rng&) {
        std::vector<Point> out;
        const double xi = x[0];
        if (xi > 0.0 && xi < 1.0) out.push_back(pt(-1.0 / (2.0 * std::sqrt(xi))));
        if (xi == 1.0) out.push_back(pt(-0.5));
        return out;
    };
    e.subdiff = o;
    return e;
}

double x_sin_inv_val(double x) { return x == 0.0 ? 0.0 : x * std::sin(1.0 / x); }
double x_sin_inv_deriv(double x) { return std::sin(1.0 / x) - std::cos(1.0 / x) / x; }

CatalogEntry make_x_sin_inv() {
    CatalogEntry e;
    e.name = "x_sin_inv";
    e.dim = 1;
    e.eval = [](const Point& x) { return ExtReal(x_sin_inv_val(x[0])); };
    e.domain = Domain::all_space();
    e.tags = {tags::lsc,     tags::continuous_on_domain, tags::lc_natn,
              tags::lacg_nata, tags::lacgstar_nata,      tags::acgstar_segments};
    e.exception_set = {pt(0.0)};
    e.singular_set = {pt(0.0)};
    e.radial_oracle = [](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi != 0.0) return ExtReal(x_sin_inv_deriv(xi) * ui);
        // Quotients are sin(1/(t*u)) * u: liminf is -|u|.
        return ExtReal(ui == 0.0 ? 0.0 : -std::fabs(ui));
    };
    e.subdiff = point_oracle([](double x) { return x_sin_inv_deriv(x); }, 0.0, false);
    return e;
}

double t2_val(double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / (x * x)); }
double t2_deriv(double x) {
    if (x == 0.0) return 0.0; // differentiable at 0 with derivative 0
    return 2.0 * x * std::sin(1.0 / (x * x)) - (2.0 / x) * std::cos(1.0 / (x * x));
}

CatalogEntry make_t2_sin_inv_t2() {
    CatalogEntry e;
    e.name = "t2_sin_inv_t2";
    e.dim = 1;
    e.eval = [](const Point& x) { return ExtReal(t2_val(x[0])); };
    e.domain = Domain::all_space();
    e.tags = {tags::lsc,     tags::continuous_on_domain, tags::lc_natn,
              tags::lacg_nata, tags::lacgstar_nata,      tags::acgstar_segments};
    e.exception_set = {pt(0.0)};
    e.singular_set = {pt(0.0)};
    e.radial_oracle = [](const Point& x, const Point& u) { return ExtReal(t2_deriv(x[0]) * u[0]); };
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::closed_form;
    o.support = [](const Point& x, const Point& u) { return ExtReal(t2_deriv(x[0]) * u[0]); };
    o.member = [](const Point& x, const Point& g) {
        return std::fabs(g[0] - t2_deriv(x[0])) <= 1e-12 ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [](const Point& x, int, Rng&) { return std::vector<Point>{pt(t2_deriv(x[0]))}; };
    e.subdiff = o;
    return e;
}

// max of three affine pieces on R^2: f(x,y) = max(x, -x+y, -x-y).
const std::vector<Point>& affine_grads() {
    static const std::vector<Point> a = {{1.0, 0.0}, {-1.0, 1.0}, {-1.0, -1.0}};
    return a;
}

CatalogEntry make_max_affine_2d() {
    CatalogEntry e;
    e.name = "max_affine_2d";
    e.dim = 2;
    e.eval = [](const Point& x) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : affine_grads()) best = std::max(best, dot(a, x));
        return ExtReal(best);
    };
    e.domain = Domain::all_space();
    e.tags = nice_lipschitz_tags();
    auto active = [](const Point& x) {
        std::vector<int> act;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : affine_grads()) best = std::max(best, dot(a, x));
        for (int i = 0; i < 3; ++i)
            if (dot(affine_grads()[static_cast<std::size_t>(i)], x) >= best - 1e-12 * (1.0 + std::fabs(best)))
                act.push_back(i);
        return act;
    };
    e.radial_oracle = [active](const Point& x, const Point& u) {
        double best = -std::numeric_limits<double>::infinity();
        for (int i : active(x)) best = std::max(best, dot(affine_grads()[static_cast<std::size_t>(i)], u));
        return ExtReal(best);
    };
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::convex_membership;
    o.support = [active](const Point& x, const Point& u) {
        double best = -std::numeric_limits<double>::infinity();
        for (int i : active(x)) best = std::max(best, dot(affine_grads()[static_cast<std::size_t>(i)], u));
        return ExtReal(best);
    };
    o.member = [active](const Point& x, const Point& g) -> Verdict {
        // Convex-combination solve over the active gradients (at most 3
        // points in the plane).
        const auto act = active(x);
        const auto& A = affine_grads();
        auto close = [](const Point& a, const Point& b) {
            return std::fabs(a[0] - b[0]) + std::fabs(a[1] - b[1]) <= 1e-9;
        };
        if (act.size() == 1) {
            return close(g, A[static_cast<std::size_t>(act[0])]) ? Verdict::pass() : Verdict::fail();
        }
        if (act.size() == 2) {
            const auto& p = A[static_cast<std::size_t>(act[0])];
            const auto& q = A[static_cast<std::size_t>(act[1])];
            // g = p + t(q-p) with t in [0,1]
            const double dx = q[0] - p[0], dy = q[1] - p[1];
            const double len2 = dx * dx + dy * dy;
            const double t = ((g[0] - p[0]) * dx + (g[1] - p[1]) * dy) / len2;
            Point on = {p[0] + t * dx, p[1] + t * dy};
            return (t >= -1e-9 && t <= 1.0 + 1e-9 && close(g, on)) ? Verdict::pass() : Verdict::fail();
        }
        // All three active: barycentric solve.
        const auto& p = A[0];
        const auto& q = A[1];
        const auto& r = A[2];
        const double det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
        const double l1 = ((g[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (g[1] - p[1])) / det;
        const double l2 = ((q[0] - p[0]) * (g[1] - p[1]) - (g[0] - p[0]) * (q[1] - p[1])) / det;
        const double l0 = 1.0 - l1 - l2;
        const bool ok = l0 >= -1e-9 && l1 >= -1e-9 && l2 >= -1e-9;
        return ok ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [active](const Point& x, int budget, Rng& rng) {
        const auto act = active(x);
        std::vector<Point> out;
        for (int i : act) out.push_back(affine_grads()[static_cast<std::size_t>(i)]);
        const auto& A = affine_grads();
        for (int k = static_cast<int>(out.size()); k < budget && act.size() > 1; ++k) {
            // random convex combination of active gradients
            double w0 = rng.uniform01(), w1 = rng.uniform01(), wsum = 0.0;
            std::vector<double> w = {w0, w1, act.size() > 2 ? rng.uniform01() : 0.0};
            for (std::size_t i = 0; i < act.size(); ++i) wsum += w[i];
            Point g = {0.0, 0.0};
            for (std::size_t i = 0; i < act.size(); ++i) {
                g[0] += w[i] / wsum * A[static_cast<std::size_t>(act[i])][0];
                g[1] += w[i] / wsum * A[static_cast<std::size_t>(act[i])][1];
            }
            out.push_back(std::move(g));
        }
        return out;
    };
    e.subdiff = o;
    return e;
}

CatalogEntry make_indicator_01() {
    CatalogEntry e;
    e.name = "indicator_01";
    e.dim = 1;
    e.eval = [](const Point& x) -> ExtReal {
        return (x[0] < 0.0 || x[0] > 1.0) ? inf() : ExtReal(0.0);
    };
    e.domain = Domain::interval(0.0, 1.0);
    e.tags = {tags::convex,      tags::lsc,       tags::continuous_on_domain, tags::lsc_natnat,
              tags::lc_natn,     tags::lacg_nata, tags::lacgstar_nata,        tags::acgstar_segments};
    e.radial_oracle = [](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi < 0.0 || xi > 1.0) return ExtReal::neg_inf();
        if (ui == 0.0) return ExtReal(0.0);
        if ((xi == 1.0 && ui > 0.0) || (xi == 0.0 && ui < 0.0)) return ExtReal::pos_inf();
        return ExtReal(0.0);
    };
    SubdiffOracle o;
    o.kind = SubdiffOracle::Kind::convex_membership;
    o.support = [](const Point& x, const Point& u) -> ExtReal {
        const double xi = x[0], ui = u[0];
        if (xi < 0.0 || xi > 1.0) return ExtReal::neg_inf();
        if (xi == 0.0) return ui < 0.0 ? ExtReal::pos_inf() : ExtReal(0.0); // set (-inf,0]
        if (xi == 1.0) return ui > 0.0 ? ExtReal::pos_inf() : ExtReal(0.0); // set [0,+inf)
        return ExtReal(0.0);
    };
    o.member = [](const Point& x, const Point& g) -> Verdict {
        const double xi = x[0], gi = g[0];
        if (xi < 0.0 || xi > 1.0) return Verdict::fail();
        if (xi == 0.0) return gi <= 1e-12 ? Verdict::pass() : Verdict::fail();
        if (xi == 1.0) return gi >= -1e-12 ? Verdict::pass() : Verdict::fail();
        return std::fabs(gi) <= 1e-12 ? Verdict::pass() : Verdict::fail();
    };
    o.sample = [](const Point& x, int, Rng&) {
        std::vector<Point> out;
        const double xi = x[0];
        if (xi >= 0.0 && xi <= 1.0) out.push_back(pt(0.0));
        if (xi == 0.0) out.push_back(pt(-1.0));
        if (xi == 1.0) out.push_back(pt(1.0));
        return out;
    };
    e.subdiff = o;
    return e;
}

CatalogEntry make_abs_plus_halfx() {
    CatalogEntry e = make_abs();
    e.name = "abs_plus_halfx";
    e.eval = [](const Point& x) { return ExtReal(std::fabs(x[0]) + 0.5 * x[0]); };
    e.radial_oracle = [](const Point& x, const Point& u) {
        const double xi = x[0], ui = u[0];
        if (xi > 0.0) return ExtReal(1.5 * ui);
        if (xi < 0.0) return ExtReal(-0.5 * ui);
        return ExtReal(std::fabs(ui) + 0.5 * ui);
    };
    e.subdiff = interval_oracle([](double x) { return x > 0.0 ? 1.5 : -0.5; }, 0.0, -0.5, 1.5);
    return e;
}

// Derivative integrands used by the gauge-integration demos; value at the
// singular point is irrelevant to the integral and set to 0.
CatalogEntry make_integrand(const std::string& name, std::function<double(double)> f) {
    CatalogEntry e;
    e.name = name;
    e.dim = 1;
    e.eval = [f](const Point& x) { return ExtReal(x[0] == 0.0 ? 0.0 : f(x[0])); };
    e.domain = Domain::all_space();
    e.singular_set = {pt(0.0)};
    return e;
}

CatalogEntry make_neg_sqrt_01_deriv() {
    CatalogEntry e;
    e.name = "neg_sqrt_01_deriv";
    e.dim = 1;
    e.eval = [](const Point& x) -> ExtReal {
        const double xi = x[0];
        if (xi < 0.0 || xi > 1.0) return inf();
        if (xi == 0.0) return ExtReal(0.0);
        return ExtReal(-1.0 / (2.0 * std::sqrt(xi)));
    };
    e.domain = Domain::interval(0.0, 1.0);
    e.singular_set = {pt(0.0)};
    return e;
}

std::map<std::string, CatalogEntry>& registry() {
    static std::map<std::string, CatalogEntry> entries = [] {
        std::map<std::string, CatalogEntry> m;
        auto add = [&m](CatalogEntry e) { m.emplace(e.name, std::move(e)); };
        add(make_linear(3.0));
        add(make_abs());
        add(make_neg_abs());
        add(make_sqrt_abs(false));
        add(make_sqrt_abs(true));
        add(make_neg_sqrt_01());
        add(make_x_sin_inv());
        add(make_t2_sin_inv_t2());
        add(make_max_affine_2d());
        add(make_indicator_01());
        {
            CatalogEntry abs5 = shifted_entry(m.at("abs"), 5.0, "abs_plus5");
            add(std::move(abs5));
        }
        add(make_abs_plus_halfx());
        add(make_integrand("t2_sin_inv_t2_deriv", [](double x) { return t2_deriv(x); }));
        add(make_integrand("x_sin_inv_deriv", [](double x) { return x_sin_inv_deriv(x); }));
        add(make_neg_sqrt_01_deriv());
        return m;
    }();
    return entries;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

CatalogEntry shifted_entry(const CatalogEntry& g, double c, const std::string& name) {
    CatalogEntry e = g;
    e.name = name.empty() ? g.name + (c >= 0.0 ? "_plus" : "_minus") + std::to_string(std::fabs(c)) : name;
    FnN base = g.eval;
    e.eval = [base, c](const Point& x) -> ExtReal {
        const ExtReal v = base(x);
        return v.finite() ? ExtReal(v.raw() + c) : v;
    };
    return e;
}

const CatalogEntry& get_entry(const std::string& name) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto& reg = registry();
    auto it = reg.find(name);
    if (it == reg.end()) {
        std::ostringstream os;
        os << "unknown function '" << name << "'; available:";
        for (const auto& [k, v] : reg) os << ' ' << k;
        throw UnknownEntryError(os.str());
    }
    return it->second;
}

std::vector<std::string> entry_names() {
    std::lock_guard<std::mutex> lock(registry_mutex());
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) names.push_back(k);
    return names;
}

void register_entry(CatalogEntry entry) {
    if (entry.name.empty()) throw std::invalid_argument("register_entry: empty name");
    if (entry.dim < 1) throw std::invalid_argument("register_entry: dim must be >= 1");
    if (!entry.eval) throw std::invalid_argument("register_entry: missing eval");
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[entry.name] = std::move(entry);
}

} // namespace nsatk
