#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsatk/errors.hpp"
#include "nsatk/ext_real.hpp"
#include "nsatk/rng.hpp"
#include "nsatk/verdict.hpp"

namespace nsatk {

using Point = std::vector<double>;
using Fn1 = std::function<ExtReal(double)>;
using FnN = std::function<ExtReal(const Point&)>;

// Class labels used on catalog entries. The last five mark, along segments
// of the domain: strict upper semismoothness everywhere, upper
// semismoothness off a countable set (continuous restrictions), upper
// semismoothness off a null set in the restricted/general absolutely
// continuous senses, and restricted generalized absolute continuity itself.
namespace tags {
inline constexpr const char* convex = "convex";
inline constexpr const char* locally_lipschitz = "locally_lipschitz";
inline constexpr const char* lsc = "lsc";
inline constexpr const char* continuous_on_domain = "continuous_on_domain";
inline constexpr const char* regular = "regular";
inline constexpr const char* semismooth = "semismooth";
inline constexpr const char* lsc_natnat = "lsc_natnat";       // strictly upper semismooth class
inline constexpr const char* lc_natn = "lc_natn";             // nearly upper semismooth class
inline constexpr const char* lacg_nata = "lacg_nata";         // almost upper semismooth class
inline constexpr const char* lacgstar_nata = "lacgstar_nata"; // almost u.s., restricted-AC segments
inline constexpr const char* acgstar_segments = "acgstar_segments";
} // namespace tags

const std::vector<std::string>& known_tags();

// Effective domains are always convex: a box, a convex hull of points, or
// all of R^n.
struct Domain {
    enum class Kind { all, box, hull };
    Kind kind = Kind::all;
    std::vector<double> lo, hi; // box bounds per axis
    std::vector<Point> vertices; // hull

    static Domain all_space() { return {}; }
    static Domain box(std::vector<double> lo, std::vector<double> hi);
    static Domain interval(double a, double b) { return box({a}, {b}); }
    static Domain hull(std::vector<Point> vertices);

    bool contains(const Point& x, double slack = 0.0) const;
    // Box used by samplers; all-space falls back to [-1,1]^dim.
    void sampling_box(int dim, std::vector<double>& lo_out, std::vector<double>& hi_out) const;
    Point sample(int dim, Rng& rng, double margin = 0.0) const;
    std::vector<Point> extreme_points(int dim) const;
};

// Line segment x_t = base + t*dir, t in [0,1]. dir must be nonzero.
struct Segment {
    Point base;
    Point dir;

    int dim() const { return static_cast<int>(base.size()); }
    Point at(double t) const;
    double dir_norm() const;
};

// Queryable subdifferential map x -> set. support computes the supremum of
// <g,u> over the set (so -inf on an empty set); member and sample are
// optional capabilities.
struct SubdiffOracle {
    enum class Kind { closed_form, convex_membership, gradient_sample };
    Kind kind = Kind::closed_form;
    std::function<ExtReal(const Point& x, const Point& u)> support;
    std::function<Verdict(const Point& x, const Point& xstar)> member;           // may be empty
    std::function<std::vector<Point>(const Point& x, int budget, Rng& rng)> sample; // may be empty
};

// A named function on R^dim with metadata. eval returns +inf exactly outside
// the effective domain, never -inf. Singular points are where 1-d
// restrictions fail local absolute integrability; exception points are
// where upper semismoothness is declared to fail. Both are finite lists:
// claims are verified relative to declared exceptional points. Entries are
// immutable after registration and eval is safe to call concurrently.
struct CatalogEntry {
    std::string name;
    int dim = 1;
    FnN eval;
    Domain domain;
    std::set<std::string> tags;
    std::vector<Point> singular_set;
    std::vector<Point> exception_set;
    // Exact radial subderivative (x,u) -> liminf of forward quotients; empty
    // when no closed form is available.
    std::function<ExtReal(const Point& x, const Point& u)> radial_oracle;
    std::optional<SubdiffOracle> subdiff;

    bool has_tag(std::string_view t) const { return tags.count(std::string(t)) != 0; }
    ExtReal operator()(const Point& x) const { return eval(x); }
    ExtReal value_at(double x) const { return eval(Point{x}); } // dim-1 convenience
};

// One-dimensional restriction phi(t) = f(base + t*dir) with singular and
// exception parameters mapped into [0,1] and the entry's derivative oracle
// carried along as t -> D+phi(t).
struct Restriction {
    Fn1 value;
    std::vector<double> singular_params;
    std::vector<double> exception_params;
    Fn1 deriv; // empty when the entry has no radial oracle
    bool has_deriv = false;
    Segment seg;
};

const CatalogEntry& get_entry(const std::string& name); // throws UnknownEntryError listing names
std::vector<std::string> entry_names();
void register_entry(CatalogEntry entry);

Restriction restrict_to_segment(const CatalogEntry& entry, const Segment& seg);

// Entry equal to g + c with the same subdifferential and oracles.
CatalogEntry shifted_entry(const CatalogEntry& g, double c, const std::string& name = {});

// Declarative function-definition files; see README for the format.
// Parse errors cite file:line.
std::vector<CatalogEntry> parse_function_file(std::istream& in, const std::string& filename);
void load_function_file(const std::string& path);

} // namespace nsatk
