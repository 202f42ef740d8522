#pragma once

#include "nsatk/catalog.hpp"
#include "nsatk/hk.hpp"
#include "nsatk/subderiv.hpp"

namespace nsatk {

// Monotonicity test cases, matched to the regularity of the function:
// lower semicontinuous with the lower Dini derivative nonpositive
// everywhere on [a,b); continuous with the upper Dini derivative
// nonpositive off a countable set; generalized absolutely continuous with
// the lower Dini derivative nonpositive off a null set.
enum class MonotoneCase { lsc_everywhere, continuous_nearly, acg_almost };

// Checks the case's Dini premise at grid points (off the declared
// exceptions for the nearly/almost cases), then the consequence
// phi(d) <= phi(c) + tol for all grid pairs c < d. A premise failure makes
// the test inapplicable (inconclusive); a consequence failure with the
// premise holding falsifies.
Verdict monotone_test(const Fn1& phi, double a, double b, MonotoneCase mode,
                      const std::vector<double>& exception_set, int grid, double tol,
                      const SamplingSchedule& sched = {});
// Tag-checked wrapper on a 1-d entry.
Verdict monotone_test(const CatalogEntry& entry, double a, double b, MonotoneCase mode, int grid,
                      double tol, const SamplingSchedule& sched = {});

enum class DeterminationMode { lsc, continuous, acg, continuous_dense };

struct DeterminationProbe {
    int grid_points = 21;    // per axis
    int random_points = 20;
    int fan_random = 16;     // random directions added to the +/- axis fan
    int segments = 6;
    int segment_grid = 81;
    double exclusion_window = 0.02;
    double deviation_tol = 1e-6;
    double support_slack = 1e-9;  // oracle-exact stage-1 comparisons
    DirectionalProbe subderiv_probe;
    int dense_levels = 6; // shrinking perturbation levels in continuous_dense mode
};

struct DeterminationReport {
    int segments_checked = 0;
    struct Violation {
        Point x;
        Point u;
        ExtReal f_value;
        ExtReal g_value;
        std::string stage; // "support" or "segment"
    };
    std::vector<Violation> inclusion_violations;
    double offset = 0.0;
    double max_deviation = 0.0;
    Verdict verdict;
};

// Checks the subdifferential-determination implication for a pair (f, g) on
// an open convex box Omega: stage 1 compares support functions over a
// direction fan at probe points (a necessary condition for set inclusion,
// exact for the catalog's convex-valued oracles in the hull sense at fan
// resolution); stage 2 checks the derived segment inequality
// f-quotient-limit <= g-radial off g's exceptions; stage 3 estimates the
// constant offset as the median of f-g and reports the maximum deviation.
DeterminationReport determination_check(const CatalogEntry& f, const CatalogEntry& g,
                                        const Domain& omega, DeterminationMode mode,
                                        const DeterminationProbe& probe, Rng& rng);

// Segment regularity required of the strictly-upper-semismooth class:
// locally bounded two-sided slopes at interior points, into-segment upper
// slopes bounded near the endpoints, and one-sided value continuity at the
// endpoints.
struct RadialLipschitzOptions {
    int interior_points = 19;
    int scales = 12;
    int endpoint_scales = 22;
    double cont_tol = 1e-3;
};
Verdict radial_lipschitz_check(const CatalogEntry& g, const Segment& seg,
                               const RadialLipschitzOptions& opts = {});

enum class ReconstructMode { oracle, from_subdiff, from_radial };

struct ReconstructResult {
    std::vector<double> params;  // segment parameters s
    std::vector<double> values;  // r(s) ~ g(base + s*dir) - g(base)
    Verdict verdict;
};

// Recovers g along a segment as the indefinite gauge integral of the
// directional regularization of its radial subderivative, with the
// integrand from the closed-form oracle, the subdifferential support
// route, or pure radial sampling.
ReconstructResult reconstruct_along(const CatalogEntry& g, const Segment& seg, ReconstructMode mode,
                                    int grid, double tol, const DirectionalProbe& probe = {});

} // namespace nsatk
