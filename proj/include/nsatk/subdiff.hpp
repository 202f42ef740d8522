#pragma once

#include <map>

#include "nsatk/catalog.hpp"
#include "nsatk/subderiv.hpp"

namespace nsatk {

// Support function of the subdifferential set at x in direction u;
// -inf when the set is empty.
ExtReal support_value(const SubdiffOracle& oracle, const Point& x, const Point& u);

// Membership test for the subdifferential of convex analysis:
// <xstar, y-x> + f(x) <= f(y) for all y, sampled over probe_budget points
// including the domain's extreme points. Verified means no violation beyond
// 1e-12 at the sampled resolution; budgets below 8 are inconclusive.
Verdict mr_member(const CatalogEntry& f, const Point& x, const Point& xstar, int probe_budget,
                  Rng& rng);

// Finite-difference gradients at random nearby differentiability points:
// an inner approximation of the convex hull of limiting gradients.
// Requires the locally_lipschitz tag and dim <= 3.
std::vector<Point> clarke_sample(const CatalogEntry& f, const Point& x, int budget, double radius,
                                 Rng& rng);

// Builds a subdifferential oracle whose support function is the maximum of
// <g,u> over clarke_sample gradients (an inner approximation).
SubdiffOracle make_gradient_sample_oracle(const CatalogEntry& f, int budget, double radius,
                                          std::uint64_t seed);

// Upper semismoothness at (x,u): the directional regularization equals the
// radial subderivative. The strict variant uses the full regularization.
Verdict upper_semismooth_check(const CatalogEntry& f, const Point& x, const Point& u,
                               const DirectionalProbe& probe = {}, double tol = tol::sampling);
Verdict strictly_upper_semismooth_check(const CatalogEntry& f, const Point& x, const Point& u,
                                        const DirectionalProbe& probe = {},
                                        double tol = tol::sampling);

// Per-class membership checks along segments. Sampled parameters skip a
// small window around declared exceptional points for the classes that
// permit exceptions; the strict class skips nothing.
struct ClassCheckOptions {
    int grid = 41;
    int random = 20;
    double exclusion_window = 0.02; // parameter-space radius around declared exceptions
    DirectionalProbe probe;
    double tol = tol::sampling;
};
std::map<std::string, Verdict> class_check(const CatalogEntry& entry,
                                           const std::vector<Segment>& segments,
                                           const ClassCheckOptions& opts, Rng& rng);

// Coordinate segments spanning the entry's domain box.
std::vector<Segment> default_segments(const CatalogEntry& entry);

} // namespace nsatk
