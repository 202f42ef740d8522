#pragma once

#include <vector>

#include "nsatk/catalog.hpp"
#include "nsatk/verdict.hpp"

namespace nsatk {

// Integration result. value is always finite: divergence raises
// IntegrationError instead of returning an infinity.
struct HKResult {
    double value = 0.0;
    double error_bound = 0.0;
    int refinements = 0;
    bool converged = false;
};

struct HKOptions {
    int max_refinements = 60;  // Cauchy stages per singular endpoint
    double eps0_frac = 0.5;    // first gap as a fraction of the piece length
    int max_quad_depth = 52;   // bisection depth of the embedded rule
};

// Integral of phi over [a,b] where phi may be undefined/unbounded at the
// finitely many declared singular points. Clean closed subintervals use
// adaptive bisection with an embedded Gauss-Kronrod rule; toward each
// singular point the integral is evaluated as the limit of integrals over
// nested shrinking gaps (accepted once three consecutive stage increments
// fall below tol/4, with a geometric tail correction when the increments
// show a stable ratio). This coincides with gauge-integral values for
// integrands whose primitives are generalized absolutely continuous in the
// restricted sense on segments, which covers every catalog entry; it is not
// a literal gauge-partition construction.
HKResult hk_integrate(const Fn1& phi, double a, double b, std::vector<double> singular_set,
                      double tol, const HKOptions& opts = {});

// Indefinite integrals Phi(x) = int_a^x phi for an increasing grid xs,
// sharing work across the grid. Additivity against a direct evaluation of
// the full span is enforced within 2*tol.
std::vector<HKResult> hk_indefinite(const Fn1& phi, double a, const std::vector<double>& xs,
                                    std::vector<double> singular_set, double tol,
                                    const HKOptions& opts = {});

enum class RoundtripMode { oracle, estimated };

// Checks phi(x) - phi(a) = int_a^x D+phi on a 101-point grid, with the
// integrand taken from the closed-form derivative oracle or from Dini
// estimates sampled on demand.
Verdict roundtrip_check(const CatalogEntry& entry, double a, double b, RoundtripMode mode,
                        double tol, const HKOptions& opts = {});

} // namespace nsatk
