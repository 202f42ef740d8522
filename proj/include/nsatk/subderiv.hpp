#pragma once

#include "nsatk/catalog.hpp"
#include "nsatk/estimate.hpp"
#include "nsatk/verdict.hpp"

namespace nsatk {

// Probe grids for the two-level limit estimators. Approach points are
// x = xbar + s*v with s from the approach schedule and v from a finite
// direction set; inner one-sided limits at an approach point use a schedule
// zoomed to the approach distance so the two limit scales stay separated.
struct DirectionalProbe {
    std::vector<double> alphas = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    std::vector<double> dir_perturb = {0.0, 1e-1, 1e-2, 1e-3};
    std::vector<Point> perturb_dirs; // defaults to +/- coordinate axes
    SamplingSchedule approach{1e-2, 0.5, 26, 12, 1e-14};
    struct Zoom {
        double lead = 0.1;       // first inner step as a fraction of the approach distance
        double rho = 0.5;
        int steps = 34;
        int tail = 8;
        double floor_rel = 1e-11; // inner floor relative to the approach distance
    } zoom;
    double rel_tol = tol::sampling;
    bool alpha_refine_check = true; // re-check the alpha-grid minimum on a 2x grid
                                    // for entries not tagged locally Lipschitz

    std::vector<Point> directions_for(int dim) const;
};

// One-sided quotient limits along the ray x + t*u.
Estimate radial(const CatalogEntry& f, const Point& x, const Point& u,
                const SamplingSchedule& sched = {}, double rel_tol = tol::sampling);
Estimate upper_radial(const CatalogEntry& f, const Point& x, const Point& u,
                      const SamplingSchedule& sched = {}, double rel_tol = tol::sampling);

// liminf over t down to 0 and directions converging to u.
Estimate directional(const CatalogEntry& f, const Point& x, const Point& u,
                     const DirectionalProbe& probe = {});

// limsup of forward quotients over base points approaching xbar with values
// approaching f(xbar).
Estimate clarke(const CatalogEntry& f, const Point& x, const Point& u,
                const DirectionalProbe& probe = {});

// sup over shrinking direction balls of the limsup of the ball-infimum
// quotient; heuristic on the declared finite probe grid.
Estimate clarke_rockafellar(const CatalogEntry& f, const Point& x, const Point& u,
                            const DirectionalProbe& probe = {});

enum class NaturalMode { from_radial, from_subdiff };

// Upper semicontinuous regularizations of the radial subderivative:
// inf over alpha >= 0 of the limsup of f'(x; u + alpha(xbar - x)) over
// approach points, with the directional (natural_dir) or omnidirectional
// (natural_full) approach set. The inner value is a radial-quotient
// estimate or the subdifferential support function, per mode.
Estimate natural_dir(const CatalogEntry& f, const Point& x, const Point& u,
                     const DirectionalProbe& probe = {}, NaturalMode mode = NaturalMode::from_radial);
Estimate natural_full(const CatalogEntry& f, const Point& x, const Point& u,
                      const DirectionalProbe& probe = {}, NaturalMode mode = NaturalMode::from_radial);

// All subderivative estimates at one probe, checked against the partial
// order they must satisfy; for locally Lipschitz entries the chain collapses
// and the equalities are asserted too.
struct DiagramValues {
    Estimate radial, upper_radial, directional, clarke, clarke_rockafellar, natural_directional,
        natural_full;
};
DiagramValues diagram_values(const CatalogEntry& f, const Point& x, const Point& u,
                             const DirectionalProbe& probe = {});
Verdict diagram_check(const CatalogEntry& f, const Point& x, const Point& u,
                      const DirectionalProbe& probe = {}, double slack = tol::sampling);

} // namespace nsatk
