#pragma once

#include "nsatk/catalog.hpp"
#include "nsatk/estimate.hpp"
#include "nsatk/verdict.hpp"

namespace nsatk {

// Lower/upper right-hand Dini derivative estimates of a 1-d function at t:
// liminf/limsup of (phi(t+h)-phi(t))/h over the schedule's tail window.
// phi(t) = +inf yields -inf immediately (outside the effective domain).
Estimate lower_right_dini(const Fn1& phi, double t, const SamplingSchedule& sched = {},
                          double rel_tol = tol::sampling);
Estimate upper_right_dini(const Fn1& phi, double t, const SamplingSchedule& sched = {},
                          double rel_tol = tol::sampling);

// Both estimates computed on one shared sample set, so lower <= upper holds
// exactly.
std::pair<Estimate, Estimate> dini_pair(const Fn1& phi, double t, const SamplingSchedule& sched = {},
                                        double rel_tol = tol::sampling);

// Right-differentiability: both Dini estimates converged, finite and within
// tol of each other. Falsified on a gap beyond 3*tol or an infinite value.
Verdict is_right_differentiable(const Fn1& phi, double t, double tol = tol::sampling,
                                const SamplingSchedule& sched = {});

// Grid lower bound on the oscillation sup{|phi(y)-phi(x)| : c<=x<=y<=d}.
double oscillation_lower_bound(const Fn1& phi, double c, double d, int grid_size);

} // namespace nsatk
