#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nsatk/catalog.hpp"
#include "nsatk/dini.hpp"

using namespace nsatk;

namespace {

const double kPi = 3.141592653589793;

// Dense schedule for oscillatory probes: the default 40-step dyadic grid
// samples too few phases of sin(1/t) to pin its limit points.
SamplingSchedule dense_schedule() { return {0.5, 0.97, 800, 300, 1e-14}; }

Fn1 t_sin_inv() {
    return [](double t) { return ExtReal(t == 0.0 ? 0.0 : t * std::sin(1.0 / t)); };
}

} // namespace

TEST_CASE("lower Dini derivative examples") {
    // |t| at 0: quotient identically 1
    Fn1 abs_t = [](double t) { return ExtReal(std::fabs(t)); };
    const Estimate e1 = lower_right_dini(abs_t, 0.0);
    CHECK(e1.converged);
    CHECK(e1.value.raw() == doctest::Approx(1.0).epsilon(1e-9));

    // t sin(1/t) at 0: oracle = inf of sin over a schedule hitting the
    // troughs t = 2/((4k+3)pi), where sin(1/t) = -1 exactly.
    double oracle = 1e300;
    for (int k = 0; k < 64; ++k) {
        const double t = 2.0 / ((4.0 * k + 3.0) * kPi);
        oracle = std::min(oracle, std::sin(1.0 / t));
    }
    CHECK(oracle == doctest::Approx(-1.0).epsilon(1e-12));
    const Estimate e2 = lower_right_dini(t_sin_inv(), 0.0, dense_schedule());
    CHECK(e2.value.raw() == doctest::Approx(-1.0).epsilon(2e-3));
    CHECK(e2.converged);

    // -sqrt(t) at 0: the closed-form quotient -1/sqrt(t) diverges.
    Fn1 neg_sqrt = [](double t) {
        return t < 0.0 ? ExtReal::pos_inf() : ExtReal(-std::sqrt(t));
    };
    const double q_last = -1.0 / std::sqrt(1e-2 * std::pow(0.5, 39)); // oracle quotient
    CHECK(q_last < -1e6);
    const Estimate e3 = lower_right_dini(neg_sqrt, 0.0);
    CHECK(e3.value.is_neg_inf());
    CHECK(e3.converged);

    // outside the effective domain the derivative is -inf by convention
    const Estimate e4 = lower_right_dini(neg_sqrt, -1.0);
    CHECK(e4.value.is_neg_inf());
}

TEST_CASE("upper Dini derivative examples") {
    // oracle: sup of sin over the crest schedule t = 2/((4k+1)pi)
    double oracle = -1e300;
    for (int k = 0; k < 64; ++k) {
        const double t = 2.0 / ((4.0 * k + 1.0) * kPi);
        oracle = std::max(oracle, std::sin(1.0 / t));
    }
    CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
    const Estimate e1 = upper_right_dini(t_sin_inv(), 0.0, dense_schedule());
    CHECK(e1.value.raw() == doctest::Approx(1.0).epsilon(2e-3));

    Fn1 abs_t = [](double t) { return ExtReal(std::fabs(t)); };
    CHECK(upper_right_dini(abs_t, 0.0).value.raw() == doctest::Approx(1.0).epsilon(1e-9));

    Fn1 constant = [](double) { return ExtReal(3.25); };
    const Estimate e3 = upper_right_dini(constant, 0.8);
    CHECK(e3.value.raw() == doctest::Approx(0.0));
    CHECK(e3.converged);
}

TEST_CASE("lower estimate never exceeds upper on the shared sample set") {
    const auto& entry = get_entry("x_sin_inv");
    const Restriction r = restrict_to_segment(entry, {{-0.3}, {1.3}});
    for (double t : {0.0, 0.1, 0.2305, 0.5, 0.77, 0.9999}) {
        const auto [lo, hi] = dini_pair(r.value, t);
        CHECK(lo.value <= hi.value);
    }
}

TEST_CASE("right differentiability verdicts") {
    Fn1 sq = [](double t) { return ExtReal(t * t); };
    const Verdict v1 = is_right_differentiable(sq, 0.5);
    CHECK(v1.verified());
    CHECK(v1.evidence.find("1") != std::string::npos); // derivative ~ 1.0

    const Verdict v2 = is_right_differentiable(t_sin_inv(), 0.0, 1e-3, dense_schedule());
    CHECK(v2.falsified());

    Fn1 abs_t = [](double t) { return ExtReal(std::fabs(t)); };
    const Verdict v3 = is_right_differentiable(abs_t, 0.0);
    CHECK(v3.verified());
}

TEST_CASE("estimates scale bit-for-bit under dyadic scaling") {
    Fn1 base = [](double t) { return ExtReal(t * t * t + std::sin(t)); };
    for (double lambda : {0.5, 2.0, 8.0}) {
        Fn1 scaled = [lambda](double t) { return ExtReal(lambda * (t * t * t + std::sin(t))); };
        const Estimate a = lower_right_dini(base, 0.2);
        const Estimate b = lower_right_dini(scaled, 0.2);
        CHECK(b.value.raw() == lambda * a.value.raw()); // exact
        const Estimate au = upper_right_dini(base, 0.2);
        const Estimate bu = upper_right_dini(scaled, 0.2);
        CHECK(bu.value.raw() == lambda * au.value.raw());
    }
}

TEST_CASE("estimates agree with derivative oracles where smooth") {
    struct ProbeSet {
        const char* name;
        std::vector<double> params;
    };
    const ProbeSet probes[] = {
        {"abs", {-0.7, -0.1, 0.3, 0.9}},
        {"linear", {-0.5, 0.0, 1.2}},
        {"neg_sqrt_01", {0.1, 0.37, 0.81}},
        {"x_sin_inv", {0.21, 0.4, 0.95}},
        {"t2_sin_inv_t2", {0.33, 0.62, 1.0}},
        {"sqrt_abs", {0.25, 0.64, -0.49}},
    };
    for (const auto& ps : probes) {
        const auto& e = get_entry(ps.name);
        const Restriction r = restrict_to_segment(e, {{-2.0}, {4.0}});
        REQUIRE(r.has_deriv);
        for (double x : ps.params) {
            const double t = (x + 2.0) / 4.0; // segment parameter of the point x
            const double oracle = r.deriv(t).raw();
            const Estimate est = lower_right_dini(r.value, t);
            INFO(ps.name << " at x=" << x);
            CHECK(std::fabs(est.value.raw() - oracle) <= 1e-6 * (1.0 + std::fabs(oracle)));
        }
    }
}

TEST_CASE("oscillation lower bounds") {
    Fn1 ident = [](double t) { return ExtReal(t); };
    CHECK(oscillation_lower_bound(ident, 0.0, 1.0, 101) == doctest::Approx(1.0));

    Fn1 constant = [](double) { return ExtReal(4.0); };
    CHECK(oscillation_lower_bound(constant, 0.0, 1.0, 101) == doctest::Approx(0.0));

    // t sin(1/t) on [0,1]: dense-grid oracle. sup = sin(1) at t=1, inf at the
    // interior critical point near t=0.2225.
    double oracle = 0.0;
    {
        double lo = 1e300, hi = -1e300;
        const int n = 2000001;
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            const double v = t == 0.0 ? 0.0 : t * std::sin(1.0 / t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        oracle = hi - lo;
    }
    CHECK(oracle == doctest::Approx(1.05870461).epsilon(1e-6));
    const double est = oscillation_lower_bound(t_sin_inv(), 0.0, 1.0, 100000);
    CHECK(est <= oracle + 1e-12); // a grid sup never exceeds a denser one
    CHECK(est == doctest::Approx(oracle).epsilon(1e-4));

    // monotone under nested grid refinement
    const double o11 = oscillation_lower_bound(t_sin_inv(), 0.0, 1.0, 11);
    const double o21 = oscillation_lower_bound(t_sin_inv(), 0.0, 1.0, 21);
    const double o41 = oscillation_lower_bound(t_sin_inv(), 0.0, 1.0, 41);
    CHECK(o11 <= o21 + 1e-15);
    CHECK(o21 <= o41 + 1e-15);

    CHECK_THROWS_AS(oscillation_lower_bound(ident, 1.0, 0.0, 10), std::invalid_argument);
}
