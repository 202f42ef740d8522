#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nsatk/catalog.hpp"
#include "nsatk/hk.hpp"

using namespace nsatk;

namespace {

Fn1 two_t() {
    return [](double t) { return ExtReal(2.0 * t); };
}

Fn1 t2_deriv() {
    return [](double t) {
        if (t == 0.0) return ExtReal(0.0);
        return ExtReal(2.0 * t * std::sin(1.0 / (t * t)) - (2.0 / t) * std::cos(1.0 / (t * t)));
    };
}

Fn1 half_inv_sqrt() {
    return [](double t) { return ExtReal(t <= 0.0 ? 0.0 : -1.0 / (2.0 * std::sqrt(t))); };
}

// Independent reference for the conditionally convergent tail of
// sin(1/t) - cos(1/t)/t via the substitution y = 1/t: the integral over
// [1, inf) of sin(y)/y^2 - cos(y)/y, evaluated with composite Simpson
// partials at pi-spaced cut points and Euler averaging of the tail.
double substitution_oracle() {
    const double pi = 3.141592653589793;
    auto g = [](double y) { return std::sin(y) / (y * y) - std::cos(y) / y; };
    auto simpson = [&](double a, double b) {
        const int n = 64;
        const double h = (b - a) / n;
        double s = g(a) + g(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
        return s * h / 3.0;
    };
    std::vector<double> partials;
    double acc = 0.0;
    double y = 1.0;
    for (int k = 0; k < 160; ++k) {
        acc += simpson(y, y + pi);
        partials.push_back(acc);
        y += pi;
    }
    // three Euler-averaging passes on the alternating tail
    for (int pass = 0; pass < 3; ++pass)
        for (std::size_t i = partials.size() - 1; i > 0; --i)
            partials[i] = 0.5 * (partials[i] + partials[i - 1]);
    return partials.back();
}

} // namespace

TEST_CASE("clean integrals") {
    const HKResult r = hk_integrate(two_t(), 0.0, 1.0, {}, 1e-9);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("derivative of t^2 sin(1/t^2) integrates to sin(1)") {
    // fundamental-theorem oracle from the primitive
    auto primitive = [](double t) { return t == 0.0 ? 0.0 : t * t * std::sin(1.0 / (t * t)); };
    const double oracle = primitive(1.0) - primitive(0.0);
    CHECK(oracle == doctest::Approx(std::sin(1.0)).epsilon(1e-15));

    const HKResult r = hk_integrate(t2_deriv(), 0.0, 1.0, {0.0}, 1e-6);
    CHECK(std::fabs(r.value - oracle) <= 1e-6);
    CHECK(r.converged);
    CHECK(r.refinements > 0);
}

TEST_CASE("unbounded monotone tail -1/(2 sqrt t)") {
    // improper-Riemann oracle: the primitive -sqrt(t) gives -1 over [0,1]
    const double oracle = -std::sqrt(1.0) - (-std::sqrt(1e-16)); // limit of shrinking cutoffs
    CHECK(oracle == doctest::Approx(-1.0).epsilon(1e-7));
    const HKResult r = hk_integrate(half_inv_sqrt(), 0.0, 1.0, {0.0}, 1e-6);
    CHECK(std::fabs(r.value - (-1.0)) <= 1e-6);
    CHECK(r.converged);
}

TEST_CASE("indefinite integrals share work and stay additive") {
    Fn1 one = [](double) { return ExtReal(1.0); };
    auto rs = hk_indefinite(one, 0.0, {0.0, 0.5, 1.0}, {}, 1e-9);
    REQUIRE(rs.size() == 3);
    CHECK(rs[0].value == doctest::Approx(0.0));
    CHECK(rs[1].value == doctest::Approx(0.5));
    CHECK(rs[2].value == doctest::Approx(1.0));

    auto rs2 = hk_indefinite(two_t(), 0.0, {0.5, 1.0}, {}, 1e-9);
    CHECK(rs2[0].value == doctest::Approx(0.25));
    CHECK(rs2[1].value == doctest::Approx(1.0));

    auto rs3 = hk_indefinite(half_inv_sqrt(), 0.0, {0.25, 1.0}, {0.0}, 1e-6);
    CHECK(rs3[0].value == doctest::Approx(-0.5).epsilon(1e-5));
    CHECK(rs3[1].value == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("linearity on singularity-free pairs") {
    Fn1 psi = [](double t) { return ExtReal(std::cos(3.0 * t)); };
    const double a = 2.5, b = -1.25;
    Fn1 combo = [a, b, psi](double t) {
        return ExtReal(a * 2.0 * t + b * psi(t).raw());
    };
    const double lhs = hk_integrate(combo, 0.0, 1.0, {}, 1e-9).value;
    const double rhs = a * hk_integrate(two_t(), 0.0, 1.0, {}, 1e-9).value +
                       b * hk_integrate(psi, 0.0, 1.0, {}, 1e-9).value;
    CHECK(std::fabs(lhs - rhs) <= 2e-9);
}

TEST_CASE("halving the tolerance never loses accuracy") {
    const double oracle = -1.0;
    double prev_err = 1e300;
    for (double tol : {1e-3, 5e-4, 2.5e-4, 1e-5, 1e-6}) {
        const HKResult r = hk_integrate(half_inv_sqrt(), 0.0, 1.0, {0.0}, tol);
        const double err = std::fabs(r.value - oracle);
        CHECK(err <= prev_err + 1e-15);
        prev_err = err;
    }
}

TEST_CASE("roundtrip through the derivative oracle") {
    const Verdict t2 = roundtrip_check(get_entry("t2_sin_inv_t2"), 0.0, 1.0,
                                       RoundtripMode::oracle, 1e-6);
    INFO(t2.evidence);
    CHECK(t2.verified());
    CHECK(t2.evidence.find("0.84147") != std::string::npos); // endpoint sin(1)

    const Verdict ns = roundtrip_check(get_entry("neg_sqrt_01"), 0.0, 1.0,
                                       RoundtripMode::oracle, 1e-6);
    INFO(ns.evidence);
    CHECK(ns.verified());
    CHECK(ns.evidence.find("-0.99999") != std::string::npos); // endpoint -1

    const double ref = substitution_oracle();
    CHECK(ref == doctest::Approx(std::sin(1.0)).epsilon(2e-4));
    const Verdict xs = roundtrip_check(get_entry("x_sin_inv"), 0.0, 1.0,
                                       RoundtripMode::oracle, 1e-3);
    INFO(xs.evidence);
    CHECK(xs.verified());
}

TEST_CASE("roundtrip from sampled Dini estimates") {
    const Verdict v = roundtrip_check(get_entry("abs"), -1.0, 1.0, RoundtripMode::estimated, 1e-3);
    INFO(v.evidence);
    CHECK(v.verified());
}

TEST_CASE("error paths") {
    // NaN off the declared singular set
    Fn1 bad = [](double t) { return ExtReal(std::sqrt(t - 0.5)); }; // NaN for t < 0.5
    CHECK_THROWS_AS(hk_integrate(bad, 0.0, 1.0, {}, 1e-6), EvalError);

    // non-integrable tail: 1/t toward 0
    Fn1 inv = [](double t) { return ExtReal(t == 0.0 ? 0.0 : 1.0 / t); };
    CHECK_THROWS_AS(hk_integrate(inv, 0.0, 1.0, {0.0}, 1e-6), IntegrationError);

    // infinite integrand off the declared singular set
    Fn1 infeval = [](double t) {
        return t > 0.4 && t < 0.6 ? ExtReal::pos_inf() : ExtReal(0.0);
    };
    CHECK_THROWS_AS(hk_integrate(infeval, 0.0, 1.0, {}, 1e-6), IntegrationError);

    // oracle mode requires the derivative oracle
    CHECK_THROWS_AS(roundtrip_check(get_entry("t2_sin_inv_t2_deriv"), 0.0, 1.0,
                                    RoundtripMode::oracle, 1e-3),
                    std::invalid_argument); // integrand entries lack the segment tag
}
