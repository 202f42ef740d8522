#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nsatk/estimate.hpp"
#include "nsatk/ext_real.hpp"

using namespace nsatk;

TEST_CASE("extended reals order and arithmetic") {
    const ExtReal a(1.5), b(-2.0);
    const ExtReal pinf = ExtReal::pos_inf();
    const ExtReal ninf = ExtReal::neg_inf();

    CHECK(ninf < b);
    CHECK(b < a);
    CHECK(a < pinf);
    CHECK(max(a, pinf) == pinf);
    CHECK(min(b, ninf) == ninf);

    CHECK((a + b).raw() == doctest::Approx(-0.5));
    CHECK((pinf + a).is_pos_inf());
    CHECK((ninf + b).is_neg_inf());
    CHECK_THROWS_AS(pinf + ninf, std::domain_error);
    CHECK_THROWS_AS(pinf - pinf, std::domain_error);
    CHECK_THROWS_AS(ExtReal(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(pinf.scaled(0.0), std::domain_error);
    CHECK(pinf.scaled(-3.0).is_neg_inf());
    CHECK(a.divided(2.0).raw() == doctest::Approx(0.75));

    CHECK(pinf.str() == "inf");
    CHECK(ninf.str() == "-inf");
}

TEST_CASE("leq_with_slack handles infinities") {
    CHECK(leq_with_slack(ExtReal::neg_inf(), ExtReal(0.0), 0.0));
    CHECK(leq_with_slack(ExtReal(5.0), ExtReal::pos_inf(), 0.0));
    CHECK_FALSE(leq_with_slack(ExtReal::pos_inf(), ExtReal(1e12), 1.0));
    CHECK(leq_with_slack(ExtReal(1.0), ExtReal(0.9995), 1e-3));
    CHECK_FALSE(leq_with_slack(ExtReal(1.0), ExtReal(0.99), 1e-3));
}

TEST_CASE("limit estimator converges, oscillates and diverges") {
    // convergent tail
    std::vector<ExtReal> conv;
    for (int k = 0; k < 30; ++k) conv.push_back(2.0 + std::pow(0.5, k));
    Estimate e = estimate_limit(conv, ExtremeKind::minimum, 12, 1e-3);
    CHECK(e.converged);
    CHECK(e.value.raw() == doctest::Approx(2.0).epsilon(1e-6));

    // bounded oscillation: extrema settle, gap persists
    std::vector<ExtReal> osc;
    for (int k = 0; k < 400; ++k) osc.push_back(std::sin(std::exp(0.1 * k)));
    const Estimate lo = estimate_limit(osc, ExtremeKind::minimum, 200, 1e-2);
    const Estimate hi = estimate_limit(osc, ExtremeKind::maximum, 200, 1e-2);
    CHECK(lo.converged);
    CHECK(hi.converged);
    CHECK(lo.value.raw() < -0.95);
    CHECK(hi.value.raw() > 0.95);

    // monotone divergence
    std::vector<ExtReal> div;
    for (int k = 0; k < 30; ++k) div.push_back(-std::pow(2.0, k));
    const Estimate d = estimate_limit(div, ExtremeKind::minimum, 12, 1e-3);
    CHECK(d.value.is_neg_inf());
    CHECK(d.converged);

    // the same divergence is seen by the max-side statistic
    const Estimate dmax = estimate_limit(div, ExtremeKind::maximum, 12, 1e-3);
    CHECK(dmax.value.is_neg_inf());
}
