#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "nsatk/catalog.hpp"

using namespace nsatk;

TEST_CASE("catalog lookups and tags") {
    const auto& neg_abs = get_entry("neg_abs");
    CHECK(neg_abs.dim == 1);
    CHECK(neg_abs.has_tag(tags::locally_lipschitz));
    CHECK(neg_abs.has_tag(tags::semismooth));
    CHECK(neg_abs.has_tag(tags::lc_natn));
    CHECK_FALSE(neg_abs.has_tag(tags::lsc_natnat));

    const auto& xs = get_entry("x_sin_inv");
    CHECK(xs.has_tag(tags::continuous_on_domain));
    CHECK(xs.has_tag(tags::lc_natn));
    REQUIRE(xs.exception_set.size() == 1);
    CHECK(xs.exception_set[0][0] == 0.0);

    CHECK_THROWS_AS(get_entry("no_such_fn"), UnknownEntryError);
    try {
        get_entry("no_such_fn");
    } catch (const UnknownEntryError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("abs") != std::string::npos); // lists available names
    }
}

TEST_CASE("restriction to segments") {
    const auto& abs_e = get_entry("abs");
    const Restriction r = restrict_to_segment(abs_e, {{-1.0}, {2.0}});
    for (double t : {0.0, 0.25, 0.5, 0.8, 1.0})
        CHECK(r.value(t).raw() == doctest::Approx(std::fabs(2.0 * t - 1.0)));

    const auto& ns = get_entry("neg_sqrt_01");
    const Restriction r2 = restrict_to_segment(ns, {{0.0}, {1.0}});
    for (double t : {0.04, 0.25, 1.0}) CHECK(r2.value(t).raw() == doctest::Approx(-std::sqrt(t)));
    REQUIRE(r2.singular_params.size() == 1);
    CHECK(r2.singular_params[0] == doctest::Approx(0.0));
    REQUIRE(r2.has_deriv);
    CHECK(r2.deriv(0.25).raw() == doctest::Approx(-1.0));

    // outside the domain the restriction is identically +inf
    const Restriction r3 = restrict_to_segment(get_entry("indicator_01"), {{2.0}, {1.0}});
    for (double t : {0.0, 0.5, 1.0}) CHECK(r3.value(t).is_pos_inf());

    CHECK_THROWS_AS(restrict_to_segment(abs_e, Segment{{0.0, 0.0}, {1.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(restrict_to_segment(abs_e, Segment{{0.0}, {0.0}}), std::invalid_argument);
}

TEST_CASE("eval never returns -inf and never faults") {
    Rng rng(20240901);
    for (const auto& name : entry_names()) {
        const auto& e = get_entry(name);
        for (int i = 0; i < 200; ++i) {
            const Point x = e.domain.sample(e.dim, rng);
            const ExtReal v = e.eval(x);
            CHECK_FALSE(v.is_neg_inf());
        }
        // probe outside the sampling box too
        Point far(static_cast<std::size_t>(e.dim), 7.25);
        CHECK_FALSE(e.eval(far).is_neg_inf());
    }
}

TEST_CASE("tagged-convex entries pass the midpoint sampling test") {
    Rng rng(77);
    for (const auto& name : entry_names()) {
        const auto& e = get_entry(name);
        if (!e.has_tag(tags::convex)) continue;
        for (int i = 0; i < 1000; ++i) {
            const Point x = e.domain.sample(e.dim, rng);
            const Point y = e.domain.sample(e.dim, rng);
            const ExtReal fx = e.eval(x), fy = e.eval(y);
            if (!fx.finite() || !fy.finite()) continue;
            Point mid(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) mid[k] = 0.5 * (x[k] + y[k]);
            const ExtReal fm = e.eval(mid);
            REQUIRE(fm.finite());
            CHECK(fm.raw() <= 0.5 * fx.raw() + 0.5 * fy.raw() + 1e-12);
        }
    }
}

TEST_CASE("restriction is linear under reparametrization") {
    const auto& e = get_entry("x_sin_inv");
    const Segment whole{{-0.7}, {1.9}};
    const Restriction r1 = restrict_to_segment(e, whole);
    for (double s : {0.0, 0.25, 0.5, 0.75, 0.9}) {
        const Segment tail_seg{whole.at(s), {(1.0 - s) * whole.dir[0]}};
        const Restriction r2 = restrict_to_segment(e, tail_seg);
        CHECK(r2.value(0.0).raw() == r1.value(s).raw()); // exact at the base point
        for (double tp : {0.2, 0.6, 1.0}) {
            const double mapped = s + tp * (1.0 - s);
            CHECK(r2.value(tp).raw() ==
                  doctest::Approx(r1.value(mapped).raw()).epsilon(1e-12));
        }
    }
}

TEST_CASE("shifted entries share the subdifferential") {
    const auto& g = get_entry("abs");
    const CatalogEntry f = shifted_entry(g, 5.0, "abs_test_shift");
    CHECK(f.eval({0.3}).raw() == doctest::Approx(5.3));
    REQUIRE(f.subdiff.has_value());
    CHECK(f.subdiff->support({0.0}, {1.0}).raw() == doctest::Approx(1.0));

    const auto& abs5 = get_entry("abs_plus5");
    CHECK(abs5.eval({-2.0}).raw() == doctest::Approx(7.0));
}

TEST_CASE("function files parse and register") {
    std::istringstream in(R"(# sample definitions
name = hinge
dim = 1
domain = box -2 2
tags = convex, locally_lipschitz
piece = x <= 0 : 0
piece = otherwise : 2*x

name = vee2
dim = 2
domain = box -1 1 -1 1
piece = otherwise : max(x + y, -x - y, 0.5*x)
singular_set = 0 0
)");
    const auto entries = parse_function_file(in, "sample.fn");
    REQUIRE(entries.size() == 2);

    const auto& hinge = entries[0];
    CHECK(hinge.eval({-1.0}).raw() == 0.0);
    CHECK(hinge.eval({0.5}).raw() == doctest::Approx(1.0));
    CHECK(hinge.eval({3.0}).is_pos_inf()); // outside the declared box
    CHECK(hinge.has_tag(tags::convex));

    const auto& vee = entries[1];
    CHECK(vee.dim == 2);
    CHECK(vee.eval({0.5, 0.25}).raw() == doctest::Approx(0.75));
    CHECK(vee.eval({-0.5, -0.25}).raw() == doctest::Approx(0.75));
    REQUIRE(vee.singular_set.size() == 1);
}

TEST_CASE("parse errors cite line numbers") {
    {
        std::istringstream in("name = broken\ndim = 1\npiece = x < 0 : x +\n");
        try {
            parse_function_file(in, "bad.fn");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("bad.fn:3") != std::string::npos);
        }
    }
    {
        std::istringstream in("name = f\ndim = 1\ntags = convex\ntags = no_such_tag\n");
        try {
            parse_function_file(in, "bad.fn");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
        }
    }
    {
        std::istringstream in("name = f\ndim = 2\npiece = otherwise : x*y\nsingular_set = 0\n");
        try {
            parse_function_file(in, "bad.fn");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4); // wrong point arity
        }
    }
}
