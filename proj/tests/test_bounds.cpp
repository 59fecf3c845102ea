#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projlab/bounds.hpp"
#include "projlab/discrete.hpp"

#include <cmath>

using namespace projlab;

TEST_CASE("kaufman and identity bounds") {
    CHECK(kaufman_bound(0) == 0);
    CHECK(kaufman_bound(0.5) == 0.5);
    CHECK_THROWS_AS(kaufman_bound(1.2), BoundDomainError);
    CHECK(pss_bound(1) == 1);
    CHECK(rams_bound(0) == 0);
    CHECK(furstenberg_bound(0.3, 1) == 0.3);
    CHECK_THROWS_AS(furstenberg_bound(1, 1), BoundDomainError);
}

TEST_CASE("falconer-howroyd threshold") {
    CHECK(falconer_howroyd_threshold(Q(1), Q(1)) == make_q(2, 3));
    CHECK(falconer_howroyd_threshold(Q(2), Q(1)) == 1);
    CHECK(falconer_howroyd_threshold(1.0, 1e-12) < 1e-11);
    CHECK_THROWS_AS(falconer_howroyd_threshold(1.0, 0.0), BoundDomainError);
    CHECK(fh_lower(Q(0)) == 0);
    CHECK(fh_lower(Q(2)) == 1);
    CHECK(fh_lower(Q(1)) == make_q(2, 3));
}

TEST_CASE("falconer-howroyd at sigma = 1 equals fh_lower exactly") {
    for (long a = 0; a <= 60; ++a) {
        Q g = make_q(a, 30);
        CHECK(falconer_howroyd_threshold(g, Q(1)) == fh_lower(g));
        CHECK(fh_lower(g) == 2 * g / (2 + g));
        if (a > 0 && a < 60) CHECK(fh_lower(g) > g / 2);
    }
}

TEST_CASE("estimate bounds: limit values") {
    for (int i = 1; i <= 50; ++i) {
        double g = i / 50.0;
        CHECK(std::fabs(estimate_bound1(g, g) - 1) <= 1e-12);
        CHECK(std::fabs(estimate_bound1(g, g / 2) - g / (1 + g)) <= 1e-12);
        CHECK(std::fabs(estimate_bound2(g, g / 2) - g / 2) <= 1e-12);
        CHECK(std::fabs(estimate_bound2(g, g) - (2 - g)) <= 1e-12);
    }
    CHECK(estimate_bound1(1, 0.5) == 0.5);
    CHECK_THROWS_AS(estimate_bound1(0.5, 0.6), BoundDomainError);
    CHECK_THROWS_AS(estimate_bound2(0.5, 0.2), BoundDomainError);
    CHECK(estimate_bound_min(0.5, 0.1) == estimate_bound1(0.5, 0.1));
}

TEST_CASE("property: estimate bounds monotone and below sigma/gamma") {
    for (int i = 1; i <= 50; ++i) {
        double g = i / 50.0;
        double prev1 = -1, prev2 = -1;
        for (int j = 0; j <= 50; ++j) {
            double s = g * j / 50.0;
            double b1 = estimate_bound1(g, s);
            CHECK(b1 >= prev1);
            prev1 = b1;
            if (s < g && g < 1) CHECK(b1 <= s / g + 1e-15);
            if (j >= 25) {
                double b2 = estimate_bound2(g, s);
                CHECK(b2 >= prev2 - 1e-15);
                prev2 = b2;
                CHECK(estimate_bound_min(g, s) == std::min(b1, b2));
            }
        }
    }
}

TEST_CASE("exponent iteration fixed point equals estimate_bound1 on a 50x50 grid") {
    double worst = 0;
    for (int i = 1; i <= 50; ++i) {
        double g = i / 51.0;  // gamma in (0,1)
        for (int j = 1; j <= 50; ++j) {
            double s = g * j / 51.0;
            double rho = g / (g + s * (g - 1));
            auto it = exponent_iteration(s, g, rho, 0.0, 0);
            CHECK(it.optimal_rho);
            worst = std::max(worst, std::fabs(it.limit - estimate_bound1(g, s)));
            CHECK(std::fabs(it.bound1 - estimate_bound1(g, s)) <= 1e-12);
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("exponent iteration converges to its limit") {
    auto it = exponent_iteration(0.3, 0.6, 1.5, 0.0, 200);
    REQUIRE(it.tau.size() == 200);
    CHECK(std::fabs(it.tau.back() - it.limit) <= 1e-12);
    CHECK_FALSE(it.optimal_rho);
    CHECK_THROWS(exponent_iteration(0.3, 1.0, 1.0, 0.0, 1));
}

TEST_CASE("reformulated bound") {
    CHECK(estimate_bound1_reformulated(0.7, 1) == 1);
    CHECK(estimate_bound1_reformulated(1e-12, 0.5) < 1e-11);
    CHECK(std::fabs(estimate_bound1_reformulated(0.5, 0.5) - 1.0 / 3) <= 1e-15);
    // tau = sigma/gamma turns bound1 into the reformulation
    for (int i = 1; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            double g = i / 20.0, s = g * j / 20.0;
            CHECK(std::fabs(estimate_bound1_reformulated(g, s / g) - estimate_bound1(g, s)) <= 1e-12);
        }
}

TEST_CASE("mainP threshold") {
    auto t = mainP_threshold(1);
    CHECK(t.threshold == 0.5);
    CHECK(t.cap == 2);
    CHECK(mainP_threshold(0).threshold == 0);
    CHECK(mainP_threshold(2).threshold == 1);
}

TEST_CASE("bigex parameters") {
    auto p = bigex_parameters(make_q(4, 5));
    CHECK(p.d == 15);
    CHECK(p.tau_lo == make_q(16, 17));
    CHECK(p.tau_lo < p.t);
    CHECK(p.t < p.tau);
    CHECK(p.tau < 1);
    CHECK(bigex_parameters(make_q(19, 25)).d == 13);
    CHECK_THROWS_AS(bigex_parameters(make_q(3, 4)), BoundDomainError);
    for (long a = 76; a < 100; ++a) {
        Q s = make_q(a, 100);
        auto q = bigex_parameters(s);
        CHECK(Q(q.d) >= 3 / (1 - s));
        CHECK(Q(q.d - 1) < 3 / (1 - s));
    }
}

TEST_CASE("category bound") {
    CHECK(category_bound(0.4, 0.4) == doctest::Approx(1).epsilon(1e-15));
    CHECK(category_bound(0, 1) == 0);
    CHECK_THROWS_AS(category_bound(0.5, 0.4), BoundDomainError);
}

TEST_CASE("bourgain kappa is a stub") { CHECK_FALSE(bourgain_kappa(1.0, 0.6).has_value()); }

TEST_CASE("formula registry") {
    BoundQuery q;
    q.gamma = 1;
    q.sigma = 0.5;
    CHECK(evaluate_bound("estimate1", q) == 0.5);
    CHECK(format_bound_params("estimate1", q) == "gamma=1;sigma=0.5");
    BoundQuery b;
    b.sigma = 0.8;
    CHECK(evaluate_bound("bigex-d", b) == 15);
    b.sigma = 0.76;
    CHECK(evaluate_bound("bigex-d", b) == 13);
    CHECK_THROWS_AS(evaluate_bound("nonsense", q), BoundDomainError);
    CHECK_THROWS_AS(evaluate_bound("furstenberg", q), BoundDomainError);
    for (auto& f : bound_formulas()) CHECK_FALSE(f.empty());
}

TEST_CASE("parse_q reads decimals in base ten") {
    CHECK(parse_q("0.8") == make_q(4, 5));
    CHECK(parse_q("0.76") == make_q(19, 25));
    CHECK(parse_q("010/08") == make_q(5, 4));
    CHECK(parse_q("-1.5e-2") == make_q(-3, 200));
    CHECK_THROWS(parse_q("0x10"));
}
