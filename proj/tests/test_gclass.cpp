#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "firey/gclass.hpp"

using namespace firey;

TEST_CASE("power laws above the critical exponent are admissible") {
    for (int n : {2, 3}) {
        for (double p : {2.0, 1.0, 0.5, -1.0, -2.0, -static_cast<double>(n) - 0.9}) {
            const auto cert = check_an(gtab_power(n, p, 0.5, 2.0));
            INFO("n=" << n << " p=" << p);
            REQUIRE(cert.passed);
            REQUIRE(cert.min_forward_diff > 0.0);
        }
    }
}

TEST_CASE("the critical power p = -n-1 is rejected with a flat certificate") {
    for (int n : {2, 3}) {
        const auto G = gtab_power(n, -static_cast<double>(n) - 1.0, 0.5, 2.0);
        const auto cert = check_an(G);
        INFO("n=" << n);
        REQUIRE_FALSE(cert.passed);
        // theta G + n H is constant: the window gain is zero to quadrature noise
        REQUIRE(std::abs(cert.min_window_gain) < 1e-8 * cert.scale);
        REQUIRE(cert.violation_hi > cert.violation_lo);
    }
    // below critical: genuinely decreasing, also rejected
    REQUIRE_FALSE(check_an(gtab_power(2, -4.0, 0.5, 2.0)).passed);
}

TEST_CASE("strictly increasing positive functions are admissible") {
    REQUIRE(check_an(gtab_increasing_demo(2)).passed);
    REQUIRE(check_an(gtab_increasing_demo(3)).passed);
    // kinked but increasing
    const auto G = gtab_from_function(2, 0.5, 3.0,
                                      [](double t) { return t < 1.0 ? t : (t < 2.0 ? 1.0 + 2.0 * (t - 1.0) : 3.0 + 0.5 * (t - 2.0)); });
    REQUIRE(check_an(G).passed);
}

TEST_CASE("sufficient differential margin") {
    REQUIRE(an_sufficient_margin(gtab_power(2, 1.0, 0.5, 2.0)) > 0.0);
    REQUIRE(an_sufficient_margin(gtab_power(2, -3.0, 0.5, 2.0)) < 1e-6);
}

TEST_CASE("extension of a constant") {
    const auto ext = extend_an(gtab_const(3, 2.5, 1.0, 2.0), 5.0);
    for (double t : {0.2, 0.7, 1.3, 1.9, 3.5, 4.9}) {
        REQUIRE(ext.eval_G(t) == Catch::Approx(2.5).margin(1e-12));
        // F(theta) = (n+1) c theta
        REQUIRE(ext.eval_F(t) == Catch::Approx(4.0 * 2.5 * t).epsilon(1e-9));
    }
    REQUIRE(ext.eval_F(0.0) == 0.0);
}

TEST_CASE("extension of the identity on [1,2] matches the symbolic antiderivative") {
    // G(theta) = theta, n = 2: Hbar = theta below 1, theta^2/2 + 1/2 on [1,2],
    // 2 theta - 3/2 above; F = theta Gbar + 2 Hbar
    const auto ext = extend_an(gtab_from_function(2, 1.0, 2.0, [](double t) { return t; }), 4.0);
    REQUIRE(ext.eval_F(0.5) == Catch::Approx(3.0 * 0.5).epsilon(1e-10));
    REQUIRE(ext.eval_F(1.5) == Catch::Approx(2.0 * 1.5 * 1.5 + 1.0).epsilon(1e-8));
    REQUIRE(ext.eval_F(3.0) == Catch::Approx(6.0 * 3.0 - 3.0).epsilon(1e-8));
    REQUIRE(ext.eval_F(0.0) == 0.0);
    // F strictly increasing across the whole extension
    const auto F = ext.frep_samples(2048);
    for (std::size_t k = 0; k + 1 < F.size(); ++k) REQUIRE(F[k + 1] > F[k]);
}

TEST_CASE("extension identity Hbar(theta) = integral_0^1 r^{n-1} F(r theta) dr") {
    rng64 rng(99);
    const auto ext = extend_an(gtab_from_function(3, 0.8, 2.2, [](double t) { return 1.0 + 0.3 * std::sin(3.0 * t) + 0.5 * t; }), 6.0);
    REQUIRE(check_an(ext.base()).passed);
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = rng.uniform(0.05, 5.9);
        REQUIRE(ext.identity_residual(theta) < 1e-8);
    }
}

TEST_CASE("gluing with matching endpoint values is the identity") {
    const auto G = gtab_from_function(2, 1.0, 2.0, [](double t) { return 1.0 + 0.2 * t; });
    const double a1 = G.samples().front(), a2 = G.samples().back();
    const auto glued = glue_g_eps(G, 1.0, 2.0, a1, a2, 0.1);
    REQUIRE(glued.size() == G.size());
    for (std::size_t k = 0; k < G.size(); ++k) REQUIRE(glued.samples()[k] == G.samples()[k]);
}

TEST_CASE("gluing a constant onto prescribed endpoint values") {
    const auto G = gtab_const(2, 1.0, 1.0, 2.0);
    const auto glued = glue_g_eps(G, 1.0, 2.0, 0.5, 2.0, 0.1);
    REQUIRE(glued.samples().front() == 0.5);
    REQUIRE(glued.samples().back() == 2.0);
    REQUIRE(check_an(glued).passed);
    // exact sample copy on [c1+eps, c2-eps]
    for (std::size_t k = 0; k < glued.size(); ++k) {
        const double theta = glued.node(k);
        if (theta >= 1.1 && theta <= 1.9) REQUIRE(glued.samples()[k] == 1.0);
    }
    // uniform bound max{a2, max G}
    REQUIRE(glued.max_G() <= std::max(2.0, G.max_G()) + 1e-15);
}

TEST_CASE("gluing sup-norm bound is uniform as eps shrinks") {
    const auto G = gtab_from_function(2, 1.0, 2.0, [](double t) { return 1.2 + 0.3 * std::sin(5 * t); });
    const double bound = std::max(2.5, G.max_G());
    for (double eps : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        const auto glued = glue_g_eps(G, 1.0, 2.0, 0.6, 2.5, eps);
        REQUIRE(check_an(glued).passed);
        REQUIRE(glued.max_G() <= bound + 1e-12);
    }
}

TEST_CASE("gluing hypothesis violations are named") {
    const auto G = gtab_const(2, 1.0, 1.0, 2.0);
    try {
        glue_g_eps(G, 1.0, 2.0, 1.5, 2.0, 0.1);  // G(c1) < a1
        FAIL("expected precondition error");
    } catch (const error& e) {
        REQUIRE(e.kind() == errkind::precondition);
        REQUIRE(std::string(e.what()).find("G(c1) >= a1") != std::string::npos);
    }
    try {
        glue_g_eps(G, 1.0, 2.0, 0.5, 0.9, 0.1);  // G(c2) > a2
        FAIL("expected precondition error");
    } catch (const error& e) {
        REQUIRE(std::string(e.what()).find("G(c2) <= a2") != std::string::npos);
    }
    REQUIRE_THROWS_AS(glue_g_eps(G, 1.0, 2.0, 0.5, 2.0, 0.6), error);  // eps too large
}

TEST_CASE("admissibility survives gluing then extension on subintervals") {
    const auto G = gtab_from_function(2, 1.0, 2.0, [](double t) { return 1.2 + 0.3 * std::sin(5 * t); });
    const auto glued = glue_g_eps(G, 1.0, 2.0, 0.6, 2.5, 0.05);
    const auto ext = extend_an(glued, 8.0);
    // resample the extension onto subintervals; the certificate holds there too
    for (auto [lo, hi] : {std::pair{0.2, 1.5}, std::pair{1.1, 3.0}, std::pair{2.5, 7.5}}) {
        const auto sub = gtab_from_function(2, lo, hi, [&](double t) { return ext.eval_G(t); }, 1024);
        REQUIRE(check_an(sub).passed);
    }
}

TEST_CASE("table rejects invalid inputs") {
    REQUIRE_THROWS_AS(GTab(2, -1.0, 2.0, std::vector<double>(64, 1.0)), error);
    REQUIRE_THROWS_AS(GTab(2, 2.0, 1.0, std::vector<double>(64, 1.0)), error);
    std::vector<double> neg(64, 1.0);
    neg[5] = -0.1;
    REQUIRE_THROWS_AS(GTab(2, 1.0, 2.0, neg), error);
    REQUIRE_THROWS_AS(gtab_preset("mystery:1", 2), error);
    REQUIRE_NOTHROW(gtab_preset("power:-1", 2));
    REQUIRE_NOTHROW(gtab_preset("const:2", 2));
    REQUIRE_NOTHROW(gtab_preset("increasing:demo", 2));
}

TEST_CASE("domain guard lists offenders") {
    const auto G = gtab_const(2, 1.0, 1.0, 2.0);
    try {
        G.require_domain({1.5, 2.5, 0.2});
        FAIL("expected domain violation");
    } catch (const error& e) {
        REQUIRE(e.kind() == errkind::domain_violation);
        REQUIRE(std::string(e.what()).find("2.5") != std::string::npos);
    }
}
