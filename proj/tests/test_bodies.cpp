#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "firey/bodies.hpp"
#include "helpers.hpp"

using namespace firey;

TEST_CASE("support of the corner square") {
    CircleGrid g(1024);
    PointCloud P{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    const auto L = support_from_points(P, g);
    REQUIRE(L.h()[0] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(L.h_at(pi / 4) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    REQUIRE_THROWS_AS(support_from_points(PointCloud{}, g), error);
}

TEST_CASE("support of a dense circle sample is the disc") {
    CircleGrid g(1024);
    PointCloud P;
    for (int i = 0; i < 10000; ++i) P.points.push_back(unit_dir(two_pi * i / 10000.0));
    const auto L = support_from_points(P, g);
    for (double v : L.h()) {
        REQUIRE(v <= 1.0 + 1e-15);
        REQUIRE(v >= 1.0 - 1e-6);
    }
}

TEST_CASE("translation covariance of support_from_points") {
    CircleGrid g(512);
    rng64 rng(42);
    auto P = testing::random_polygon_cloud(rng, 23);
    const vec2 a(0.0, 0.3);
    PointCloud Pa;
    for (const auto& p : P.points) Pa.points.push_back(p + a);
    const auto L = support_from_points(P, g);
    const auto La = support_from_points(Pa, g);
    for (int k = 0; k < g.size(); ++k) {
        const double gain = dot(a, unit_dir(g.angle(k)));
        REQUIRE(La.h()[k] == Catch::Approx(L.h()[k] + gain).margin(1e-13));
    }
}

TEST_CASE("degenerate and non-convex inputs are rejected") {
    CircleGrid g(256);
    // segment cloud: zero-area body
    PointCloud seg{{{-1, 0}, {1, 0}}};
    REQUIRE_THROWS_AS(support_from_points(seg, g), error);
    // dented samples violate the convexity certificate
    std::vector<double> h(g.size(), 1.0);
    h[10] = 0.9;
    try {
        ProfileSupport L(g, h);
        FAIL("expected non_convex rejection");
    } catch (const error& e) {
        REQUIRE(e.kind() == errkind::non_convex);
        REQUIRE(std::string(e.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("radial function of stock bodies") {
    CircleGrid g(1024);
    const auto disc = profile_ball(g, 1.7);
    for (double phi : {0.0, 0.3, 2.0, 4.4})
        REQUIRE(radial_from_support(disc, unit_dir(phi)) == Catch::Approx(1.7).margin(1e-12));

    PointCloud sq{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    const auto square = support_from_points(sq, g);
    REQUIRE(radial_from_support(square, unit_dir(pi / 4)) ==
            Catch::Approx(std::sqrt(2.0)).margin(1e-6));
    REQUIRE(radial_from_support(square, vec2(1, 0)) == Catch::Approx(1.0).margin(1e-12));

    // origin on the boundary is rejected
    PointCloud tri{{{0, 0}, {3, 0}, {0, 3}}};
    const auto T = support_from_points(tri, g);
    REQUIRE_THROWS_AS(radial_from_support(T, vec2(1, 0)), error);
}

TEST_CASE("radial times polar support is one at every node") {
    CircleGrid g(1024);
    rng64 rng(5);
    const auto L = support_from_points(testing::random_polygon_cloud(rng, 17), g);
    const auto Lp = polar_support(L);
    const auto rho = radial_samples(L);
    for (int k = 0; k < g.size(); ++k)
        REQUIRE(rho[k] * Lp.h()[k] == Catch::Approx(1.0).epsilon(1e-12));
    // the min-over-nodes formula agrees with the exact polygon radial
    for (int k = 0; k < g.size(); k += 37)
        REQUIRE(radial_from_support(L, unit_dir(g.angle(k))) ==
                Catch::Approx(rho[k]).epsilon(1e-11));
}

TEST_CASE("polar of a disc and of the square") {
    CircleGrid g(1024);
    const auto disc = profile_ball(g, 2.0);
    const auto dp = polar_support(disc);
    for (double v : dp.h()) REQUIRE(v == Catch::Approx(0.5).margin(1e-12));

    PointCloud sq{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    const auto square = support_from_points(sq, g);
    const auto cp = polar_support(square);  // cross-polytope
    REQUIRE(cp.h()[0] == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(cp.h_at(pi / 4) == Catch::Approx(std::sqrt(0.5)).margin(1e-5));
}

TEST_CASE("double polar reproduces the body") {
    CircleGrid g(2048);
    rng64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto L = testing::random_convex_profile(rng, g);
        const auto LL = polar_support(polar_support(L));
        for (int k = 0; k < g.size(); ++k)
            REQUIRE(LL.h()[k] == Catch::Approx(L.h()[k]).margin(1e-5));
    }
}

TEST_CASE("gauss preimage of discs and the ellipse oracle") {
    CircleGrid g(1024);
    const auto disc = profile_ball(g, 1.5);
    for (double phi : {0.0, 1.1, 3.9}) {
        const vec2 p = gauss_preimage(disc, phi);
        REQUIRE((p - unit_dir(phi) * 1.5).norm() < 1e-10);
    }
    // translated disc: p(phi) = r u(phi) + center
    const auto shifted = profile_ball(g, 1.5, {0.0, 0.4});
    for (double phi : {0.0, 1.1, 3.9}) {
        const vec2 p = gauss_preimage(shifted, phi);
        REQUIRE((p - unit_dir(phi) * 1.5 - vec2(0.0, 0.4)).norm() < 1e-10);
    }
    // ellipse against the parametric boundary oracle
    const auto E = profile_ellipse(g, 2.0, 1.0);
    const vec2 p0 = gauss_preimage(E, 0.0);
    REQUIRE(p0.x == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(p0.y == Catch::Approx(0.0).margin(1e-9));
    for (double phi : {0.5, 1.0, 2.2, 5.1}) {
        const vec2 p = gauss_preimage(E, phi);
        const vec2 q = testing::ellipse_boundary_at_normal(2.0, 1.0, phi);
        REQUIRE((p - q).norm() < 1e-8);
    }
    // supporting identity <p(phi), u(phi)> = h(phi)
    for (int k = 0; k < g.size(); k += 101) {
        const double phi = g.angle(k);
        REQUIRE(dot(gauss_preimage(E, phi), unit_dir(phi)) ==
                Catch::Approx(E.h()[k]).margin(1e-8));
    }
}

TEST_CASE("barycentre of stock bodies") {
    CircleGrid g(1024);
    rng64 rng(17);
    const auto sym = testing::random_convex_profile(rng, g, 6, 0.2, /*even_only=*/true);
    REQUIRE(barycentre(sym).norm() < 1e-8);

    const auto shifted = profile_ball(g, 1.0, {0.0, 0.25});
    const vec2 b = barycentre(shifted);
    REQUIRE(b.x == Catch::Approx(0.0).margin(1e-10));
    REQUIRE(b.y == Catch::Approx(0.25).margin(1e-10));

    PointCloud tri{{{0, 0}, {3, 0}, {0, 3}}};
    const auto T = support_from_points(tri, g);
    const vec2 bt = barycentre(T);
    REQUIRE(bt.x == Catch::Approx(1.0).margin(1e-4));
    REQUIRE(bt.y == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("sandwich report") {
    CircleGrid g(1024);
    const auto disc = profile_ball(g, 1.25, {0.3, -0.2});
    const auto rep = sandwich(disc);
    REQUIRE(rep.r_in == Catch::Approx(1.25).margin(1e-6));
    REQUIRE(rep.r_out == Catch::Approx(1.25).epsilon(1e-4));
    REQUIRE(rep.ratio() >= 1.0);

    const auto E = profile_ellipse(g, 2.0, 1.0);
    const auto re = sandwich(E);
    REQUIRE(re.r_in == Catch::Approx(1.0).margin(1e-4));
    REQUIRE(re.r_out == Catch::Approx(2.0).margin(1e-4));
}

TEST_CASE("bounded density family has bounded sandwich ratio") {
    // perturbed discs with curvature radius kept inside [1/2, 2]: the
    // inradius/circumradius ratio stays bounded across the family
    CircleGrid g(512);
    rng64 rng(29);
    double worst = 1.0;
    for (int trial = 0; trial < 40; ++trial) {
        auto L = testing::random_convex_profile(rng, g, 4, 0.18);
        // verify the curvature-radius window [1/2, 2] before admitting the body
        const auto d2 = diff2(g, L.h());
        double fmin = 1e300, fmax = 0.0;
        for (int k = 0; k < g.size(); ++k) {
            const double f = d2[k] + L.h()[k];
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
        }
        if (fmin < 0.5 || fmax > 2.0) continue;
        worst = std::max(worst, sandwich(L).ratio());
    }
    REQUIRE(worst < 4.0);
}

TEST_CASE("axisymmetric body validation") {
    CircleGrid g(512);
    std::vector<double> h(g.size());
    for (int k = 0; k < g.size(); ++k) h[k] = 1.0 + 0.1 * std::sin(g.angle(k));
    REQUIRE_NOTHROW(AxisymBody(3, ProfileSupport(g, h)));
    std::vector<double> bad(g.size());
    for (int k = 0; k < g.size(); ++k) bad[k] = 1.0 + 0.1 * std::cos(g.angle(k));
    REQUIRE_THROWS_AS(AxisymBody(3, ProfileSupport(g, bad)), error);
    REQUIRE_THROWS_AS(AxisymBody(1, ProfileSupport(g, h)), error);
}
