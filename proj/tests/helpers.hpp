#pragma once

// Shared generators and small oracles for the test suites.

#include <cmath>
#include <vector>

#include "firey/bodies.hpp"
#include "firey/grid.hpp"
#include "firey/mathutil.hpp"

namespace firey::testing {

// Random smooth strictly convex profile: a low-order trigonometric
// perturbation of the unit disc, rescaled until the curvature radius keeps a
// healthy margin. With even_only, only even harmonics are used, giving a
// centrally symmetric body.
inline ProfileSupport random_convex_profile(rng64& rng, const CircleGrid& g, int max_mode = 5,
                                            double roughness = 0.25, bool even_only = false,
                                            bool zero_linear = false) {
    std::vector<double> amp_c(max_mode + 1, 0.0), amp_s(max_mode + 1, 0.0);
    for (int k = 1; k <= max_mode; ++k) {
        if (even_only && k % 2 != 0) continue;
        if (zero_linear && k == 1) continue;
        const double decay = 1.0 / (1.0 + k * k);
        amp_c[k] = rng.uniform(-1.0, 1.0) * roughness * decay;
        amp_s[k] = rng.uniform(-1.0, 1.0) * roughness * decay;
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<double> h(g.size());
        double margin = 1e300;
        for (int j = 0; j < g.size(); ++j) {
            const double phi = g.angle(j);
            double v = 1.0, curv = 1.0;
            for (int k = 1; k <= max_mode; ++k) {
                const double c = std::cos(k * phi), s = std::sin(k * phi);
                v += amp_c[k] * c + amp_s[k] * s;
                curv += (1.0 - k * k) * (amp_c[k] * c + amp_s[k] * s);
            }
            h[j] = v;
            margin = std::min(margin, curv);
        }
        if (margin > 0.05) return ProfileSupport(g, std::move(h));
        for (double& a : amp_c) a *= 0.7;
        for (double& a : amp_s) a *= 0.7;
    }
    return profile_ball(g, 1.0);
}

// random convex polygon as a point cloud on a wobbly circle
inline PointCloud random_polygon_cloud(rng64& rng, int m, double base_radius = 1.0) {
    PointCloud P;
    for (int i = 0; i < m; ++i) {
        const double phi = two_pi * (i + rng.uniform(0.1, 0.9)) / m;
        const double r = base_radius * rng.uniform(0.75, 1.25);
        P.points.push_back(unit_dir(phi) * r);
    }
    return P;
}

// parametric boundary oracle for the centered ellipse: the boundary point
// whose outward normal is (cos phi, sin phi)
inline vec2 ellipse_boundary_at_normal(double a, double b, double phi) {
    const double t = std::atan2(b * std::sin(phi), a * std::cos(phi));
    return {a * std::cos(t), b * std::sin(t)};
}

}  // namespace firey::testing
