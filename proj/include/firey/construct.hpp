#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "firey/bodies.hpp"
#include "firey/errors.hpp"
#include "firey/gclass.hpp"
#include "firey/grid.hpp"
#include "firey/mathutil.hpp"
#include "firey/measure.hpp"

namespace firey {

namespace detail {

// Outward normal angle at a boundary point p of a strictly convex body:
// maximizes F(phi) = <p, u(phi)> - h(phi) (zero exactly on the boundary).
// Returns the angle; *gap receives the boundary defect max F.
inline double boundary_normal_angle(const ProfileSupport& T, const vec2& p, double* gap = nullptr) {
    const auto& g = T.grid();
    int best = 0;
    double bestv = -1e300;
    for (int k = 0; k < g.size(); ++k) {
        const double v = dot(p, unit_dir(g.angle(k))) - T.h()[k];
        if (v > bestv) {
            bestv = v;
            best = k;
        }
    }
    const auto dh = diff1(g, T.h());
    const auto d2h = diff2(g, T.h());
    double phi = g.angle(best);
    for (int it = 0; it < 40; ++it) {
        const vec2 u = unit_dir(phi);
        const double f1 = dot(p, perp(u)) - trig_interp(g, dh, phi);
        const double f2 = -dot(p, u) - trig_interp(g, d2h, phi);
        if (std::abs(f2) < 1e-14) break;
        const double step = f1 / f2;
        phi -= step;
        if (std::abs(step) < 1e-13) break;
    }
    if (gap) *gap = dot(p, unit_dir(phi)) - T.h_at(phi);
    return wrap_angle(phi);
}

}  // namespace detail

// T = (T1 cap l+) u (T2 cap l-), where l is the line through p and q and
// l+ is the side toward perp(q - p). Requires p, q on both boundaries with
// matching tangent lines there.
inline ProfileSupport tangency_glue(const ProfileSupport& T1, const ProfileSupport& T2,
                                    const vec2& p, const vec2& q, double angle_tol = 1e-6) {
    if (T1.grid() != T2.grid()) fail(errkind::grid_mismatch, "tangency glue needs a common grid");
    const double scale = std::max(T1.h_max(), T2.h_max());
    for (const vec2& x : {p, q}) {
        for (const ProfileSupport* T : {&T1, &T2}) {
            double gap = 0.0;
            detail::boundary_normal_angle(*T, x, &gap);
            if (std::abs(gap) > 1e-6 * scale)
                fail(errkind::precondition,
                     "glue point is not on both boundaries (defect " + std::to_string(gap) + ")");
        }
    }
    for (const vec2& x : {p, q}) {
        const double a1 = detail::boundary_normal_angle(T1, x);
        const double a2 = detail::boundary_normal_angle(T2, x);
        double d = std::abs(wrap_angle(a1 - a2));
        d = std::min(d, two_pi - d);
        if (d > angle_tol)
            fail(errkind::precondition,
                 "tangent mismatch at a glue point (normal angles differ by " + std::to_string(d) +
                     " rad)");
    }
    const vec2 m = perp(q - p) / (q - p).norm();
    const auto p1 = gauss_preimage_samples(T1);
    std::vector<double> h(T1.size());
    for (int k = 0; k < T1.size(); ++k) {
        const double side = dot(p1[k] - p, m);
        h[k] = side >= 0.0 ? T1.h()[k] : T2.h()[k];
    }
    return ProfileSupport(T1.grid(), std::move(h));  // construction re-checks convexity
}

// Central symmetrization by mirroring the upper half: h(v) for <v,e2> >= 0 and
// h(-v) below. Requires the equatorial boundary point on the x1-axis
// (h'(0) = 0), which makes the two halves meet tangentially.
inline AxisymBody glue_central_symmetric(const AxisymBody& K, double tol_rel = 1e-6) {
    const auto& L = K.profile();
    const auto& g = L.grid();
    // local difference: robust for piecewise profiles whose seams would ring
    // through a spectral derivative
    const auto dh = diff1(g, L.h(), DiffMode::finite_difference);
    if (std::abs(dh[0]) > tol_rel * L.h_max())
        fail(errkind::precondition,
             "central gluing requires the equatorial boundary point on the x1-axis (h'(0) = " +
                 std::to_string(dh[0]) + ")");
    std::vector<double> h(g.size());
    for (int k = 0; k < g.size(); ++k) {
        const double s = std::sin(g.angle(k));
        h[k] = s >= 0.0 ? L.h()[k] : L.h()[g.wrap(k + g.size() / 2)];
    }
    return AxisymBody(K.dim(), ProfileSupport(g, std::move(h)));
}

// cut heights, cap radii and tangency directions for the cap gluing
struct GlueSpec {
    double t1 = 0.0, t2 = 0.0;   // cut heights (x2 of the tangency points)
    double r1 = 0.0, r2 = 0.0;   // cap radii, r1 < r2
    double nu1 = 0.0, nu2 = 0.0; // tangency direction angles in [0, pi/2]
};

struct CapGlueResult {
    AxisymBody body;        // capped and centrally symmetrized
    GTab g_eps;             // glued admissible function on [r1, r2]
    double excluded_measure = 0.0;  // H^{n-1}(U_eps)
    std::vector<int> excluded_nodes;
    std::vector<double> seam_angles;
};

// validates the tangency/band hypotheses of the cap gluing
inline void validate_glue_spec(const GlueSpec& spec, const AxisymBody& K, double tol_rel = 1e-6) {
    const auto& L = K.profile();
    const double tol = tol_rel * L.h_max();
    if (!(0.0 < spec.r1 && spec.r1 < spec.r2))
        fail(errkind::precondition, "cap radii must satisfy 0 < r1 < r2");
    for (auto [nu, r, t] : {std::tuple{spec.nu1, spec.r1, spec.t1},
                            std::tuple{spec.nu2, spec.r2, spec.t2}}) {
        if (nu < -1e-12 || nu > pi / 2 + 1e-12)
            fail(errkind::precondition, "tangency directions must lie in the upper-right quarter");
        const double h = L.h_at(nu);
        const double dh = trig_interp(L.grid(), diff1(L.grid(), L.h(), DiffMode::finite_difference), nu);
        // the derivative estimate carries an O(dphi * curvature-jump) bias at
        // gluing seams, so its tolerance is grid-aware
        const double dtol = std::max(tol, 4.0 * L.grid().step() * L.h_max());
        if (std::abs(h - r) > tol || std::abs(dh) > dtol)
            fail(errkind::precondition,
                 "profile is not tangent to the cap circle at the given direction (|h-r|=" +
                     std::to_string(std::abs(h - r)) + ", |h'|=" + std::to_string(std::abs(dh)) +
                     ")");
        if (std::abs(t - r * std::sin(nu)) > tol)
            fail(errkind::precondition, "cut height is inconsistent with the tangency point");
    }
    const double slo = std::min(std::sin(spec.nu1), std::sin(spec.nu2));
    const double shi = std::max(std::sin(spec.nu1), std::sin(spec.nu2));
    for (int k = 0; k < L.size(); ++k) {
        const double s = std::sin(L.grid().angle(k));
        if (s > slo + 1e-9 && s < shi - 1e-9) {
            if (!(L.h()[k] > spec.r1 - tol && L.h()[k] < spec.r2 + tol))
                fail(errkind::precondition,
                     "support values between the tangency latitudes must lie in (r1, r2)");
        }
    }
}

// Replace the polar caps of K by exact spherical caps tangent at the given
// directions, symmetrize centrally, and glue G to the endpoint values r_i^{n-1}.
inline CapGlueResult glue_spherical_caps(const GlueSpec& spec, const AxisymBody& K, const GTab& G,
                                         double eps) {
    validate_glue_spec(spec, K);
    const auto& L = K.profile();
    const auto& g = L.grid();
    const int n = K.dim();
    const double a1 = std::pow(spec.r1, n - 1), a2 = std::pow(spec.r2, n - 1);
    G.require_domain({spec.r1, spec.r2});
    if (!(a1 <= G.eval(spec.r1) + 1e-9))
        fail(errkind::precondition, "cap hypothesis r1^{n-1} <= G(r1) fails");
    if (!(a2 >= G.eval(spec.r2) - 1e-9))
        fail(errkind::precondition, "cap hypothesis r2^{n-1} >= G(r2) fails");

    // the lower cap is the one tangent at the smaller latitude
    const bool nu1_low = std::sin(spec.nu1) <= std::sin(spec.nu2);
    const double slo = std::sin(nu1_low ? spec.nu1 : spec.nu2);
    const double shi = std::sin(nu1_low ? spec.nu2 : spec.nu1);
    const double rlo = nu1_low ? spec.r1 : spec.r2;
    const double rhi = nu1_low ? spec.r2 : spec.r1;

    std::vector<double> h(g.size());
    for (int k = 0; k < g.size(); ++k) {
        const double s = std::sin(g.angle(k));
        h[k] = s <= slo ? rlo : (s >= shi ? rhi : L.h()[k]);
    }
    const AxisymBody capped(n, ProfileSupport(g, std::move(h)));
    AxisymBody body = glue_central_symmetric(capped);

    // G_eps on [r1, r2] from a resampled table (gluing copies nodes exactly)
    const GTab Gr = gtab_from_function(
        n, spec.r1, spec.r2, [&](double th) { return G.eval(th); }, GTab::default_resolution);
    GTab geps = glue_g_eps(Gr, spec.r1, spec.r2, a1, a2, eps);

    CapGlueResult out{std::move(body), std::move(geps), 0.0, {}, {}};
    const double philo = std::asin(slo), phihi = std::asin(shi);
    for (double seam : {philo, phihi}) {
        out.seam_angles.push_back(seam);
        out.seam_angles.push_back(pi - seam);
        out.seam_angles.push_back(-seam);
        out.seam_angles.push_back(pi + seam);
    }
    const auto& hb = out.body.profile().h();
    double measure = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const bool in_band = (hb[k] > spec.r1 && hb[k] < spec.r1 + eps) ||
                             (hb[k] > spec.r2 - eps && hb[k] < spec.r2);
        if (in_band) {
            out.excluded_nodes.push_back(k);
            measure += std::pow(std::abs(std::cos(g.angle(k))), n - 2) * g.weight();
        }
    }
    out.excluded_measure = 0.5 * orbit_sphere_measure(n) * measure;
    return out;
}

// --- the counterexample construction ------------------------------------------

// even smooth bump, amplitude 1, supported on [-1/2, 1/2]
inline double bump(double s) {
    const double u = 2.0 * s;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

inline double bump_d1(double s) {
    const double u = 2.0 * s;
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return 2.0 * bump(s) * (-2.0 * u / (w * w));
}

inline double bump_d2(double s) {
    const double u = 2.0 * s;
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    const double psi1 = -2.0 * u / (w * w);
    const double psi2 = -2.0 / (w * w) - 8.0 * u * u / (w * w * w);
    return 4.0 * bump(s) * (psi1 * psi1 + psi2);
}

struct Counterexample {
    int n = 3;
    double r = 1.0, lambda = 0.1;
    int m = 0;
    AxisymBody body;     // K_m, centrally symmetric
    AxisymBody shifted;  // K_m + lambda e2
    GTab G_m;
};

namespace detail {

// closed-form density factors of h = r + bump(sin phi)/m
inline double ce_meridian(double r, int m, double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    return r + (bump(s) + bump_d2(s) * c * c - bump_d1(s) * s) / m;
}

inline double ce_orbit(double r, int m, double phi) {
    const double s = std::sin(phi);
    return r + (bump(s) - bump_d1(s) * s) / m;
}

inline double ce_density(int n, double r, int m, double phi) {
    return ce_meridian(r, m, phi) * std::pow(ce_orbit(r, m, phi), n - 2);
}

}  // namespace detail

// admissibility certificates for a given bump scale
inline bool counterexample_admissible(int n, double r, double lambda, int m,
                                      double margin_rel = 1e-8) {
    const double margin = margin_rel * r;
    for (int i = 0; i <= 4096; ++i) {
        const double phi = -pi / 2 + pi * i / 4096.0;
        if (detail::ce_meridian(r, m, phi) <= margin) return false;
        if (detail::ce_orbit(r, m, phi) <= margin) return false;
        // strict monotonicity of the shifted profile on (-pi/2, pi/2)
        if (lambda + bump_d1(std::sin(phi)) / m <= margin) return false;
    }
    return true;
}

inline int minimal_admissible_m(int n, double r, double lambda) {
    for (int m = 2; m <= (1 << 24); m *= 2)
        if (counterexample_admissible(n, r, lambda, m)) return m;
    fail(errkind::nonconvergence, "no admissible bump scale found");
}

// The G table needs to out-resolve the inverse profile's compression of the
// bump (zeta' is of order 1/lambda), so its default is much finer than the
// general-purpose table resolution.
inline Counterexample build_counterexample(int n, double r, double lambda, int m,
                                           int grid_n = 4096, int tab_resolution = 65536) {
    if (!(lambda > 0.0) || !(r > 2.0 * lambda))
        fail(errkind::precondition, "counterexample needs r > 2 lambda > 0");
    if (n < 2) fail(errkind::invalid_input, "dimension must be >= 2");
    if (!counterexample_admissible(n, r, lambda, m)) {
        const int mmin = minimal_admissible_m(n, r, lambda);
        fail(errkind::precondition,
             "bump scale m too small for convexity/monotonicity; minimal admissible m is about " +
                 std::to_string(mmin));
    }
    CircleGrid g(grid_n);
    std::vector<double> h(g.size()), hs(g.size());
    for (int k = 0; k < g.size(); ++k) {
        const double s = std::sin(g.angle(k));
        h[k] = r + bump(s) / m;
        hs[k] = h[k] + lambda * s;
    }
    AxisymBody body(n, ProfileSupport(g, std::move(h)));
    AxisymBody shifted(n, ProfileSupport(g, std::move(hs)));

    // G_m(theta) = density(zeta(theta)) with zeta the inverse of the shifted
    // profile restricted to [-pi/2, pi/2]; the inversion is Newton with
    // bisection safety on the closed-form profile
    auto shifted_h = [&](double phi) { return r + bump(std::sin(phi)) / m + lambda * std::sin(phi); };
    auto shifted_dh = [&](double phi) {
        return std::cos(phi) * (lambda + bump_d1(std::sin(phi)) / m);
    };
    std::vector<double> samples(tab_resolution);
    for (int j = 0; j < tab_resolution; ++j) {
        const double theta =
            (r - lambda) + 2.0 * lambda * static_cast<double>(j) / (tab_resolution - 1.0);
        double lo = -pi / 2, hi = pi / 2;
        double phi = std::asin(std::clamp((theta - r) / lambda, -1.0, 1.0));
        for (int it = 0; it < 60; ++it) {
            const double f = shifted_h(phi) - theta;
            if (f > 0.0) hi = phi;
            else lo = phi;
            const double d = shifted_dh(phi);
            double next = (std::abs(d) > 1e-18) ? phi - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - phi) < 1e-15) {
                phi = next;
                break;
            }
            phi = next;
        }
        samples[j] = detail::ce_density(n, r, m, phi);
    }
    GTab G_m(n, r - lambda, r + lambda, std::move(samples));
    return Counterexample{n, r, lambda, m, std::move(body), std::move(shifted), std::move(G_m)};
}

struct CounterexampleVerification {
    ResidualReport residual;          // of (K_m + lambda e2, G_m)
    double sufficient_margin = 0.0;   // min of theta G' + (n+1) G
    double central_symmetry_defect = 0.0;
    double translation_density_defect = 0.0;
    double ball_deviation = 0.0;      // sup deviation of K_m from its best ball
};

inline CounterexampleVerification verify_counterexample(const Counterexample& C) {
    CounterexampleVerification rep{
        monge_ampere_residual(C.shifted, C.G_m), an_sufficient_margin(C.G_m), 0.0, 0.0, 0.0};
    const auto& g = C.body.profile().grid();
    const auto& h = C.body.profile().h();
    for (int k = 0; k < g.size(); ++k)
        rep.central_symmetry_defect =
            std::max(rep.central_symmetry_defect, std::abs(h[k] - h[g.wrap(k + g.size() / 2)]));
    const auto f0 = density_of(C.body).f;
    const auto f1 = density_of(C.shifted).f;
    for (int k = 0; k < g.size(); ++k)
        rep.translation_density_defect =
            std::max(rep.translation_density_defect, std::abs(f0[k] - f1[k]));
    rep.ball_deviation =
        0.5 * (C.body.profile().h_max() - C.body.profile().h_min());
    return rep;
}

// sup distance of G_m from the constant r^{n-1}
inline double counterexample_g_distance(const Counterexample& C) {
    const double target = std::pow(C.r, C.n - 1);
    double worst = 0.0;
    for (double v : C.G_m.samples()) worst = std::max(worst, std::abs(v - target));
    return worst;
}

// sup distance between zeta_m and the shift-only inverse asin((theta - r)/lambda)
inline double counterexample_zeta_distance(const Counterexample& C) {
    double worst = 0.0;
    const int probes = 512;
    for (int j = 0; j <= probes; ++j) {
        const double theta = (C.r - C.lambda) + 2.0 * C.lambda * j / probes;
        // recover zeta_m from G_m is ill-posed; recompute by inversion instead
        double lo = -pi / 2, hi = pi / 2;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f = C.r + bump(std::sin(mid)) / C.m + C.lambda * std::sin(mid) - theta;
            (f > 0.0 ? hi : lo) = mid;
        }
        const double zeta_m = 0.5 * (lo + hi);
        const double zeta = std::asin(std::clamp((theta - C.r) / C.lambda, -1.0, 1.0));
        worst = std::max(worst, std::abs(zeta_m - zeta));
    }
    return worst;
}

}  // namespace firey
