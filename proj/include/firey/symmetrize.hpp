#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "firey/bodies.hpp"
#include "firey/errors.hpp"
#include "firey/gclass.hpp"
#include "firey/grid.hpp"
#include "firey/mathutil.hpp"
#include "firey/measure.hpp"
#include "firey/polygon.hpp"

namespace firey {

// One-parameter Steiner shadow family {L_t}, t in [-1,1], of a planar body:
// the chordwise shear x -> x - (1-t) u(xbar) e of the symmetral, realized
// exactly on the polygon determined by the support samples. Chord data is
// stored in the frame where e is the +y axis.
struct ShadowFamily {
    CircleGrid grid;
    vec2 e;
    double rot = 0.0;  // rotation taking e to the +y axis
    std::vector<double> xbar, z, w, u;  // chords z <= w and midline u = (z+w)/2
};

namespace detail {

// sample the lower/upper boundary of a convex polygon at every distinct vertex
// x value, one edge at a time (correct for vertical extreme edges too)
inline void build_chords(const std::vector<vec2>& ccw, std::vector<double>& xbar,
                         std::vector<double>& z, std::vector<double>& w) {
    const std::size_t m = ccw.size();
    double scale = 0.0;
    for (const auto& p : ccw) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
    const double merge_tol = 1e-13 * std::max(scale, 1e-300);

    std::vector<double> xs;
    xs.reserve(m);
    for (const auto& p : ccw) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double a, double b) { return std::abs(a - b) <= merge_tol; }),
             xs.end());

    xbar = xs;
    z.assign(xs.size(), 1e300);
    w.assign(xs.size(), -1e300);
    auto first_ge = [&](double x) {
        return static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), x - merge_tol) - xs.begin());
    };
    for (std::size_t i = 0; i < m; ++i) {
        const vec2& p = ccw[i];
        const vec2& q = ccw[(i + 1) % m];
        const double xlo = std::min(p.x, q.x), xhi = std::max(p.x, q.x);
        for (std::size_t j = first_ge(xlo); j < xs.size() && xs[j] <= xhi + merge_tol; ++j) {
            double y;
            if (xhi - xlo <= merge_tol) {
                z[j] = std::min({z[j], p.y, q.y});
                w[j] = std::max({w[j], p.y, q.y});
                continue;
            }
            const double t = std::clamp((xs[j] - p.x) / (q.x - p.x), 0.0, 1.0);
            y = p.y + t * (q.y - p.y);
            z[j] = std::min(z[j], y);
            w[j] = std::max(w[j], y);
        }
    }
}

}  // namespace detail

// shadow family of the polygon carried by L, along unit direction e
inline ShadowFamily make_shadow(const ProfileSupport& L, const vec2& e_in) {
    const double en = e_in.norm();
    if (!(en > 0.0)) fail(errkind::invalid_input, "shadow direction must be nonzero");
    const vec2 e = e_in / en;
    ShadowFamily F{L.grid(), e, pi / 2 - std::atan2(e.y, e.x), {}, {}, {}, {}};
    auto verts = support_polygon_vertices(L.grid(), L.h());
    for (auto& p : verts) p = rotate(p, F.rot);
    const auto hull = clean_hull(verts);
    detail::build_chords(hull, F.xbar, F.z, F.w);
    F.u.resize(F.z.size());
    for (std::size_t j = 0; j < F.z.size(); ++j) F.u[j] = 0.5 * (F.z[j] + F.w[j]);
    return F;
}

// the sheared point set of L_t, in body coordinates
inline std::vector<vec2> shadow_points(const ShadowFamily& F, double t) {
    if (!(t >= -1.0 && t <= 1.0)) fail(errkind::invalid_input, "shadow parameter t must lie in [-1,1]");
    std::vector<vec2> pts;
    pts.reserve(2 * F.xbar.size());
    for (std::size_t j = 0; j < F.xbar.size(); ++j) {
        const double shift = (1.0 - t) * F.u[j];
        pts.emplace_back(rotate(vec2(F.xbar[j], F.z[j] - shift), -F.rot));
        pts.emplace_back(rotate(vec2(F.xbar[j], F.w[j] - shift), -F.rot));
    }
    return pts;
}

// support samples of L_t on the family's grid
inline ProfileSupport shadow_body(const ShadowFamily& F, double t) {
    const auto hull = clean_hull(shadow_points(F, t));
    return ProfileSupport(F.grid, support_scan(hull, F.grid));
}

// exact area of the realized L_t (invariant in t up to roundoff)
inline double shadow_volume(const ShadowFamily& F, double t) {
    return polygon_area(clean_hull(shadow_points(F, t)));
}

inline ProfileSupport steiner_symmetral(const ProfileSupport& L, const vec2& e) {
    return shadow_body(make_shadow(L, e), 0.0);
}

// --- Santalo point -----------------------------------------------------------

struct SantaloResult {
    vec2 point;
    double grad_norm = 0.0;
    int iterations = 0;
    vec2 polar_barycentre;  // of (L - point)^polar, by the matching quadrature
};

// Minimizer of z -> (1/n) int (h(v) - <z,v>)^{-n} dH(v) (the polar volume in
// quadrature form) by damped Newton with the exact Hessian; the gradient is
// n times the polar body's barycentre moment, so the stationary point is
// exactly the quadrature's Santalo point.
inline SantaloResult santalo_point_full(const ProfileSupport& L, double grad_tol = 1e-10,
                                        int max_iter = 120) {
    const auto& g = L.grid();
    const int N = g.size();
    std::vector<vec2> us(N);
    for (int k = 0; k < N; ++k) us[k] = unit_dir(g.angle(k));

    vec2 z = barycentre(L);  // interior start
    const double dphi = g.weight();
    std::ostringstream trace;
    auto margin = [&](const vec2& p) {
        double m = 1e300;
        for (int k = 0; k < N; ++k) m = std::min(m, L.h()[k] - dot(p, us[k]));
        return m;
    };
    if (margin(z) <= 0.0)
        fail(errkind::precondition, "santalo: barycentre start is not interior");

    SantaloResult res;
    for (int it = 0; it < max_iter; ++it) {
        vec2 grad(0, 0);
        double hxx = 0, hxy = 0, hyy = 0;
        for (int k = 0; k < N; ++k) {
            const double r = L.h()[k] - dot(z, us[k]);
            const double r3 = 1.0 / (r * r * r);
            const double r4 = r3 / r;
            grad += us[k] * r3;
            hxx += 3.0 * us[k].x * us[k].x * r4;
            hxy += 3.0 * us[k].x * us[k].y * r4;
            hyy += 3.0 * us[k].y * us[k].y * r4;
        }
        grad = grad * dphi;
        res.grad_norm = grad.norm();
        res.iterations = it;
        trace << "  iter " << it << ": z=(" << z.x << "," << z.y << ") |grad|=" << res.grad_norm
              << "\n";
        if (res.grad_norm <= grad_tol) {
            res.point = z;
            // matching-quadrature barycentre of the polar body
            vec2 mom(0, 0);
            double vol = 0.0;
            for (int k = 0; k < N; ++k) {
                const double rho = 1.0 / (L.h()[k] - dot(z, us[k]));
                mom += us[k] * (rho * rho * rho / 3.0);
                vol += 0.5 * rho * rho;
            }
            res.polar_barycentre = mom / vol;  // the dphi weights cancel
            return res;
        }
        const double det = (hxx * hyy - hxy * hxy) * dphi * dphi;
        vec2 step;
        if (det > 1e-30) {
            step = vec2(-(hyy * grad.x - hxy * grad.y), -(hxx * grad.y - hxy * grad.x)) /
                   (det / dphi);
        } else {
            step = grad * (-1.0);  // bisection-damped descent fallback
        }
        double alpha = 1.0;
        while (alpha > 1e-14 && margin(z + step * alpha) <= 0.2 * margin(z)) alpha *= 0.5;
        z += step * alpha;
    }
    fail(errkind::nonconvergence,
         "santalo: Newton failed to reach gradient tolerance; trace:\n" + trace.str());
}

inline vec2 santalo_point(const ProfileSupport& L) { return santalo_point_full(L).point; }

// quadrature polar volume used by the Santalo functional
inline double polar_volume_quadrature(const ProfileSupport& L, const vec2& z) {
    double acc = 0.0;
    for (int k = 0; k < L.size(); ++k) {
        const double r = L.h()[k] - dot(z, unit_dir(L.grid().angle(k)));
        if (!(r > 0.0)) fail(errkind::origin_not_interior, "polar volume: point not interior");
        acc += 0.5 / (r * r);
    }
    return acc * L.grid().weight();
}

// exact polar-body volume about a given interior point
inline double polar_volume_exact(const std::vector<vec2>& hull, const vec2& z) {
    std::vector<vec2> shifted(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) shifted[i] = hull[i] - z;
    return polygon_area(polar_dual(shifted));
}

// --- convexity probes (shadow systems vs polar volume) -----------------------

struct ConvexityProbeReport {
    std::vector<double> ts;
    std::vector<double> inv_polar_volume;      // 1 / V((L_t - s(L_t))^polar)
    std::vector<double> inv_half_plus;         // 1 / V((L_t)^polar  cap  {<x,e> >= 0})
    std::vector<double> inv_half_minus;
    double min_second_diff_polar = 0.0;
    double min_second_diff_half = 0.0;
};

inline ConvexityProbeReport polar_volume_convexity_probe(const ShadowFamily& F,
                                                         const std::vector<double>& ts) {
    ConvexityProbeReport rep;
    rep.ts = ts;
    for (double t : ts) {
        if (!(t >= -1.0 && t <= 1.0))
            fail(errkind::invalid_input, "convexity probe: t out of [-1,1]");
        const auto hull = clean_hull(shadow_points(F, t));
        const auto h = support_scan(hull, F.grid);
        const ProfileSupport Lt(F.grid, h);
        const vec2 s = santalo_point(Lt);
        rep.inv_polar_volume.push_back(1.0 / polar_volume_exact(hull, s));
        const auto dual = clean_hull(polar_dual(hull));
        const auto plus = clip_halfplane(dual, F.e, 0.0);
        const auto minus = clip_halfplane(dual, vec2(-F.e.x, -F.e.y), 0.0);
        if (plus.size() < 3 || minus.size() < 3)
            fail(errkind::origin_not_interior, "convexity probe: polar halfspace piece degenerate");
        rep.inv_half_plus.push_back(1.0 / polygon_area(plus));
        rep.inv_half_minus.push_back(1.0 / polygon_area(minus));
    }
    auto min_d2 = [](const std::vector<double>& v) {
        double m = 1e300;
        for (std::size_t j = 1; j + 1 < v.size(); ++j)
            m = std::min(m, v[j + 1] - 2.0 * v[j] + v[j - 1]);
        return v.size() >= 3 ? m : 0.0;
    };
    rep.min_second_diff_polar = min_d2(rep.inv_polar_volume);
    rep.min_second_diff_half = std::min(min_d2(rep.inv_half_plus), min_d2(rep.inv_half_minus));
    return rep;
}

// --- one-sided polar derivative h'_L ------------------------------------------

struct PolarDerivativeProbe {
    vec2 e, v;
    std::vector<double> ts;          // ladder t_j = 1 - 2^{-j}
    std::vector<double> quotients;   // (h_{L^t}(v) - h_L(v)) / (t - 1)
    double value = 0.0;              // Richardson-extrapolated left derivative
    double max_abs_quotient = 0.0;
};

namespace detail {

// shadow family of the polar body (L^t = ((L^polar)_t)^polar)
inline ShadowFamily make_polar_shadow(const ProfileSupport& L, const vec2& e_in) {
    const vec2 e = e_in / e_in.norm();
    if (!L.origin_interior())
        fail(errkind::origin_not_interior, "polar shadow needs the origin inside L");
    ShadowFamily F{L.grid(), e, pi / 2 - std::atan2(e.y, e.x), {}, {}, {}, {}};
    auto dual = polar_dual(clean_hull(support_polygon_vertices(L.grid(), L.h())));
    for (auto& p : dual) p = rotate(p, F.rot);
    const auto hull = clean_hull(dual);
    detail::build_chords(hull, F.xbar, F.z, F.w);
    F.u.resize(F.z.size());
    for (std::size_t j = 0; j < F.z.size(); ++j) F.u[j] = 0.5 * (F.z[j] + F.w[j]);
    return F;
}

// support field of L^t on the grid: polar of the sheared polar body
inline std::vector<double> polar_shadow_support(const ShadowFamily& Fpolar, double t,
                                                const CircleGrid& g) {
    const auto hull = clean_hull(shadow_points(Fpolar, t));
    // origin must stay interior along the family for the second polarity
    const auto dual = clean_hull(polar_dual(hull));
    return support_scan(dual, g);
}

inline std::vector<int> derivative_ladder_levels() { return {6, 7, 8, 9, 10, 11, 12, 13, 14}; }

// Richardson extrapolation of the deepest levels (step ratio 2, first order
// eliminated upward)
inline double richardson(const std::vector<double>& q) {
    const int use = std::min<int>(4, static_cast<int>(q.size()));
    std::vector<double> row(q.end() - use, q.end());
    for (int k = 1; k < use; ++k)
        for (int i = use - 1; i >= k; --i)
            row[i] = (std::pow(2.0, k) * row[i] - row[i - 1]) / (std::pow(2.0, k) - 1.0);
    return row[use - 1];
}

}  // namespace detail

// full h'_L field at all grid nodes
inline std::vector<double> polar_shadow_left_derivative_field(const ProfileSupport& L,
                                                              const vec2& e,
                                                              double* max_quotient = nullptr) {
    const auto& g = L.grid();
    const auto Fp = detail::make_polar_shadow(L, e);
    const auto base = detail::polar_shadow_support(Fp, 1.0, g);
    const auto levels = detail::derivative_ladder_levels();
    std::vector<std::vector<double>> quot(levels.size());
    double maxq = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double delta = std::pow(2.0, -levels[j]);
        const auto ht = detail::polar_shadow_support(Fp, 1.0 - delta, g);
        quot[j].resize(g.size());
        for (int k = 0; k < g.size(); ++k) {
            quot[j][k] = (ht[k] - base[k]) / (-delta);
            maxq = std::max(maxq, std::abs(quot[j][k]));
        }
    }
    if (!std::isfinite(maxq))
        fail(errkind::nonconvergence, "polar shadow derivative: quotient ladder diverged");
    if (max_quotient) *max_quotient = maxq;
    std::vector<double> out(g.size());
    std::vector<double> ladder(levels.size());
    for (int k = 0; k < g.size(); ++k) {
        for (std::size_t j = 0; j < levels.size(); ++j) ladder[j] = quot[j][k];
        out[k] = detail::richardson(ladder);
    }
    return out;
}

// h'_L at a single direction, with the ladder reported
inline PolarDerivativeProbe polar_shadow_left_derivative(const ProfileSupport& L, const vec2& e,
                                                         const vec2& v) {
    PolarDerivativeProbe probe;
    probe.e = e / e.norm();
    probe.v = v / v.norm();
    const auto Fp = detail::make_polar_shadow(L, probe.e);
    const auto base_hull = clean_hull(shadow_points(Fp, 1.0));
    const double h1 = support_at(polar_dual(base_hull), probe.v);
    for (int level : detail::derivative_ladder_levels()) {
        const double delta = std::pow(2.0, -level);
        const auto hull = clean_hull(shadow_points(Fp, 1.0 - delta));
        const double ht = support_at(polar_dual(hull), probe.v);
        probe.ts.push_back(1.0 - delta);
        probe.quotients.push_back((ht - h1) / (-delta));
        probe.max_abs_quotient = std::max(probe.max_abs_quotient, std::abs(probe.quotients.back()));
    }
    if (!std::isfinite(probe.max_abs_quotient))
        fail(errkind::nonconvergence, "polar shadow derivative: quotient ladder diverged");
    probe.value = detail::richardson(probe.quotients);
    return probe;
}

// --- the two sign integrals ----------------------------------------------------

struct SectionIntegrals {
    double weighted_by_G = 0.0;   // int G(h_L) h'_L dH
    double against_surface = 0.0; // int h'_L dS_L
    double max_abs_quotient = 0.0;
};

inline SectionIntegrals shadow_derivative_integrals(const ProfileSupport& L, const vec2& e,
                                                    const GTab& G) {
    G.require_domain(L.h());
    SectionIntegrals out;
    const auto hprime = polar_shadow_left_derivative_field(L, e, &out.max_abs_quotient);
    const auto ell = support_edge_lengths(L.grid(), L.h());
    for (int k = 0; k < L.size(); ++k) {
        out.weighted_by_G += G.eval(L.h()[k]) * hprime[k] * L.grid().weight();
        out.against_surface += hprime[k] * ell[k];
    }
    return out;
}

// Finite scan for a direction that strictly decreases the polar volume at
// t = 1^- (reported best direction, no exhaustiveness claim).
inline std::pair<vec2, double> steepest_polar_direction(const ProfileSupport& L, int n_dirs = 16) {
    vec2 best_e(1, 0);
    double best = 1e300;
    for (int i = 0; i < n_dirs; ++i) {
        const vec2 e = unit_dir(pi * i / n_dirs);
        double maxq = 0.0;
        const auto hprime = polar_shadow_left_derivative_field(L, e, &maxq);
        const auto ell = support_edge_lengths(L.grid(), L.h());
        double val = 0.0;
        for (int k = 0; k < L.size(); ++k) val += hprime[k] * ell[k];
        if (val < best) {
            best = val;
            best_e = e;
        }
    }
    return {best_e, best};
}

// --- chordwise ball-intersection derivative -------------------------------------

// d/dt V(B_2^2 cap a L_t) |_{t=1^-} by the exact pointwise chord derivative
// integrated over the projection line
inline double ball_intersection_derivative(const ProfileSupport& L, const vec2& e, double a,
                                           int quad_cells = 8192) {
    if (!(a > 0.0)) fail(errkind::invalid_input, "scale a must be positive");
    const auto F = make_shadow(L, e);
    const double xmin = std::max(-1.0, a * F.xbar.front());
    const double xmax = std::min(1.0, a * F.xbar.back());
    if (!(xmin < xmax)) return 0.0;

    auto chord = [&](double xb, double& z, double& w, double& u) {
        // piecewise-linear chords of a*L at xb
        const double x = xb / a;
        auto it = std::upper_bound(F.xbar.begin(), F.xbar.end(), x);
        std::size_t j = it == F.xbar.begin() ? 0 : static_cast<std::size_t>(it - F.xbar.begin()) - 1;
        if (j + 1 >= F.xbar.size()) j = F.xbar.size() - 2;
        const double t = (x - F.xbar[j]) / (F.xbar[j + 1] - F.xbar[j]);
        const double tc = std::clamp(t, 0.0, 1.0);
        z = a * (F.z[j] + tc * (F.z[j + 1] - F.z[j]));
        w = a * (F.w[j] + tc * (F.w[j + 1] - F.w[j]));
        u = 0.5 * (z + w);
    };

    const double dx = (xmax - xmin) / quad_cells;
    double acc = 0.0;
    for (int i = 0; i < quad_cells; ++i) {
        const double xb = xmin + (i + 0.5) * dx;
        const double beta = std::sqrt(std::max(0.0, 1.0 - xb * xb));
        double z, w, u;
        chord(xb, z, w, u);
        const double top = std::min(w, beta);
        const double bot = std::max(z, -beta);
        if (top - bot < 0.0) continue;  // empty chord stays empty nearby
        const double dT = (w < beta || (w == beta && u > 0.0)) ? u : 0.0;
        const double dB = (z > -beta || (z == -beta && u < 0.0)) ? u : 0.0;
        double dphi = dT - dB;
        if (top - bot == 0.0) dphi = std::min(0.0, dphi);
        acc += dphi * dx;
    }
    return acc;
}

}  // namespace firey
