#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "firey/errors.hpp"
#include "firey/grid.hpp"
#include "firey/mathutil.hpp"

namespace firey {

// Exact convex-polygon calculus. A support sample vector on a CircleGrid
// determines the circumscribed polygon P = {x : <x,u_k> <= h_k for all k};
// areas, mixed areas, polars, clips and shears of that polygon are closed-form,
// so the inequality-type checks downstream are exact convex geometry instead of
// quadrature approximations.

// vertex v_k = intersection of the supporting lines k and k+1, CCW cycle
inline std::vector<vec2> support_polygon_vertices(const CircleGrid& g, const std::vector<double>& h) {
    const int n = g.size();
    if (static_cast<int>(h.size()) != n) fail(errkind::grid_mismatch, "support samples != grid size");
    std::vector<vec2> v(n);
    const double s = std::sin(g.step());
    for (int k = 0; k < n; ++k) {
        const int k1 = g.wrap(k + 1);
        const double pa = g.angle(k), pb = g.angle(k1);
        v[k] = vec2(h[k] * std::sin(pb) - h[k1] * std::sin(pa),
                    -h[k] * std::cos(pb) + h[k1] * std::cos(pa)) / s;
    }
    return v;
}

// length of the polygon edge lying on supporting line k; nonnegative iff the
// samples are a valid support function on this grid (the discrete convexity
// certificate, the exact form of h'' + h >= 0)
inline std::vector<double> support_edge_lengths(const CircleGrid& g, const std::vector<double>& h) {
    const int n = g.size();
    if (static_cast<int>(h.size()) != n) fail(errkind::grid_mismatch, "support samples != grid size");
    const double c = std::cos(g.step()), s = std::sin(g.step());
    std::vector<double> ell(n);
    for (int k = 0; k < n; ++k)
        ell[k] = (h[g.wrap(k + 1)] - 2.0 * c * h[k] + h[g.wrap(k - 1)]) / s;
    return ell;
}

// signed shoelace area of a vertex cycle (positive for CCW)
inline double polygon_area(const std::vector<vec2>& v) {
    double acc = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) acc += cross(v[i], v[(i + 1) % n]);
    return 0.5 * acc;
}

inline vec2 polygon_centroid(const std::vector<vec2>& v) {
    const std::size_t n = v.size();
    double a = 0.0;
    vec2 m(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const vec2& p = v[i];
        const vec2& q = v[(i + 1) % n];
        const double c = cross(p, q);
        a += c;
        m += (p + q) * c;
    }
    if (std::abs(a) < 1e-300) fail(errkind::invalid_input, "degenerate polygon has no centroid");
    return m / (3.0 * a);
}

// exact mixed area V(L,M) = (1/2) sum h_L(u_k) * edge_M(k) of two support
// polygons sharing a grid
inline double support_mixed_area(const CircleGrid& g, const std::vector<double>& hL,
                                 const std::vector<double>& hM) {
    const auto ellM = support_edge_lengths(g, hM);
    double acc = 0.0;
    for (int k = 0; k < g.size(); ++k) acc += hL[k] * ellM[k];
    return 0.5 * acc;
}

inline double support_polygon_area(const CircleGrid& g, const std::vector<double>& h) {
    return support_mixed_area(g, h, h);
}

// monotone-chain convex hull, CCW, collinear points dropped
inline std::vector<vec2> convex_hull(std::vector<vec2> pts) {
    if (pts.size() < 3) fail(errkind::invalid_input, "hull needs >= 3 points");
    std::sort(pts.begin(), pts.end(), [](const vec2& a, const vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const vec2& a, const vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) fail(errkind::invalid_input, "hull degenerate");
    std::vector<vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) fail(errkind::invalid_input, "hull degenerate");
    return hull;
}

// Exact hull followed by removal of roundoff-scale features: a vertex goes if
// its triangle with the surviving neighbors has |area| below rel_tol * scale^2.
// Real corners have macroscopic turn area and are never touched; the noise
// micro-edges that would scramble a dual polygon's vertex order are flattened.
inline std::vector<vec2> clean_hull(const std::vector<vec2>& pts, double rel_tol = 1e-12) {
    std::vector<vec2> v = convex_hull(pts);
    double scale = 0.0;
    for (const auto& p : v) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
    const double tol = rel_tol * scale * scale;
    const int m = static_cast<int>(v.size());
    std::vector<int> prv(m), nxt(m);
    std::vector<char> alive(m, 1), queued(m, 1);
    for (int i = 0; i < m; ++i) {
        prv[i] = (i + m - 1) % m;
        nxt[i] = (i + 1) % m;
    }
    int count = m;
    std::vector<int> work(m);
    for (int i = 0; i < m; ++i) work[i] = i;
    while (!work.empty() && count > 3) {
        const int b = work.back();
        work.pop_back();
        queued[b] = 0;
        if (!alive[b]) continue;
        const int a = prv[b], c = nxt[b];
        if (std::abs(cross(v[b] - v[a], v[c] - v[a])) <= tol) {
            alive[b] = 0;
            nxt[a] = c;
            prv[c] = a;
            --count;
            for (int t : {a, c}) {
                if (!queued[t]) {
                    queued[t] = 1;
                    work.push_back(t);
                }
            }
        }
    }
    std::vector<vec2> out;
    out.reserve(count);
    int start = 0;
    while (!alive[start]) ++start;
    for (int i = start, steps = 0; steps < count; i = nxt[i], ++steps) out.push_back(v[i]);
    return out;
}

inline double support_at(const std::vector<vec2>& v, const vec2& dir) {
    double best = -1e300;
    for (const auto& p : v) best = std::max(best, dot(p, dir));
    return best;
}

// support values of a CCW vertex cycle at every grid direction; rotating-scan,
// O(N + V)
inline std::vector<double> support_scan(const std::vector<vec2>& v, const CircleGrid& g) {
    const int n = g.size();
    const int m = static_cast<int>(v.size());
    std::vector<double> h(n);
    // start at the argmax for direction 0
    int idx = 0;
    {
        const vec2 u = unit_dir(g.angle(0));
        double best = dot(v[0], u);
        for (int i = 1; i < m; ++i) {
            const double d = dot(v[i], u);
            if (d > best) {
                best = d;
                idx = i;
            }
        }
    }
    for (int k = 0; k < n; ++k) {
        const vec2 u = unit_dir(g.angle(k));
        int steps = 0;
        while (steps++ <= m && dot(v[(idx + 1) % m], u) >= dot(v[idx], u)) idx = (idx + 1) % m;
        h[k] = dot(v[idx], u);
    }
    return h;
}

// radial values rho(u_k) of a CCW polygon containing the origin; advances the
// exit edge with the ray direction, O(N + V)
inline std::vector<double> radial_scan(const std::vector<vec2>& v, const CircleGrid& g) {
    const int n = g.size();
    const int m = static_cast<int>(v.size());
    std::vector<double> rho(n);
    auto hit = [&](int e, const vec2& u) -> double {
        const vec2& a = v[e];
        const vec2& b = v[(e + 1) % m];
        const double den = cross(u, b - a);
        if (den == 0.0) return -1.0;
        return cross(a, b) / den;
    };
    auto contains_dir = [&](int e, const vec2& u) {
        // ray direction angularly between vertices a and b, roundoff-tolerant
        const vec2& a = v[e];
        const vec2& b = v[(e + 1) % m];
        const double tol_a = 1e-12 * a.norm(), tol_b = 1e-12 * b.norm();
        return cross(a, u) >= -tol_a && cross(u, b) >= -tol_b;
    };
    int e = 0;
    for (int k = 0; k < n; ++k) {
        const vec2 u = unit_dir(g.angle(k));
        int steps = 0;
        while (steps <= m && !contains_dir(e, u)) {
            e = (e + 1) % m;
            ++steps;
        }
        if (steps > m) fail(errkind::origin_not_interior, "radial ray found no exit edge");
        const double t = hit(e, u);
        if (!(t > 0.0)) fail(errkind::origin_not_interior, "radial ray exits at nonpositive distance");
        rho[k] = t;
    }
    return rho;
}

// radial at one arbitrary direction (naive walk)
inline double radial_at(const std::vector<vec2>& v, const vec2& u) {
    const int m = static_cast<int>(v.size());
    for (int e = 0; e < m; ++e) {
        if (cross(v[e], u) >= 0.0 && cross(u, v[(e + 1) % m]) >= 0.0) {
            const double den = cross(u, v[(e + 1) % m] - v[e]);
            if (den == 0.0) continue;
            return cross(v[e], v[(e + 1) % m]) / den;
        }
    }
    fail(errkind::origin_not_interior, "radial ray found no exit edge");
}

// Polar (dual) polygon of a CCW polygon with origin interior: each edge (a,b)
// dualizes to the vertex w with <w,a> = <w,b> = 1; the result is CCW.
inline std::vector<vec2> polar_dual(const std::vector<vec2>& v) {
    const int m = static_cast<int>(v.size());
    // scale-relative dedupe; near-coincident vertices would make edge lines ill-defined
    double scale = 0.0;
    for (const auto& p : v) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
    std::vector<vec2> w;
    w.reserve(m);
    for (int i = 0; i < m; ++i) {
        const vec2& a = v[i];
        const vec2& b = v[(i + 1) % m];
        if ((b - a).norm() <= 1e-13 * scale) continue;
        const double c = cross(a, b);
        if (c <= 0.0) fail(errkind::origin_not_interior, "polar dual requires origin strictly inside");
        w.emplace_back((b.y - a.y) / c, (a.x - b.x) / c);
    }
    if (w.size() < 3) fail(errkind::invalid_input, "polar dual degenerate");
    return w;
}

// clip a CCW convex polygon by the halfplane {x : <x,e> >= c}
inline std::vector<vec2> clip_halfplane(const std::vector<vec2>& v, const vec2& e, double c) {
    std::vector<vec2> out;
    const std::size_t m = v.size();
    out.reserve(m + 2);
    for (std::size_t i = 0; i < m; ++i) {
        const vec2& p = v[i];
        const vec2& q = v[(i + 1) % m];
        const double dp = dot(p, e) - c;
        const double dq = dot(q, e) - c;
        if (dp >= 0.0) out.push_back(p);
        if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

}  // namespace firey
