#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "firey/errors.hpp"
#include "firey/grid.hpp"
#include "firey/mathutil.hpp"
#include "firey/polygon.hpp"

namespace firey {

struct PointCloud {
    std::vector<vec2> points;
};

// Sampled support function h(phi_k) of a planar convex body on a uniform
// periodic grid; the universal body representation. Construction rejects
// sample vectors that fail the discrete convexity certificate
// (second-difference estimate of h'' + h below -tol_convex).
class ProfileSupport {
public:
    static constexpr double default_tol_convex_rel = 1e-6;

    ProfileSupport(CircleGrid grid, std::vector<double> h,
                   double tol_convex_rel = default_tol_convex_rel)
        : grid_(grid), h_(std::move(h)) {
        if (static_cast<int>(h_.size()) != grid_.size())
            fail(errkind::grid_mismatch, "support samples != grid size");
        double hmax = 0.0;
        for (double v : h_) {
            if (!std::isfinite(v)) fail(errkind::invalid_input, "support sample not finite");
            hmax = std::max(hmax, std::abs(v));
        }
        const double tol = tol_convex_rel * hmax;
        const double dphi = grid_.step();
        std::vector<int> offenders;
        for (int k = 0; k < grid_.size(); ++k) {
            const double second =
                (h_[grid_.wrap(k + 1)] - 2.0 * h_[k] + h_[grid_.wrap(k - 1)]) / (dphi * dphi);
            if (second + h_[k] < -tol) offenders.push_back(k);
        }
        if (!offenders.empty()) {
            std::ostringstream os;
            os << "support samples violate convexity (h''+h < -" << tol << ") at "
               << offenders.size() << " node(s):";
            for (std::size_t i = 0; i < offenders.size() && i < 8; ++i) os << ' ' << offenders[i];
            if (offenders.size() > 8) os << " ...";
            fail(errkind::non_convex, os.str());
        }
        // reject lower-dimensional bodies
        if (support_polygon_area(grid_, h_) <= 0.0)
            fail(errkind::invalid_input, "support samples describe a degenerate (zero-area) body");
    }

    const CircleGrid& grid() const { return grid_; }
    const std::vector<double>& h() const { return h_; }
    int size() const { return grid_.size(); }

    double h_min() const { return *std::min_element(h_.begin(), h_.end()); }
    double h_max() const { return *std::max_element(h_.begin(), h_.end()); }
    bool origin_interior() const { return h_min() > 0.0; }

    // support value at an arbitrary angle (trigonometric interpolation)
    double h_at(double phi) const { return trig_interp(grid_, h_, phi); }

    // smallest value of the discrete h''+h estimate (curvature-radius margin)
    double convexity_margin() const {
        const double dphi = grid_.step();
        double m = 1e300;
        for (int k = 0; k < grid_.size(); ++k) {
            const double second =
                (h_[grid_.wrap(k + 1)] - 2.0 * h_[k] + h_[grid_.wrap(k - 1)]) / (dphi * dphi);
            m = std::min(m, second + h_[k]);
        }
        return m;
    }

private:
    CircleGrid grid_;
    std::vector<double> h_;
};

inline ProfileSupport translate(const ProfileSupport& L, const vec2& a) {
    std::vector<double> h = L.h();
    for (int k = 0; k < L.size(); ++k) h[k] += dot(a, unit_dir(L.grid().angle(k)));
    return ProfileSupport(L.grid(), std::move(h));
}

inline ProfileSupport scale(const ProfileSupport& L, double s) {
    if (!(s > 0.0)) fail(errkind::invalid_input, "scale factor must be positive");
    std::vector<double> h = L.h();
    for (double& v : h) v *= s;
    return ProfileSupport(L.grid(), std::move(h));
}

// Body of revolution in R^n about the x2-axis, carried by its planar profile.
// For n = 2 the body is just the profile.
class AxisymBody {
public:
    AxisymBody(int n, ProfileSupport profile, double sym_tol_rel = 1e-9)
        : n_(n), profile_(std::move(profile)) {
        if (n < 2) fail(errkind::invalid_input, "ambient dimension must be >= 2");
        // axial symmetry: h(pi - phi) = h(phi); pi - phi_k maps onto node N/2 - k
        const auto& g = profile_.grid();
        const auto& h = profile_.h();
        const double tol = sym_tol_rel * profile_.h_max();
        for (int k = 0; k < g.size(); ++k) {
            const int mirrored = g.wrap(g.size() / 2 - k);
            if (std::abs(h[k] - h[mirrored]) > tol)
                fail(errkind::precondition,
                     "profile is not symmetric about the x2-axis (node " + std::to_string(k) + ")");
        }
    }

    int dim() const { return n_; }
    const ProfileSupport& profile() const { return profile_; }

private:
    int n_;
    ProfileSupport profile_;
};

struct SandwichReport {
    vec2 center;
    double r_in = 0.0;
    double r_out = 0.0;
    double ratio() const { return r_out / r_in; }
};

// h(phi_k) = max over points of <(cos phi_k, sin phi_k), p>
inline ProfileSupport support_from_points(const PointCloud& P, const CircleGrid& grid) {
    if (P.points.empty()) fail(errkind::invalid_input, "point cloud is empty");
    std::vector<double> h(grid.size(), -1e300);
    for (int k = 0; k < grid.size(); ++k) {
        const vec2 u = unit_dir(grid.angle(k));
        for (const auto& p : P.points) h[k] = std::max(h[k], dot(p, u));
    }
    return ProfileSupport(grid, std::move(h));
}

// rho_L(v) = min over grid directions u of h(u)/<u,v> over <u,v> > 0; this is
// the exact radial function of the circumscribed polygon (and 1/h of its polar)
inline double radial_from_support(const ProfileSupport& L, const vec2& v) {
    if (!L.origin_interior())
        fail(errkind::origin_not_interior, "radial function needs the origin strictly inside (h > 0)");
    const double vn = v.norm();
    if (!(vn > 0.0)) fail(errkind::invalid_input, "radial direction must be nonzero");
    const vec2 u = v / vn;
    double best = 1e300;
    for (int k = 0; k < L.size(); ++k) {
        const double d = dot(unit_dir(L.grid().angle(k)), u);
        if (d > 0.0) best = std::min(best, L.h()[k] / d);
    }
    return best;
}

// radial values at every grid node (exact polygon radial, O(N))
inline std::vector<double> radial_samples(const ProfileSupport& L) {
    if (!L.origin_interior())
        fail(errkind::origin_not_interior, "radial function needs the origin strictly inside (h > 0)");
    return radial_scan(support_polygon_vertices(L.grid(), L.h()), L.grid());
}

// support samples of the polar body via the reciprocal-radial identity
// h_polar(v) = 1/rho(v)
inline ProfileSupport polar_support(const ProfileSupport& L) {
    auto rho = radial_samples(L);
    std::vector<double> hp(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) hp[k] = 1.0 / rho[k];
    return ProfileSupport(L.grid(), std::move(hp));
}

// boundary point supporting L in direction (cos phi, sin phi):
// p(phi) = h(phi) u(phi) + h'(phi) u_perp(phi)
inline vec2 gauss_preimage(const ProfileSupport& L, double phi) {
    const auto dh = diff1(L.grid(), L.h());
    const double h = trig_interp(L.grid(), L.h(), phi);
    const double hp = trig_interp(L.grid(), dh, phi);
    const vec2 u = unit_dir(phi);
    return u * h + perp(u) * hp;
}

// all grid nodes at once (one derivative pass)
inline std::vector<vec2> gauss_preimage_samples(const ProfileSupport& L) {
    const auto dh = diff1(L.grid(), L.h());
    std::vector<vec2> p(L.size());
    for (int k = 0; k < L.size(); ++k) {
        const vec2 u = unit_dir(L.grid().angle(k));
        p[k] = u * L.h()[k] + perp(u) * dh[k];
    }
    return p;
}

// area centroid; the closed-form evaluation of the polar-coordinates moment
// integral for the sampled polygon (exact for discs and polygons alike)
inline vec2 barycentre(const ProfileSupport& L) {
    return polygon_centroid(support_polygon_vertices(L.grid(), L.h()));
}

inline SandwichReport sandwich(const ProfileSupport& L) {
    const vec2 b = barycentre(L);
    const ProfileSupport centered = translate(L, vec2(-b.x, -b.y));
    const auto rho = radial_samples(centered);
    SandwichReport rep;
    rep.center = b;
    rep.r_in = *std::min_element(rho.begin(), rho.end());
    rep.r_out = *std::max_element(rho.begin(), rho.end());
    return rep;
}

// --- stock profiles --------------------------------------------------------

inline ProfileSupport profile_ball(const CircleGrid& g, double r, const vec2& center = vec2(0, 0)) {
    if (!(r > 0.0)) fail(errkind::invalid_input, "ball radius must be positive");
    std::vector<double> h(g.size());
    for (int k = 0; k < g.size(); ++k) h[k] = r + dot(center, unit_dir(g.angle(k)));
    return ProfileSupport(g, std::move(h));
}

// centered ellipse with semi-axes a (along angle psi) and b
inline ProfileSupport profile_ellipse(const CircleGrid& g, double a, double b, double psi = 0.0) {
    if (!(a > 0.0) || !(b > 0.0)) fail(errkind::invalid_input, "ellipse semi-axes must be positive");
    std::vector<double> h(g.size());
    for (int k = 0; k < g.size(); ++k) {
        const double c = std::cos(g.angle(k) - psi), s = std::sin(g.angle(k) - psi);
        h[k] = std::sqrt(a * a * c * c + b * b * s * s);
    }
    return ProfileSupport(g, std::move(h));
}

}  // namespace firey
