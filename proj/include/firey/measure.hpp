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
#include "firey/polygon.hpp"

namespace firey {

// Surface-area-measure density f(phi_k) >= 0 on the profile grid (units
// length^{n-1}); for bodies of revolution f depends on the latitude only.
struct DensityField {
    CircleGrid grid;
    int n = 2;
    std::vector<double> f;
    int clamped_nodes = 0;  // negatives within tolerance clamped to zero
};

struct ResidualReport {
    std::vector<double> residual;   // pointwise f - G(h), every node
    std::vector<bool> excluded;     // seam-band nodes not counted in norms
    double max_abs = 0.0;
    double l2 = 0.0;
    double argmax_phi = 0.0;
    int argmax_node = 0;
};

namespace detail {

inline void clamp_density(std::vector<double>& f, double tol, int& clamped) {
    clamped = 0;
    double worst = 0.0;
    int worst_node = -1;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k] < 0.0) {
            if (f[k] < worst) {
                worst = f[k];
                worst_node = static_cast<int>(k);
            }
            if (f[k] >= -tol) {
                f[k] = 0.0;
                ++clamped;
            }
        }
    }
    if (worst < -tol) {
        std::ostringstream os;
        os << "density is negative beyond tolerance (min " << worst << " at node " << worst_node
           << ", tol " << tol << ")";
        fail(errkind::non_convex, os.str());
    }
}

}  // namespace detail

// planar curvature-radius density f = h'' + h
inline DensityField density_planar(const ProfileSupport& L, DiffMode mode = DiffMode::spectral) {
    const auto d2 = diff2(L.grid(), L.h(), mode);
    DensityField out{L.grid(), 2, std::vector<double>(L.size()), 0};
    for (int k = 0; k < L.size(); ++k) out.f[k] = d2[k] + L.h()[k];
    const double tol = 1e-6 * std::abs(L.h_max());
    detail::clamp_density(out.f, tol, out.clamped_nodes);
    return out;
}

// Density of a body of revolution about the x2-axis:
//   f(phi) = (h'' + h) * ((h cos phi - h' sin phi) / cos phi)^{n-2},
// phi the latitude from the equator; at the poles the removable singularity is
// filled with the symmetry value (h'' + h)^{n-1}.
inline DensityField density_axisym(const AxisymBody& K, DiffMode mode = DiffMode::spectral) {
    const auto& L = K.profile();
    const int n = K.dim();
    const auto d1 = diff1(L.grid(), L.h(), mode);
    const auto d2 = diff2(L.grid(), L.h(), mode);
    DensityField out{L.grid(), n, std::vector<double>(L.size()), 0};
    const double pole_eps = 1e-8;
    for (int k = 0; k < L.size(); ++k) {
        const double phi = L.grid().angle(k);
        const double c = std::cos(phi), s = std::sin(phi);
        const double meridian = d2[k] + L.h()[k];
        if (std::abs(c) < pole_eps) {
            out.f[k] = std::pow(meridian, n - 1);
            continue;
        }
        const double orbit = (L.h()[k] * c - d1[k] * s) / c;
        out.f[k] = meridian * std::pow(orbit, n - 2);
    }
    const double tol = 1e-6 * std::pow(std::abs(L.h_max()), n - 1);
    detail::clamp_density(out.f, tol, out.clamped_nodes);
    return out;
}

inline DensityField density_of(const AxisymBody& K, DiffMode mode = DiffMode::spectral) {
    return K.dim() == 2 ? density_planar(K.profile(), mode) : density_axisym(K, mode);
}

// --- volumes ----------------------------------------------------------------

// planar volume: exact area of the circumscribed polygon (closed-form value of
// the polar-coordinates integral (1/2) \int rho^2)
inline double volume(const ProfileSupport& L) {
    return support_polygon_area(L.grid(), L.h());
}

// volume of a body of revolution via the first-variation identity
// V = (1/n) \int h dS_K; shares its quadrature with mixed_volume so that
// V(K,K) = V(K) holds structurally and Minkowski's inequality is not degraded
// by mismatched discretizations
inline double volume(const AxisymBody& K, int quad_nodes = 512) {
    if (K.dim() == 2) return volume(K.profile());
    const auto& L = K.profile();
    const int n = K.dim();
    const auto f = density_of(K).f;
    const auto& g = L.grid();
    std::vector<double> gx, gw;
    gauss_legendre(quad_nodes, gx, gw);
    double acc = 0.0;
    for (int q = 0; q < quad_nodes; ++q) {
        const double phi = std::asin(gx[q]);
        acc += gw[q] * trig_interp(g, L.h(), phi) * trig_interp(g, f, phi) *
               std::pow(std::cos(phi), n - 3);
    }
    return acc * orbit_sphere_measure(n) / n;
}

// cross-check route: the polar-coordinates formula
// (1/n) |S^{n-2}| \int rho^n cos^{n-2}(phi) dphi against the exact polygon
// radial of the profile
inline double volume_radial(const AxisymBody& K, int quad_nodes = 512) {
    const auto& L = K.profile();
    if (!L.origin_interior())
        fail(errkind::origin_not_interior, "volume needs the origin strictly inside");
    if (K.dim() == 2) return volume(L);
    const auto verts = support_polygon_vertices(L.grid(), L.h());
    const int n = K.dim();
    std::vector<double> gx, gw;
    gauss_legendre(quad_nodes, gx, gw);
    double acc = 0.0;
    for (int q = 0; q < quad_nodes; ++q) {
        const double phi = std::asin(gx[q]);
        const double rho = radial_at(verts, unit_dir(phi));
        // cos^{n-2} dphi = cos^{n-3} ds
        acc += gw[q] * std::pow(rho, n) * std::pow(std::cos(phi), n - 3);
    }
    return acc * orbit_sphere_measure(n) / n;
}

// --- mixed volumes ------------------------------------------------------------

// planar first mixed volume V(L,M) = (1/n) \int h_L dS_M: the exact mixed area
// of the two support polygons on their shared grid
inline double mixed_volume(const ProfileSupport& L, const ProfileSupport& M) {
    if (L.grid() != M.grid()) fail(errkind::grid_mismatch, "mixed volume needs a common grid");
    return support_mixed_area(L.grid(), L.h(), M.h());
}

// axisymmetric first mixed volume via (1/n) \int h_L f_M dH, Gauss-Legendre in
// s = sin(phi) with trigonometric interpolation of the fields
inline double mixed_volume(const AxisymBody& L, const AxisymBody& M, int quad_nodes = 512) {
    if (L.dim() != M.dim()) fail(errkind::grid_mismatch, "mixed volume needs equal dimensions");
    if (L.profile().grid() != M.profile().grid())
        fail(errkind::grid_mismatch, "mixed volume needs a common grid");
    if (L.dim() == 2) return mixed_volume(L.profile(), M.profile());
    const int n = L.dim();
    const auto fM = density_of(M).f;
    std::vector<double> gx, gw;
    gauss_legendre(quad_nodes, gx, gw);
    double acc = 0.0;
    const auto& g = L.profile().grid();
    for (int q = 0; q < quad_nodes; ++q) {
        const double phi = std::asin(gx[q]);
        const double hl = trig_interp(g, L.profile().h(), phi);
        const double fm = trig_interp(g, fM, phi);
        acc += gw[q] * hl * fm * std::pow(std::cos(phi), n - 3);
    }
    return acc * orbit_sphere_measure(n) / n;
}

// --- surface-measure barycentre closure --------------------------------------

// planar: sum of u_k * ell_k, the exact edge-vector closure of the polygon
inline vec2 surface_measure_barycentre(const ProfileSupport& L) {
    const auto ell = support_edge_lengths(L.grid(), L.h());
    vec2 acc(0, 0);
    for (int k = 0; k < L.size(); ++k) acc += unit_dir(L.grid().angle(k)) * ell[k];
    return acc;
}

inline double surface_total(const ProfileSupport& L) {
    const auto ell = support_edge_lengths(L.grid(), L.h());
    double acc = 0.0;
    for (double e : ell) acc += e;
    return acc;
}

// axisymmetric closure: only the e2-component can be nonzero;
// returns (integral of <v,e2> f dH, integral of f dH)
inline std::pair<double, double> surface_measure_barycentre(const AxisymBody& K,
                                                            int quad_nodes = 512) {
    const int n = K.dim();
    const auto f = density_of(K).f;
    const auto& g = K.profile().grid();
    std::vector<double> gx, gw;
    gauss_legendre(quad_nodes, gx, gw);
    double moment = 0.0, total = 0.0;
    for (int q = 0; q < quad_nodes; ++q) {
        const double s = gx[q];
        const double phi = std::asin(s);
        const double fv = trig_interp(g, f, phi);
        const double w = gw[q] * std::pow(std::cos(phi), n - 3);
        moment += w * fv * s;
        total += w * fv;
    }
    const double measure = orbit_sphere_measure(n);
    return {moment * measure, total * measure};
}

// --- Monge-Ampere residual -----------------------------------------------------

namespace detail {

inline ResidualReport residual_core(const CircleGrid& g, const std::vector<double>& h,
                                    const std::vector<double>& f, int n, const GTab& G,
                                    const std::vector<double>& seam_angles, int seam_band_cells,
                                    const std::vector<int>& excluded_nodes);

}  // namespace detail

// pointwise residual r = f_K - G(h_K) with optional seam-band exclusion; norms
// are taken over the included nodes with the sphere's latitude weights
inline ResidualReport monge_ampere_residual(const AxisymBody& K, const GTab& G,
                                            const std::vector<double>& seam_angles = {},
                                            int seam_band_cells = 0,
                                            DiffMode mode = DiffMode::spectral,
                                            const std::vector<int>& excluded_nodes = {}) {
    G.require_domain(K.profile().h());
    const auto f = density_of(K, mode).f;
    return detail::residual_core(K.profile().grid(), K.profile().h(), f, K.dim(), G, seam_angles,
                                 seam_band_cells, excluded_nodes);
}

inline ResidualReport monge_ampere_residual(const ProfileSupport& L, const GTab& G,
                                            const std::vector<double>& seam_angles = {},
                                            int seam_band_cells = 0,
                                            DiffMode mode = DiffMode::spectral,
                                            const std::vector<int>& excluded_nodes = {}) {
    G.require_domain(L.h());
    const auto f = density_planar(L, mode).f;
    return detail::residual_core(L.grid(), L.h(), f, 2, G, seam_angles, seam_band_cells,
                                 excluded_nodes);
}

namespace detail {

inline ResidualReport residual_core(const CircleGrid& g, const std::vector<double>& h,
                                    const std::vector<double>& f, int n, const GTab& G,
                                    const std::vector<double>& seam_angles, int seam_band_cells,
                                    const std::vector<int>& excluded_nodes) {
    ResidualReport rep;
    rep.residual.resize(g.size());
    rep.excluded.assign(g.size(), false);
    for (double seam : seam_angles) {
        const int c = g.nearest(seam);
        for (int off = -seam_band_cells; off <= seam_band_cells; ++off)
            rep.excluded[g.wrap(c + off)] = true;
    }
    for (int k : excluded_nodes) rep.excluded[g.wrap(k)] = true;
    double l2_num = 0.0, l2_den = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const double r = f[k] - G.eval(h[k]);
        rep.residual[k] = r;
        if (rep.excluded[k]) continue;
        const double phi = g.angle(k);
        const double w = g.weight() * std::pow(std::abs(std::cos(phi)), n - 2);
        l2_num += w * r * r;
        l2_den += w;
        if (std::abs(r) > rep.max_abs) {
            rep.max_abs = std::abs(r);
            rep.argmax_node = k;
            rep.argmax_phi = phi;
        }
    }
    rep.l2 = l2_den > 0.0 ? std::sqrt(l2_num / l2_den) : 0.0;
    return rep;
}

}  // namespace detail

}  // namespace firey
