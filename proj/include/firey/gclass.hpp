#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "firey/errors.hpp"
#include "firey/mathutil.hpp"

namespace firey {

// Tabulated positive function G on [c1, c2] with antiderivative data H and the
// dimension parameter n of the admissibility certificate ("theta G + n H
// strictly increasing"). Construction validates positivity and computes H;
// certificate checks are explicit operations so that failing tables can be
// examined.
class GTab {
public:
    static constexpr int default_resolution = 4096;

    GTab(int n, double c1, double c2, std::vector<double> samples)
        : n_(n), c1_(c1), c2_(c2), g_(std::move(samples)) {
        if (n_ < 1) fail(errkind::invalid_input, "GTab: n must be >= 1");
        if (!(0.0 < c1_ && c1_ < c2_)) fail(errkind::invalid_input, "GTab: need 0 < c1 < c2");
        if (g_.size() < 16) fail(errkind::invalid_input, "GTab: too few samples");
        for (double v : g_)
            if (!(v > 0.0)) fail(errkind::invalid_input, "GTab: G must be strictly positive");
        build_tables();
    }

    int n() const { return n_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::size_t size() const { return g_.size(); }
    double step() const { return (c2_ - c1_) / (static_cast<double>(g_.size()) - 1.0); }
    double node(std::size_t k) const { return c1_ + step() * static_cast<double>(k); }
    const std::vector<double>& samples() const { return g_; }
    // endpoint-corrected cumulative trapezoid of G from c1 (H(c1) = 0)
    const std::vector<double>& antiderivative() const { return h_; }

    bool contains(double theta) const { return theta >= c1_ - 1e-12 && theta <= c2_ + 1e-12; }

    void require_domain(const std::vector<double>& thetas) const {
        std::vector<double> bad;
        for (double t : thetas)
            if (!contains(t)) bad.push_back(t);
        if (!bad.empty()) {
            std::ostringstream os;
            os << "values outside G domain [" << c1_ << ", " << c2_ << "]:";
            for (std::size_t i = 0; i < bad.size() && i < 6; ++i) os << ' ' << bad[i];
            if (bad.size() > 6) os << " ... (" << bad.size() << " total)";
            fail(errkind::domain_violation, os.str());
        }
    }

    double eval(double theta) const {
        if (!contains(theta)) require_domain({theta});
        return interp_.eval(std::clamp(theta, c1_, c2_));
    }

    double deriv(double theta) const {
        if (!contains(theta)) require_domain({theta});
        return interp_.deriv(std::clamp(theta, c1_, c2_));
    }

    double eval_H(double theta) const {
        if (!contains(theta)) require_domain({theta});
        return h_interp_.eval(std::clamp(theta, c1_, c2_));
    }

    double max_G() const { return *std::max_element(g_.begin(), g_.end()); }
    double min_G() const { return *std::min_element(g_.begin(), g_.end()); }

private:
    void build_tables() {
        const std::size_t m = g_.size();
        const double dt = step();
        h_.assign(m, 0.0);
        for (std::size_t k = 1; k < m; ++k) h_[k] = h_[k - 1] + 0.5 * dt * (g_[k - 1] + g_[k]);
        // Euler-Maclaurin endpoint correction; the raw trapezoid's O(dt^2) bias
        // would read an exactly-flat certificate as slowly increasing
        auto slope = [&](std::size_t k) -> double {
            if (k == 0) return (-3.0 * g_[0] + 4.0 * g_[1] - g_[2]) / (2.0 * dt);
            if (k + 1 == m) return (3.0 * g_[m - 1] - 4.0 * g_[m - 2] + g_[m - 3]) / (2.0 * dt);
            return (g_[k + 1] - g_[k - 1]) / (2.0 * dt);
        };
        const double s0 = slope(0);
        for (std::size_t k = 1; k < m; ++k) h_[k] -= dt * dt / 12.0 * (slope(k) - s0);
        std::vector<double> x(m);
        for (std::size_t k = 0; k < m; ++k) x[k] = node(k);
        interp_ = pchip(x, g_);
        h_interp_ = pchip(x, h_);
    }

    int n_;
    double c1_, c2_;
    std::vector<double> g_, h_;
    pchip interp_, h_interp_;
};

// --- stock tables ----------------------------------------------------------

inline GTab gtab_from_function(int n, double c1, double c2, const std::function<double(double)>& f,
                               int resolution = GTab::default_resolution) {
    std::vector<double> s(resolution);
    for (int k = 0; k < resolution; ++k)
        s[k] = f(c1 + (c2 - c1) * static_cast<double>(k) / (resolution - 1.0));
    return GTab(n, c1, c2, std::move(s));
}

inline GTab gtab_power(int n, double p, double c1 = 0.3, double c2 = 4.0,
                       int resolution = GTab::default_resolution) {
    return gtab_from_function(n, c1, c2, [p](double t) { return std::pow(t, p); }, resolution);
}

inline GTab gtab_const(int n, double c, double c1 = 0.3, double c2 = 4.0,
                       int resolution = GTab::default_resolution) {
    return gtab_from_function(n, c1, c2, [c](double) { return c; }, resolution);
}

inline GTab gtab_increasing_demo(int n, double c1 = 0.3, double c2 = 4.0,
                                 int resolution = GTab::default_resolution) {
    return gtab_from_function(n, c1, c2, [](double t) { return 1.0 + std::tanh(t - 1.0); },
                              resolution);
}

// "power:p", "const:c", "increasing:demo"
inline GTab gtab_preset(const std::string& name, int n, double c1 = 0.3, double c2 = 4.0,
                        int resolution = GTab::default_resolution) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (head == "power") return gtab_power(n, std::stod(arg), c1, c2, resolution);
    if (head == "const") return gtab_const(n, std::stod(arg), c1, c2, resolution);
    if (head == "increasing" && arg == "demo") return gtab_increasing_demo(n, c1, c2, resolution);
    fail(errkind::invalid_input, "unknown G preset '" + name + "'");
}

// --- admissibility certificate ---------------------------------------------

struct AnCertificate {
    bool passed = false;
    // smallest forward difference of F = theta G + n H across the table
    double min_forward_diff = 0.0;
    // smallest total gain of F over any window of window_size samples
    double min_window_gain = 0.0;
    int window_size = 16;
    double scale = 0.0;
    // first violating subinterval when failed
    double violation_lo = 0.0, violation_hi = 0.0;
};

// Certifies that theta G(theta) + n H(theta) is strictly increasing across the
// samples: forward differences above -1e-12*scale and every 16-sample window
// gains more than 1e-9*scale. The window rule distinguishes flat-to-tolerance
// (rejected) from genuinely increasing data.
inline AnCertificate check_an(const GTab& G) {
    const std::size_t m = G.size();
    std::vector<double> F(m);
    for (std::size_t k = 0; k < m; ++k)
        F[k] = G.node(k) * G.samples()[k] + G.n() * G.antiderivative()[k];
    AnCertificate cert;
    double fmax = 0.0;
    for (double v : F) fmax = std::max(fmax, std::abs(v));
    cert.scale = std::max(fmax, 1e-300);
    const double diff_tol = -1e-12 * cert.scale;
    const double window_tol = 1e-9 * cert.scale;
    cert.min_forward_diff = 1e300;
    cert.min_window_gain = 1e300;
    int first_bad = -1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double d = F[k + 1] - F[k];
        cert.min_forward_diff = std::min(cert.min_forward_diff, d);
        if (d < diff_tol && first_bad < 0) first_bad = static_cast<int>(k);
    }
    const int w = cert.window_size;
    for (std::size_t k = 0; k + w < m; ++k) {
        const double gain = F[k + w] - F[k];
        cert.min_window_gain = std::min(cert.min_window_gain, gain);
        if (gain <= window_tol && first_bad < 0) first_bad = static_cast<int>(k);
    }
    cert.passed = cert.min_forward_diff >= diff_tol && cert.min_window_gain > window_tol;
    if (!cert.passed) {
        const int k = std::max(first_bad, 0);
        cert.violation_lo = G.node(k);
        cert.violation_hi = G.node(std::min(m - 1, static_cast<std::size_t>(k) + w));
    }
    return cert;
}

// sufficient differential condition theta G' + (n+1) G > 0, evaluated with
// centered differences on the table; returns the minimum over nodes
inline double an_sufficient_margin(const GTab& G) {
    const std::size_t m = G.size();
    const double dt = G.step();
    double worst = 1e300;
    for (std::size_t k = 0; k < m; ++k) {
        double gp;
        if (k == 0) gp = (G.samples()[1] - G.samples()[0]) / dt;
        else if (k + 1 == m) gp = (G.samples()[m - 1] - G.samples()[m - 2]) / dt;
        else gp = (G.samples()[k + 1] - G.samples()[k - 1]) / (2.0 * dt);
        worst = std::min(worst, G.node(k) * gp + (G.n() + 1) * G.samples()[k]);
    }
    return worst;
}

// --- extension to (0, Theta] ------------------------------------------------

// Extension of an admissible G on [a,b] to all of (0, Theta]: the antiderivative
// continues linearly with slopes G(a) below a and G(b) above b, so
// F = theta*Gbar + n*Hbar is strictly increasing with F(0) = 0 and
// Hbar(theta) = integral_0^1 r^{n-1} F(r theta) dr.
class AnExtension {
public:
    AnExtension(GTab base, double Theta) : base_(std::move(base)), theta_max_(Theta) {
        if (!(Theta > base_.c2())) fail(errkind::invalid_input, "extension Theta must exceed c2");
        const auto cert = check_an(base_);
        if (!cert.passed)
            fail(errkind::precondition,
                 "extension requires the admissibility certificate to pass on [c1, c2]");
        ga_ = base_.samples().front();
        gb_ = base_.samples().back();
        hb_ = base_.antiderivative().back();
    }

    const GTab& base() const { return base_; }
    double theta_max() const { return theta_max_; }

    double eval_G(double theta) const {
        if (!(theta > 0.0) || theta > theta_max_ + 1e-12)
            fail(errkind::domain_violation, "extension evaluated outside (0, Theta]");
        if (theta < base_.c1()) return ga_;
        if (theta > base_.c2()) return gb_;
        return base_.eval(theta);
    }

    double deriv_G(double theta) const {
        if (theta < base_.c1() || theta > base_.c2()) return 0.0;
        return base_.deriv(theta);
    }

    // Hbar: theta*G(a) below a; shifted table antiderivative on [a,b]; linear
    // of slope G(b) above b
    double eval_H(double theta) const {
        const double a = base_.c1(), b = base_.c2();
        if (theta <= 0.0) return 0.0;
        if (theta < a) return theta * ga_;
        if (theta <= b) return base_.eval_H(theta) + a * ga_;
        return (theta - b) * gb_ + hb_ + a * ga_;
    }

    double eval_F(double theta) const {
        if (theta == 0.0) return 0.0;
        return theta * eval_G(theta) + base_.n() * eval_H(theta);
    }

    // |integral_0^1 r^{n-1} F(r theta) dr - Hbar(theta)|, by piecewise
    // Gauss-Legendre split at the joints r = a/theta, b/theta
    double identity_residual(double theta, int nodes_per_piece = 64) const {
        const int n = base_.n();
        std::vector<double> cuts{0.0, 1.0};
        for (double joint : {base_.c1() / theta, base_.c2() / theta})
            if (joint > 0.0 && joint < 1.0) cuts.push_back(joint);
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> gx, gw;
        gauss_legendre(nodes_per_piece, gx, gw);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double lo = cuts[i], hi = cuts[i + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int q = 0; q < nodes_per_piece; ++q) {
                const double r = mid + half * gx[q];
                acc += half * gw[q] * std::pow(r, n - 1) * eval_F(r * theta);
            }
        }
        return std::abs(acc - eval_H(theta));
    }

    // FRep: samples of F on [0, Theta]
    std::vector<double> frep_samples(int resolution = GTab::default_resolution) const {
        std::vector<double> F(resolution);
        for (int k = 0; k < resolution; ++k) {
            const double theta = theta_max_ * static_cast<double>(k) / (resolution - 1.0);
            F[k] = (k == 0) ? 0.0 : eval_F(theta);
        }
        return F;
    }

private:
    GTab base_;
    double theta_max_;
    double ga_ = 0.0, gb_ = 0.0, hb_ = 0.0;
};

inline AnExtension extend_an(const GTab& G, double Theta = 0.0) {
    return AnExtension(G, Theta > 0.0 ? Theta : 4.0 * G.c2());
}

// --- epsilon-gluing ----------------------------------------------------------

// Piecewise modification of an admissible G on a node subrange [c1, c2] that
// takes prescribed endpoint values a1, a2 (0 < a1 < a2) with linear ramps
// inside (c1, c1+eps) and (c2-eps, c2), coincides with G on [c1+eps, c2-eps]
// sample-for-sample, and stays admissible. Requires G(c1) >= a1 and G(c2) <= a2.
inline GTab glue_g_eps(const GTab& G, double c1, double c2, double a1, double a2, double eps) {
    if (!(0.0 < a1 && a1 < a2)) fail(errkind::precondition, "gluing requires 0 < a1 < a2");
    const double dt = G.step();
    auto snap = [&](double x) -> std::size_t {
        const double pos = (x - G.c1()) / dt;
        const auto k = static_cast<long long>(std::llround(pos));
        if (k < 0 || k >= static_cast<long long>(G.size()) || std::abs(pos - k) > 1e-6)
            fail(errkind::invalid_input, "gluing endpoints must be table nodes");
        return static_cast<std::size_t>(k);
    };
    const std::size_t k1 = snap(c1), k2 = snap(c2);
    if (k1 >= k2) fail(errkind::invalid_input, "gluing needs c1 < c2");
    if (!(c1 + eps < c2 - eps) || !(eps > 0.0))
        fail(errkind::precondition, "gluing requires 0 < eps and c1 + eps < c2 - eps");
    const double Gc1 = G.samples()[k1], Gc2 = G.samples()[k2];
    if (!(Gc1 >= a1)) fail(errkind::precondition, "gluing hypothesis G(c1) >= a1 fails");
    if (!(Gc2 <= a2)) fail(errkind::precondition, "gluing hypothesis G(c2) <= a2 fails");

    // pick c1' in (c1, c1+eps) with G(c1') >= a1: midpoint, scanning toward c1
    auto pick = [&](std::size_t k_end, double bound, bool lower_side) -> std::size_t {
        // lower side wants G >= bound, upper side wants G <= bound
        const double exact = lower_side ? Gc1 : Gc2;
        if (exact == bound) return k_end;  // ramp empty
        const long long span = std::llround(eps / dt);
        long long off = std::max<long long>(1, span / 2);
        while (off >= 1) {
            const std::size_t k = lower_side ? k_end + static_cast<std::size_t>(off)
                                             : k_end - static_cast<std::size_t>(off);
            const double v = G.samples()[k];
            if ((lower_side && v >= bound) || (!lower_side && v <= bound)) return k;
            off /= 2;
        }
        fail(errkind::precondition,
             "no table node inside the eps-window satisfies the ramp value constraint "
             "(table resolution too coarse)");
    };
    const std::size_t kp1 = pick(k1, a1, true);
    const std::size_t kp2 = pick(k2, a2, false);

    std::vector<double> out(k2 - k1 + 1);
    for (std::size_t k = k1; k <= k2; ++k) {
        const double theta = G.node(k);
        double v;
        if (k < kp1) {
            const double t = (theta - G.node(k1)) / (G.node(kp1) - G.node(k1));
            v = a1 + (G.samples()[kp1] - a1) * t;
        } else if (k > kp2) {
            const double t = (theta - G.node(kp2)) / (G.node(k2) - G.node(kp2));
            v = G.samples()[kp2] + (a2 - G.samples()[kp2]) * t;
        } else {
            v = G.samples()[k];  // exact copy
        }
        out[k - k1] = v;
    }
    out.front() = a1;
    out.back() = a2;
    GTab glued(G.n(), G.node(k1), G.node(k2), std::move(out));
    const auto cert = check_an(glued);
    if (!cert.passed)
        fail(errkind::precondition, "glued function lost the admissibility certificate");
    return glued;
}

}  // namespace firey
