#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "firey/errors.hpp"
#include "firey/mathutil.hpp"

namespace firey {

// Uniform periodic grid phi_k = 2 pi k / N on the circle. Node count must be
// even (the spectral kernels below assume it); every body in the library
// carries one of these.
class CircleGrid {
public:
    explicit CircleGrid(int n) : n_(n) {
        if (n < 4 || n % 2 != 0) fail(errkind::invalid_input, "grid size must be even and >= 4");
    }

    int size() const { return n_; }
    double step() const { return two_pi / n_; }
    double angle(int k) const { return two_pi * k / n_; }
    double weight() const { return two_pi / n_; }

    int wrap(int k) const {
        int m = k % n_;
        return m < 0 ? m + n_ : m;
    }

    // nearest node index to an arbitrary angle
    int nearest(double phi) const {
        return wrap(static_cast<int>(std::llround(wrap_angle(phi) / step())));
    }

    bool operator==(const CircleGrid& o) const { return n_ == o.n_; }
    bool operator!=(const CircleGrid& o) const { return n_ != o.n_; }

private:
    int n_;
};

enum class DiffMode { spectral, finite_difference };

namespace detail {

// Closed-form circulant kernels of trigonometric differentiation on an even
// periodic grid. (Dh)_j = sum_m d[m] h_{j-m}.
struct spectral_kernels {
    std::vector<double> d1, d2;

    explicit spectral_kernels(int n) : d1(n, 0.0), d2(n, 0.0) {
        const double h = two_pi / n;
        d2[0] = -pi * pi / (3.0 * h * h) - 1.0 / 6.0;
        for (int m = 1; m < n; ++m) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            const double half = 0.5 * m * h;
            d1[m] = 0.5 * sgn / std::tan(half);
            const double s = std::sin(half);
            d2[m] = -sgn / (2.0 * s * s);
        }
    }
};

inline const spectral_kernels& kernels_for(int n) {
    // per-size cache; sizes in play are few (256..8192)
    static thread_local std::vector<std::pair<int, std::shared_ptr<spectral_kernels>>> cache;
    for (auto& [sz, k] : cache)
        if (sz == n) return *k;
    cache.emplace_back(n, std::make_shared<spectral_kernels>(n));
    return *cache.back().second;
}

}  // namespace detail

// first derivative of periodic samples
inline std::vector<double> diff1(const CircleGrid& g, const std::vector<double>& f,
                                 DiffMode mode = DiffMode::spectral) {
    const int n = g.size();
    if (static_cast<int>(f.size()) != n) fail(errkind::grid_mismatch, "diff1: sample size != grid size");
    std::vector<double> out(n, 0.0);
    if (mode == DiffMode::finite_difference) {
        const double inv2h = 1.0 / (2.0 * g.step());
        for (int j = 0; j < n; ++j) out[j] = (f[g.wrap(j + 1)] - f[g.wrap(j - 1)]) * inv2h;
        return out;
    }
    const auto& ker = detail::kernels_for(n);
    // difference form: constants are annihilated exactly and the large
    // alternating kernel entries cancel against local variation, not each other
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int m = 1; m < n; ++m) acc += ker.d1[m] * (f[g.wrap(j - m)] - f[j]);
        out[j] = acc;
    }
    return out;
}

// second derivative of periodic samples
inline std::vector<double> diff2(const CircleGrid& g, const std::vector<double>& f,
                                 DiffMode mode = DiffMode::spectral) {
    const int n = g.size();
    if (static_cast<int>(f.size()) != n) fail(errkind::grid_mismatch, "diff2: sample size != grid size");
    std::vector<double> out(n, 0.0);
    if (mode == DiffMode::finite_difference) {
        const double invh2 = 1.0 / (g.step() * g.step());
        for (int j = 0; j < n; ++j)
            out[j] = (f[g.wrap(j + 1)] - 2.0 * f[j] + f[g.wrap(j - 1)]) * invh2;
        return out;
    }
    const auto& ker = detail::kernels_for(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int m = 1; m < n; ++m) acc += ker.d2[m] * (f[g.wrap(j - m)] - f[j]);
        out[j] = acc;
    }
    return out;
}

// dense spectral second-derivative matrix (row-major), for Newton Jacobians
inline std::vector<double> diff2_matrix(const CircleGrid& g) {
    const int n = g.size();
    const auto& ker = detail::kernels_for(n);
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) m[static_cast<std::size_t>(j) * n + l] = ker.d2[g.wrap(j - l)];
    return m;
}

// trapezoid quadrature of periodic samples over the full circle (spectrally
// accurate for smooth integrands)
inline double integrate(const CircleGrid& g, const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != g.size()) fail(errkind::grid_mismatch, "integrate: size mismatch");
    double acc = 0.0;
    for (double v : f) acc += v;
    return acc * g.weight();
}

// Barycentric trigonometric interpolation of periodic samples (even N).
// Exact at nodes; spectral accuracy for smooth data.
inline double trig_interp(const CircleGrid& g, const std::vector<double>& f, double phi) {
    const int n = g.size();
    if (static_cast<int>(f.size()) != n) fail(errkind::grid_mismatch, "trig_interp: size mismatch");
    const double p = wrap_angle(phi);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        double d = 0.5 * (p - g.angle(k));
        double s = std::tan(d);
        if (std::abs(s) < 1e-14) return f[k];
        const double w = ((k % 2 == 0) ? 1.0 : -1.0) / s;
        num += w * f[k];
        den += w;
    }
    return num / den;
}

// resample periodic samples onto a grid of a different (even) size
inline std::vector<double> resample(const CircleGrid& from, const std::vector<double>& f,
                                    const CircleGrid& to) {
    if (to.size() % from.size() == 0) {
        // refinement keeps original nodes exact
        std::vector<double> out(to.size());
        const int ratio = to.size() / from.size();
        for (int k = 0; k < to.size(); ++k)
            out[k] = (k % ratio == 0) ? f[k / ratio] : trig_interp(from, f, to.angle(k));
        return out;
    }
    std::vector<double> out(to.size());
    for (int k = 0; k < to.size(); ++k) out[k] = trig_interp(from, f, to.angle(k));
    return out;
}

}  // namespace firey
