#pragma once

// Test-only reference computations. Nothing here calls into the code paths it
// is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace slfm::oracle {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec lincomb(double a, const Vec& x, double b, const Vec& y) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

inline double dist(const Vec& a, const Vec& b) { return norm(lincomb(1.0, a, -1.0, b)); }

inline Vec gaussian_vec(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(d);
    for (double& x : v) x = g(rng);
    return v;
}

inline Vec on_sphere(std::size_t d, double radius, std::mt19937_64& rng) {
    Vec v = gaussian_vec(d, rng);
    const double n = norm(v);
    for (double& x : v) x *= radius / n;
    return v;
}

/// Rotates x0 toward x1 by angle `theta` inside span{x0, x1} using a
/// Gram-Schmidt frame and an explicit 2x2 rotation matrix.
inline Vec rotate_in_plane(const Vec& x0, const Vec& x1, double theta) {
    const double r = norm(x0);
    Vec e0 = x0;
    for (double& x : e0) x /= r;
    Vec e1 = lincomb(1.0, x1, -dot(x1, e0), e0);
    const double n1 = norm(e1);
    for (double& x : e1) x /= n1;
    // [c -s; s c] applied to (1, 0) in the (e0, e1) frame.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return lincomb(r * c, e0, r * s, e1);
}

/// Angle via the planar frame, atan2 of the in-plane coordinates.
inline double planar_angle(const Vec& a, const Vec& b) {
    const double na = norm(a);
    Vec e0 = a;
    for (double& x : e0) x /= na;
    const double along = dot(b, e0);
    const double across = norm(lincomb(1.0, b, -along, e0));
    return std::atan2(across, along);
}

/// Central difference of a vector-valued curve.
inline Vec central_difference(const std::function<Vec(double)>& f, double t, double h) {
    const Vec fp = f(t + h);
    const Vec fm = f(t - h);
    Vec out(fp.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h);
    return out;
}

/// E‖z‖ for z ~ N(0, I_d) by composite Simpson quadrature of r * chi_d(r),
/// with the density normalized numerically (no gamma functions involved).
inline double chi_mean_quadrature(std::size_t d) {
    const double upper = std::sqrt(static_cast<double>(d)) + 40.0;
    const std::size_t n = 200000;
    const double h = upper / static_cast<double>(n);
    auto log_kernel = [&](double r) { return (static_cast<double>(d) - 1.0) * std::log(r) - 0.5 * r * r; };
    const double mode = std::sqrt(std::max(static_cast<double>(d) - 1.0, 1e-12));
    const double shift = log_kernel(mode);
    double z = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double r = static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double k = r > 0.0 ? std::exp(log_kernel(r) - shift) : (d == 1 ? std::exp(-shift) : 0.0);
        z += w * k;
        m += w * k * r;
    }
    return m / z;
}

}  // namespace slfm::oracle
