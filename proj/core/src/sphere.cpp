#include "slfm/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slfm/errors.hpp"

namespace slfm {

namespace detail {
SphereToken make_sphere_token(Token values, double radius) { return SphereToken(std::move(values), radius); }
}  // namespace detail

namespace {

using detail::make_sphere_token;
using std::numbers::pi;

void require_radius(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive and finite");
    }
}

// Rescales an (almost) unit or arbitrary nonzero vector onto radius R.
Token renormalized(Token v, double radius) {
    const double n = norm(v);
    if (n < limits::kNormFloor) throw Error(ErrorKind::NearZeroNorm, "cannot renormalize a near-zero vector");
    const double s = radius / n;
    for (double& x : v) x *= s;
    return v;
}

void require_common_radius(const SphereToken& x0, const SphereToken& x1) {
    require_same_dim(x0.values(), x1.values(), "slerp endpoints");
    const double r0 = x0.radius();
    const double r1 = x1.radius();
    if (std::abs(r0 - r1) > limits::kOnSphereTol * std::max(r0, r1)) {
        throw Error(ErrorKind::RadiusMismatch,
                    "endpoint radii differ: " + std::to_string(r0) + " vs " + std::to_string(r1));
    }
}

Token unit(std::span<const double> v) {
    const double n = norm(v);
    if (n < limits::kNormFloor) throw Error(ErrorKind::NearZeroNorm, "direction of a near-zero vector");
    return scaled(v, 1.0 / n);
}

}  // namespace

SphereToken SphereToken::certify(Token values, double radius) {
    require_radius(radius);
    require_finite(values, "SphereToken");
    if (!is_on_sphere(values, radius)) {
        throw Error(ErrorKind::RadiusMismatch, "token norm " + std::to_string(norm(values)) +
                                                   " is not on the sphere of radius " + std::to_string(radius));
    }
    return SphereToken(std::move(values), radius);
}

Token SphereToken::direction() const { return scaled(values_, 1.0 / radius_); }

bool is_on_sphere(std::span<const double> z, double radius, double rel_tol) {
    return std::abs(norm(z) - radius) <= rel_tol * radius;
}

bool is_tangent(std::span<const double> v, const SphereToken& base, double rel_tol) {
    if (v.size() != base.dim()) return false;
    return std::abs(dot(v, base.values())) <= rel_tol * norm(v) * base.radius();
}

SphereToken radial_project(std::span<const double> z, double radius) {
    require_radius(radius);
    const double n = norm(z);
    if (!(n >= limits::kNormFloor)) {
        throw Error(ErrorKind::NearZeroNorm, "radial projection undefined at norm " + std::to_string(n));
    }
    return make_sphere_token(scaled(z, radius / n), radius);
}

SphereToken sample_uniform_sphere(std::size_t d, double radius, Rng& rng) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "uniform sphere sampling needs d >= 2");
    require_radius(radius);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Token eps(d);
    for (;;) {
        for (double& x : eps) x = gauss(rng);
        if (norm(eps) >= limits::kNormFloor) return radial_project(eps, radius);
    }
}

double gaussian_mean_radius_exact(std::size_t d) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    const double dd = static_cast<double>(d);
    return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (dd + 1.0)) - std::lgamma(0.5 * dd));
}

double gaussian_mean_radius_approx(std::size_t d) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    return std::sqrt(static_cast<double>(d) - 0.5);
}

double gaussian_norm_cv(std::size_t d) {
    const double mean = gaussian_mean_radius_exact(d);
    const double var = static_cast<double>(d) - mean * mean;
    return std::sqrt(std::max(var, 0.0)) / mean;
}

GaussianNormStats gaussian_norm_stats(std::size_t d) {
    return {d, gaussian_mean_radius_exact(d), gaussian_norm_cv(d)};
}

double angle_between(const SphereToken& x0, const SphereToken& x1) {
    require_same_dim(x0.values(), x1.values(), "angle_between");
    const double denom = std::max(norm(x0.values()) * norm(x1.values()), limits::kNormFloor);
    const double c = std::clamp(dot(x0.values(), x1.values()) / denom, -limits::kCosineClamp, limits::kCosineClamp);
    return std::acos(c);
}

double geodesic_angle(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a, b, "geodesic_angle");
    const Token ua = unit(a);
    const Token ub = unit(b);
    return 2.0 * std::atan2(norm(sub(ua, ub)), norm(add(ua, ub)));
}

SlerpRegime slerp_regime(double omega) noexcept {
    if (omega < limits::kSmallAngle) return SlerpRegime::SmallAngle;
    if (omega > limits::kAntipodalAngle) return SlerpRegime::Antipodal;
    return SlerpRegime::Standard;
}

Token orthogonal_unit(std::span<const double> dir) {
    const std::size_t d = dir.size();
    for (std::size_t i = 0; i < d; ++i) {
        Token n = scaled(dir, -dir[i]);
        n[i] += 1.0;
        const double nn = norm(n);
        if (nn >= limits::kNormFloor) {
            // One re-orthogonalization pass removes the residual along dir.
            axpy(-dot(n, dir), dir, n);
            return scaled(n, 1.0 / norm(n));
        }
    }
    throw Error(ErrorKind::InvalidArgument, "no orthogonal direction exists for d = " + std::to_string(d));
}

SphereToken slerp(const SphereToken& x0, const SphereToken& x1, double t) {
    require_common_radius(x0, x1);
    const double radius = x0.radius();
    const Token a = x0.direction();
    const Token b = x1.direction();
    const double omega = geodesic_angle(a, b);

    switch (slerp_regime(omega)) {
        case SlerpRegime::SmallAngle:
            return make_sphere_token(renormalized(combine(1.0 - t, a, t, b), radius), radius);
        case SlerpRegime::Antipodal: {
            const Token n = orthogonal_unit(a);
            return make_sphere_token(renormalized(combine(std::cos(pi * t), a, std::sin(pi * t), n), radius), radius);
        }
        case SlerpRegime::Standard: {
            const double s = std::sin(omega);
            const Token dir = combine(std::sin((1.0 - t) * omega) / s, a, std::sin(t * omega) / s, b);
            return make_sphere_token(renormalized(dir, radius), radius);
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unreachable slerp regime");
}

TangentVector slerp_velocity(const SphereToken& x0, const SphereToken& x1, double t) {
    require_common_radius(x0, x1);
    const double radius = x0.radius();
    const Token a = x0.direction();
    const Token b = x1.direction();
    const double omega = geodesic_angle(a, b);

    Token v;
    switch (slerp_regime(omega)) {
        case SlerpRegime::SmallAngle: {
            // d/dt of R p/|p| with p = (1-t) a + t b.
            const Token p = combine(1.0 - t, a, t, b);
            const double np = norm(p);
            const Token p_hat = scaled(p, 1.0 / np);
            Token dp = sub(b, a);
            axpy(-dot(dp, p_hat), p_hat, dp);
            v = scaled(dp, radius / np);
            break;
        }
        case SlerpRegime::Antipodal: {
            const Token n = orthogonal_unit(a);
            v = combine(-radius * pi * std::sin(pi * t), a, radius * pi * std::cos(pi * t), n);
            break;
        }
        case SlerpRegime::Standard: {
            const double k = radius * omega / std::sin(omega);
            v = combine(-k * std::cos((1.0 - t) * omega), a, k * std::cos(t * omega), b);
            break;
        }
    }
    return tangent_project(v, slerp(x0, x1, t));
}

TangentVector tangent_project(std::span<const double> v, const SphereToken& z) {
    require_same_dim(v, z.values(), "tangent_project");
    const double coef = dot(v, z.values()) / norm_sq(z.values());
    Token out(v.begin(), v.end());
    axpy(-coef, z.values(), out);
    return TangentVector{std::move(out), z};
}

SphereToken exp_map(const SphereToken& p, std::span<const double> v) {
    require_same_dim(v, p.values(), "exp_map");
    if (!is_tangent(v, p)) throw Error(ErrorKind::NotTangent, "exp_map velocity is not tangent at the base point");
    const double nv = norm(v);
    if (nv == 0.0) return p;
    const double radius = p.radius();
    const double theta = nv / radius;
    const Token out = combine(std::cos(theta), p.values(), radius * std::sin(theta) / nv, v);
    return make_sphere_token(renormalized(out, radius), radius);
}

SphereToken exp_map(const TangentVector& v) { return exp_map(v.base, v.vector); }

SphereToken projected_euler_step(const SphereToken& p, std::span<const double> v) {
    require_same_dim(v, p.values(), "projected_euler_step");
    return radial_project(add(p.values(), v), p.radius());
}

double one_step_deficit(double h, double omega, double radius) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
    if (!(omega > 0.0 && omega < pi)) throw Error(ErrorKind::InvalidArgument, "omega must lie in (0, pi)");
    require_radius(radius);
    const double x = h * omega;
    if (x < 1e-2) {
        // Taylor series of x - atan(x); the direct difference cancels badly here.
        const double x2 = x * x;
        const double x3 = x2 * x;
        return radius * x3 * (1.0 / 3.0 - x2 * (1.0 / 5.0 - x2 * (1.0 / 7.0 - x2 * (1.0 / 9.0))));
    }
    return radius * (x - std::atan(x));
}

double measured_one_step_deficit(double h, double omega, double radius, std::size_t d) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "deficit measurement needs d >= 2");
    Token base(d, 0.0);
    base[0] = radius;
    Token velocity(d, 0.0);
    velocity[1] = radius * omega * h;
    const SphereToken p = radial_project(base, radius);
    const SphereToken by_exp = exp_map(p, velocity);
    const SphereToken by_euler = projected_euler_step(p, velocity);
    return radius * geodesic_angle(by_exp.values(), by_euler.values());
}

}  // namespace slfm
