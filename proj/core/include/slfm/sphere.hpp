#pragma once

#include <cstddef>
#include <numbers>
#include <random>
#include <span>

#include "slfm/vec.hpp"

namespace slfm {

/// Random source used throughout. Always passed explicitly.
using Rng = std::mt19937_64;

namespace limits {
inline constexpr double kNormFloor = 1e-8;
inline constexpr double kCosineClamp = 1.0 - 1e-6;
inline constexpr double kSmallAngle = 1e-4;
inline constexpr double kAntipodalAngle = std::numbers::pi - 0.1;
inline constexpr double kOnSphereTol = 1e-6;   // relative radius tolerance
inline constexpr double kTangentTol = 1e-5;    // |<v, p>| <= tol * |v| * R
}  // namespace limits

class SphereToken;

namespace detail {
// Wraps already-normalized values without re-checking; used by the geometry
// operations that construct on-sphere points by design.
SphereToken make_sphere_token(Token values, double radius);
}  // namespace detail

/// A token certified to lie on the sphere of radius R (relative tolerance
/// limits::kOnSphereTol). Only constructible through certify() or the
/// geometry operations below, so holding one is proof of the invariant.
class SphereToken {
public:
    /// Throws RadiusMismatch if |‖values‖ - R| > 1e-6 R, InvalidArgument for R <= 0.
    static SphereToken certify(Token values, double radius);

    const Token& values() const noexcept { return values_; }
    double radius() const noexcept { return radius_; }
    std::size_t dim() const noexcept { return values_.size(); }
    /// Unit direction values / R.
    Token direction() const;

private:
    SphereToken(Token values, double radius) : values_(std::move(values)), radius_(radius) {}
    friend SphereToken detail::make_sphere_token(Token values, double radius);

    Token values_;
    double radius_;
};

/// A velocity tangent to the sphere at `base`.
struct TangentVector {
    Token vector;
    SphereToken base;
};

bool is_on_sphere(std::span<const double> z, double radius, double rel_tol = limits::kOnSphereTol);
bool is_tangent(std::span<const double> v, const SphereToken& base, double rel_tol = limits::kTangentTol);

/// R * z / ‖z‖. Throws NearZeroNorm below the 1e-8 floor.
SphereToken radial_project(std::span<const double> z, double radius);

/// Uniform draw on S^{d-1}(R) by normalizing isotropic Gaussian noise.
SphereToken sample_uniform_sphere(std::size_t d, double radius, Rng& rng);

/// Mean of the chi distribution with d degrees of freedom, via log-gamma.
double gaussian_mean_radius_exact(std::size_t d);
/// sqrt(d - 1/2).
double gaussian_mean_radius_approx(std::size_t d);
/// Coefficient of variation of ‖z‖ for z ~ N(0, I_d).
double gaussian_norm_cv(std::size_t d);

struct GaussianNormStats {
    std::size_t d;
    double mean_radius;
    double cv;
};
GaussianNormStats gaussian_norm_stats(std::size_t d);

/// Angle in [0, pi] from the clamped cosine, cos in [-1+1e-6, 1-1e-6].
double angle_between(const SphereToken& x0, const SphereToken& x1);

/// Unclamped angle between two nonzero vectors, 2 atan2(|a-b|, |a+b|) on the
/// unit directions. Accurate at both ends of [0, pi].
double geodesic_angle(std::span<const double> a, std::span<const double> b);

enum class SlerpRegime { SmallAngle, Standard, Antipodal };

SlerpRegime slerp_regime(double omega) noexcept;

/// Deterministic unit vector orthogonal to the unit vector `dir`: the
/// normalized orthogonal component of the lowest-index basis vector that is not
/// parallel to `dir`.
Token orthogonal_unit(std::span<const double> dir);

/// Geodesic interpolation with the three-regime dispatch:
///   omega < 1e-4        lerp, then renormalize to R
///   omega > pi - 0.1    cos(pi t) x0_hat + sin(pi t) n_hat, scaled by R
///   otherwise           standard slerp
/// Throws RadiusMismatch when the endpoints' radii differ.
SphereToken slerp(const SphereToken& x0, const SphereToken& x1, double t);

/// d/dt slerp(x0, x1, t), tangent-projected at the path point. Speed R omega in
/// the standard regime; the degenerate regimes return the derivative of their
/// fallback path.
TangentVector slerp_velocity(const SphereToken& x0, const SphereToken& x1, double t);

/// v - <v, z>/‖z‖^2 z.
TangentVector tangent_project(std::span<const double> v, const SphereToken& z);

/// cos(|v|/R) p + R sin(|v|/R) v/|v|. Returns p exactly for v = 0.
/// Throws NotTangent if v fails the tangency certificate at p.
SphereToken exp_map(const SphereToken& p, std::span<const double> v);
SphereToken exp_map(const TangentVector& v);

/// Euler step p + v followed by radial projection back to radius R.
SphereToken projected_euler_step(const SphereToken& p, std::span<const double> v);

/// R (h omega - atan(h omega)), the arc-length shortfall of one projected
/// Euler step relative to the exponential-map step.
double one_step_deficit(double h, double omega, double radius);

/// Measures the deficit geometrically: builds an orthonormal great circle in
/// `d` dimensions, takes one exp-map step and one projected-Euler step with the
/// same velocity (speed R omega, step h), and returns R times the angle between
/// the two results.
double measured_one_step_deficit(double h, double omega, double radius, std::size_t d = 3);

}  // namespace slfm
