#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "slfm/sphere.hpp"
#include "slfm/vec.hpp"

namespace slfm {

enum class PathKind { Linear, Shell, Slerp };

std::string_view to_string(PathKind kind) noexcept;
/// Accepts "linear", "shell", "slerp". Throws InvalidArgument otherwise.
PathKind parse_path_kind(std::string_view name);

/// An interpolated state together with its conditional velocity target.
struct PathPoint {
    Token z;  // z_t
    Token u;  // u_t = d z_t / dt
    double t;
    PathKind kind;
};

/// z_t = (1-t) z0 + t z1, u_t = z1 - z0.
PathPoint linear_path(std::span<const double> z0, std::span<const double> z1, double t);

/// Slerps the direction and linearly interpolates the radius. The velocity is
/// the exact product-rule derivative (r1 - r0) z_hat_t + r_t d(z_hat_t)/dt.
PathPoint shell_path(std::span<const double> z0, std::span<const double> z1, double t);

/// Constant-radius geodesic with the tangent-projected slerp velocity.
PathPoint slerp_path(const SphereToken& z0, const SphereToken& z1, double t);

/// Dispatches on kind. For Slerp the raw endpoints must share a radius
/// (relative 1e-6), otherwise RadiusMismatch.
PathPoint interpolate(PathKind kind, std::span<const double> z0, std::span<const double> z1, double t);

/// Closed-form ‖(1-t) z0 + t z1‖^2 given the endpoint radii and the cosine
/// between their directions.
double chord_norm_sq(double r0, double r1, double cos01, double t);

struct RadialSplit {
    double radial_energy;
    double tangential_energy;
    double share;  // radial / total, 0 when u = 0
};

/// Splits ‖u‖^2 into the component along z_hat and the remainder.
RadialSplit radial_split(std::span<const double> u, std::span<const double> z);

}  // namespace slfm
