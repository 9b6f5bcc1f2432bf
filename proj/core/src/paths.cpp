#include "slfm/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slfm/errors.hpp"

namespace slfm {

namespace {

void require_unit_interval(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "t must lie in [0, 1], got " + std::to_string(t));
}

}  // namespace

std::string_view to_string(PathKind kind) noexcept {
    switch (kind) {
        case PathKind::Linear: return "linear";
        case PathKind::Shell: return "shell";
        case PathKind::Slerp: return "slerp";
    }
    return "unknown";
}

PathKind parse_path_kind(std::string_view name) {
    if (name == "linear") return PathKind::Linear;
    if (name == "shell") return PathKind::Shell;
    if (name == "slerp") return PathKind::Slerp;
    throw Error(ErrorKind::InvalidArgument, "unknown path kind '" + std::string(name) + "'");
}

PathPoint linear_path(std::span<const double> z0, std::span<const double> z1, double t) {
    require_same_dim(z0, z1, "linear_path");
    require_unit_interval(t);
    return PathPoint{combine(1.0 - t, z0, t, z1), sub(z1, z0), t, PathKind::Linear};
}

PathPoint shell_path(std::span<const double> z0, std::span<const double> z1, double t) {
    require_same_dim(z0, z1, "shell_path");
    require_unit_interval(t);
    const double r0 = norm(z0);
    const double r1 = norm(z1);
    if (r0 < limits::kNormFloor || r1 < limits::kNormFloor) {
        throw Error(ErrorKind::NearZeroNorm, "shell path endpoint has near-zero norm");
    }
    const SphereToken d0 = radial_project(z0, 1.0);
    const SphereToken d1 = radial_project(z1, 1.0);
    const SphereToken dir = slerp(d0, d1, t);
    const TangentVector ddir = slerp_velocity(d0, d1, t);
    const double rt = (1.0 - t) * r0 + t * r1;
    return PathPoint{scaled(dir.values(), rt), combine(r1 - r0, dir.values(), rt, ddir.vector), t, PathKind::Shell};
}

PathPoint slerp_path(const SphereToken& z0, const SphereToken& z1, double t) {
    require_unit_interval(t);
    const SphereToken zt = slerp(z0, z1, t);
    // slerp_velocity already returns the projected derivative; projecting
    // against the returned point keeps the target tangent to that exact point.
    TangentVector ut = tangent_project(slerp_velocity(z0, z1, t).vector, zt);
    return PathPoint{zt.values(), std::move(ut.vector), t, PathKind::Slerp};
}

PathPoint interpolate(PathKind kind, std::span<const double> z0, std::span<const double> z1, double t) {
    switch (kind) {
        case PathKind::Linear: return linear_path(z0, z1, t);
        case PathKind::Shell: return shell_path(z0, z1, t);
        case PathKind::Slerp: {
            require_same_dim(z0, z1, "slerp_path");
            const double r0 = norm(z0);
            const double r1 = norm(z1);
            if (std::abs(r0 - r1) > limits::kOnSphereTol * std::max(r0, r1)) {
                throw Error(ErrorKind::RadiusMismatch, "slerp endpoints lie on different radii: " + std::to_string(r0) +
                                                           " vs " + std::to_string(r1));
            }
            const double radius = 0.5 * (r0 + r1);
            return slerp_path(SphereToken::certify(Token(z0.begin(), z0.end()), radius),
                              SphereToken::certify(Token(z1.begin(), z1.end()), radius), t);
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown path kind");
}

double chord_norm_sq(double r0, double r1, double cos01, double t) {
    const double s = 1.0 - t;
    return s * s * r0 * r0 + t * t * r1 * r1 + 2.0 * t * s * r0 * r1 * cos01;
}

RadialSplit radial_split(std::span<const double> u, std::span<const double> z) {
    require_same_dim(u, z, "radial_split");
    const double nz = norm(z);
    if (nz < limits::kNormFloor) throw Error(ErrorKind::NearZeroNorm, "radial split at a near-zero point");
    const double along = dot(u, z) / nz;
    const double total = norm_sq(u);
    const double radial = along * along;
    const double tangential = std::max(total - radial, 0.0);
    const double share = total > 0.0 ? std::min(radial / total, 1.0) : 0.0;
    return RadialSplit{radial, tangential, share};
}

}  // namespace slfm
