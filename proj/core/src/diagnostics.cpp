#include "slfm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slfm/errors.hpp"
#include "slfm/sphere.hpp"

namespace slfm {

namespace {

struct MeanStd {
    double mean;
    double std;
};

// Two-pass mean and population std, both passes compensated.
MeanStd mean_std(std::span<const double> xs) {
    CompensatedSum sum;
    for (double x : xs) sum.add(x);
    const double mean = sum.value() / static_cast<double>(xs.size());
    CompensatedSum sq;
    for (double x : xs) sq.add((x - mean) * (x - mean));
    return {mean, std::sqrt(sq.value() / static_cast<double>(xs.size()))};
}

}  // namespace

ShellStats shell_stats_from_norms(std::span<const double> norms) {
    if (norms.empty()) throw Error(ErrorKind::EmptyInput, "shell statistics of an empty token set");
    auto [mean, sd] = mean_std(norms);
    if (sd <= kShellStdNoiseFloor * mean) sd = 0.0;
    return ShellStats{norms.size(), mean, sd, mean > 0.0 ? sd / mean : 0.0};
}

ShellStats shell_stats(std::span<const Token> tokens) {
    if (tokens.empty()) throw Error(ErrorKind::EmptyInput, "shell statistics of an empty token set");
    std::vector<double> norms;
    norms.reserve(tokens.size());
    for (const Token& tok : tokens) {
        require_same_dim(tokens.front(), tok, "shell_stats");
        norms.push_back(norm(tok));
    }
    return shell_stats_from_norms(norms);
}

double off_shell_sigma(double norm_zt, const ShellStats& shell0, const ShellStats& shell1) {
    if (!(shell0.std_radius > 0.0) || !(shell1.std_radius > 0.0)) {
        throw Error(ErrorKind::DegenerateShell, "off-shell sigma needs endpoint shells with nonzero spread");
    }
    const double s0 = std::abs(norm_zt - shell0.mean_radius) / shell0.std_radius;
    const double s1 = std::abs(norm_zt - shell1.mean_radius) / shell1.std_radius;
    return std::min(s0, s1);
}

double off_shell_sigma(std::span<const double> zt, const ShellStats& shell0, const ShellStats& shell1) {
    return off_shell_sigma(norm(zt), shell0, shell1);
}

std::vector<double> uniform_grid(std::size_t n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "a t-grid needs at least 2 points");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    grid.back() = 1.0;
    return grid;
}

PathProfile path_profile(std::span<const TokenPair> pairs, PathKind kind, std::span<const double> t_grid,
                         const std::optional<EndpointShells>& shells_override) {
    if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "path profile needs at least one pair");
    if (t_grid.empty()) throw Error(ErrorKind::EmptyInput, "path profile needs a nonempty t-grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0 && t_grid[i] <= 1.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw Error(ErrorKind::InvalidArgument, "t-grid must be strictly increasing within [0, 1]");
        }
    }

    PathProfile profile;
    if (shells_override) {
        profile.shell0 = shells_override->shell0;
        profile.shell1 = shells_override->shell1;
    } else {
        std::vector<double> n0;
        std::vector<double> n1;
        n0.reserve(pairs.size());
        n1.reserve(pairs.size());
        for (const auto& [z0, z1] : pairs) {
            n0.push_back(norm(z0));
            n1.push_back(norm(z1));
        }
        profile.shell0 = shell_stats_from_norms(n0);
        profile.shell1 = shell_stats_from_norms(n1);
    }
    const bool degenerate = !(profile.shell0.std_radius > 0.0) || !(profile.shell1.std_radius > 0.0);
    profile.offshell_units = degenerate ? OffShellUnits::Absolute : OffShellUnits::Sigma;

    const std::size_t n = pairs.size();
    std::vector<double> norms(n);
    std::vector<double> offshell(n);
    std::vector<double> shares(n);
    for (double t : t_grid) {
        for (std::size_t i = 0; i < n; ++i) {
            const PathPoint pt = interpolate(kind, pairs[i].first, pairs[i].second, t);
            norms[i] = norm(pt.z);
            offshell[i] = degenerate ? std::min(std::abs(norms[i] - profile.shell0.mean_radius),
                                                std::abs(norms[i] - profile.shell1.mean_radius))
                                     : off_shell_sigma(norms[i], profile.shell0, profile.shell1);
            shares[i] = radial_split(pt.u, pt.z).share;
        }
        const MeanStd ns = mean_std(norms);
        profile.t_grid.push_back(t);
        profile.mean_norm.push_back(ns.mean);
        profile.std_norm.push_back(ns.std);
        profile.mean_offshell.push_back(mean_std(offshell).mean);
        profile.mean_radial_share.push_back(mean_std(shares).mean);
    }
    return profile;
}

SwapPair component_swap(std::span<const double> anchor, std::span<const double> substitute) {
    require_same_dim(anchor, substitute, "component_swap");
    const double ra = norm(anchor);
    const double rs = norm(substitute);
    if (ra < limits::kNormFloor || rs < limits::kNormFloor) {
        throw Error(ErrorKind::NearZeroNorm, "component swap needs nonzero anchor and substitute");
    }
    return SwapPair{scaled(anchor, rs / ra), scaled(substitute, ra / rs)};
}

}  // namespace slfm
