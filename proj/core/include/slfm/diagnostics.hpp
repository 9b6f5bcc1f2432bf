#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slfm/paths.hpp"
#include "slfm/vec.hpp"

namespace slfm {

/// Per-token L2 norm summary.
struct ShellStats {
    std::size_t n_tokens = 0;
    double mean_radius = 0.0;
    double std_radius = 0.0;  // population std
    double cv = 0.0;
};

/// Norm spreads at or below this fraction of the mean are rounding noise from
/// the norm computation itself and are reported as exactly zero.
inline constexpr double kShellStdNoiseFloor = 1e-12;

/// Throws EmptyInput for no tokens, DimensionMismatch for ragged input.
ShellStats shell_stats(std::span<const Token> tokens);
ShellStats shell_stats_from_norms(std::span<const double> norms);

/// Distance of `norm_zt` from the nearest endpoint shell in that shell's
/// standard deviations. Throws DegenerateShell if either std is zero.
double off_shell_sigma(double norm_zt, const ShellStats& shell0, const ShellStats& shell1);
double off_shell_sigma(std::span<const double> zt, const ShellStats& shell0, const ShellStats& shell1);

enum class OffShellUnits { Sigma, Absolute };

struct PathProfile {
    std::vector<double> t_grid;
    std::vector<double> mean_norm;
    std::vector<double> std_norm;
    std::vector<double> mean_offshell;  // sigma, or absolute radius units when units == Absolute
    std::vector<double> mean_radial_share;
    OffShellUnits offshell_units = OffShellUnits::Sigma;
    ShellStats shell0;
    ShellStats shell1;
};

using TokenPair = std::pair<Token, Token>;

inline constexpr std::size_t kDefaultGridPoints = 101;
inline constexpr std::size_t kDefaultPairCount = 2048;

/// n uniformly spaced points in [0, 1] including both ends (n >= 2).
std::vector<double> uniform_grid(std::size_t n);

struct EndpointShells {
    ShellStats shell0;
    ShellStats shell1;
};

/// Aggregates norm, off-shell distance and radial share over all pairs at each
/// grid point. Endpoint shells come from the pairs unless overridden. When
/// either endpoint shell has zero spread the off-shell column switches to the
/// absolute deviation min_k |‖z_t‖ - mean_k|. Sums are compensated, so the
/// result does not depend on pair order.
PathProfile path_profile(std::span<const TokenPair> pairs, PathKind kind, std::span<const double> t_grid,
                         const std::optional<EndpointShells>& shells_override = std::nullopt);

struct SwapPair {
    Token keep_direction;  // anchor direction, substitute radius
    Token keep_radius;     // substitute direction, anchor radius
};

/// Exchanges radius and direction between two tokens.
SwapPair component_swap(std::span<const double> anchor, std::span<const double> substitute);

}  // namespace slfm
