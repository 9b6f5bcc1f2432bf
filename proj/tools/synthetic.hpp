#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "slfm/diagnostics.hpp"
#include "slfm/sphere.hpp"

namespace slfm::cli {

/// Parsed form of the --synthetic grammar:
///   sphere:d=<int>,R=<real>
///   gauss-shells:d=<int>,r0=<real>,r1=<real>,cv=<real>
struct SyntheticSpec {
    enum class Kind { Sphere, GaussShells } kind = Kind::Sphere;
    std::size_t d = 0;
    double radius = 0.0;  // sphere
    double r0 = 0.0;      // gauss-shells
    double r1 = 0.0;
    double cv = 0.0;
};

SyntheticSpec parse_synthetic(std::string_view text);

/// `count` independent (z0, z1) pairs. Sphere pairs are uniform on S^{d-1}(R);
/// gauss-shell tokens have uniform direction and radius r_k (1 + cv N(0,1)),
/// redrawn while nonpositive.
std::vector<TokenPair> synthetic_pairs(const SyntheticSpec& spec, std::size_t count, Rng& rng);

}  // namespace slfm::cli
