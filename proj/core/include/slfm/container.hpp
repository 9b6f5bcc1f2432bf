#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "slfm/vec.hpp"

namespace slfm {

/// Binary latent container, little-endian throughout:
///
///   offset  size  field
///   0       4     magic "SLFM"
///   4       2     version (u16) = 1
///   6       4     d (u32)
///   10      4     h (u32)
///   14      4     w (u32)
///   18      4     n_items (u32)
///   22      4*N   payload, N = n_items*d*h*w IEEE-754 binary32,
///                 item-major, then channel-major, then row-major
///
/// Any deviation (magic, version, short or long payload, non-finite value) is
/// a Format error.
struct LatentContainer {
    static constexpr std::array<char, 4> kMagic{'S', 'L', 'F', 'M'};
    static constexpr std::uint16_t kVersion = 1;
    static constexpr std::size_t kHeaderBytes = 22;

    std::uint32_t d = 0;
    std::uint32_t h = 0;
    std::uint32_t w = 0;
    std::uint32_t n_items = 0;
    std::vector<float> payload;

    std::size_t tokens_per_item() const noexcept { return std::size_t{h} * w; }
    std::size_t num_tokens() const noexcept { return tokens_per_item() * n_items; }
    std::size_t expected_floats() const noexcept { return std::size_t{d} * h * w * n_items; }

    /// Token at spatial position `pos` (row-major over h x w) of item `item`,
    /// promoted to double.
    Token token(std::size_t item, std::size_t pos) const;
    /// All tokens, item-major then row-major over positions.
    std::vector<Token> tokens() const;

    /// Inverse of tokens(): rounds each entry to binary32.
    static LatentContainer from_tokens(std::span<const Token> tokens, std::uint32_t h, std::uint32_t w);

    void validate() const;
};

void write_container(std::ostream& out, const LatentContainer& c);
LatentContainer read_container(std::istream& in);

void write_container(const std::filesystem::path& path, const LatentContainer& c);
LatentContainer read_container(const std::filesystem::path& path);

}  // namespace slfm
