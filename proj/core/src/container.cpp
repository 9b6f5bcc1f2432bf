#include "slfm/container.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "slfm/errors.hpp"

namespace slfm {

namespace {

template <typename U>
void put_le(std::ostream& out, U value) {
    std::array<char, sizeof(U)> buf{};
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
    out.write(buf.data(), buf.size());
}

template <typename U>
U get_le(const unsigned char* p) {
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
    return value;
}

Error format_error(const std::string& what) { return Error(ErrorKind::Format, what); }

}  // namespace

Token LatentContainer::token(std::size_t item, std::size_t pos) const {
    const std::size_t hw = tokens_per_item();
    const float* base = payload.data() + item * std::size_t{d} * hw + pos;
    Token tok(d);
    for (std::size_t c = 0; c < d; ++c) tok[c] = static_cast<double>(base[c * hw]);
    return tok;
}

std::vector<Token> LatentContainer::tokens() const {
    std::vector<Token> out;
    out.reserve(num_tokens());
    for (std::size_t i = 0; i < n_items; ++i) {
        for (std::size_t p = 0; p < tokens_per_item(); ++p) out.push_back(token(i, p));
    }
    return out;
}

LatentContainer LatentContainer::from_tokens(std::span<const Token> tokens, std::uint32_t h, std::uint32_t w) {
    const std::size_t hw = std::size_t{h} * w;
    if (hw == 0 || tokens.size() % hw != 0) {
        throw Error(ErrorKind::InvalidArgument, "token count " + std::to_string(tokens.size()) +
                                                    " is not a multiple of h*w = " + std::to_string(hw));
    }
    LatentContainer c;
    c.d = tokens.empty() ? 0 : static_cast<std::uint32_t>(tokens.front().size());
    c.h = h;
    c.w = w;
    c.n_items = static_cast<std::uint32_t>(tokens.size() / hw);
    c.payload.resize(c.expected_floats());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (tokens[k].size() != c.d) throw Error(ErrorKind::DimensionMismatch, "ragged token set");
        const std::size_t item = k / hw;
        const std::size_t pos = k % hw;
        float* base = c.payload.data() + item * std::size_t{c.d} * hw + pos;
        for (std::size_t ch = 0; ch < c.d; ++ch) base[ch * hw] = static_cast<float>(tokens[k][ch]);
    }
    c.validate();
    return c;
}

void LatentContainer::validate() const {
    if (payload.size() != expected_floats()) {
        throw format_error("payload holds " + std::to_string(payload.size()) + " floats, header implies " +
                           std::to_string(expected_floats()));
    }
    for (float x : payload) {
        if (!std::isfinite(x)) throw format_error("payload contains a non-finite value");
    }
}

void write_container(std::ostream& out, const LatentContainer& c) {
    c.validate();
    out.write(LatentContainer::kMagic.data(), LatentContainer::kMagic.size());
    put_le<std::uint16_t>(out, LatentContainer::kVersion);
    put_le<std::uint32_t>(out, c.d);
    put_le<std::uint32_t>(out, c.h);
    put_le<std::uint32_t>(out, c.w);
    put_le<std::uint32_t>(out, c.n_items);
    for (float x : c.payload) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
    if (!out) throw format_error("write failed");
}

LatentContainer read_container(std::istream& in) {
    std::array<unsigned char, LatentContainer::kHeaderBytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in.gcount() != static_cast<std::streamsize>(header.size())) {
        throw format_error("truncated header: " + std::to_string(in.gcount()) + " of " +
                           std::to_string(header.size()) + " bytes");
    }
    if (std::memcmp(header.data(), LatentContainer::kMagic.data(), 4) != 0) throw format_error("bad magic");
    const auto version = get_le<std::uint16_t>(header.data() + 4);
    if (version != LatentContainer::kVersion) throw format_error("unsupported version " + std::to_string(version));

    LatentContainer c;
    c.d = get_le<std::uint32_t>(header.data() + 6);
    c.h = get_le<std::uint32_t>(header.data() + 10);
    c.w = get_le<std::uint32_t>(header.data() + 14);
    c.n_items = get_le<std::uint32_t>(header.data() + 18);

    // Expected payload size, saturated so absurd headers cannot wrap around.
    std::uint64_t want = 4;
    for (std::uint64_t f : {std::uint64_t{c.d}, std::uint64_t{c.h}, std::uint64_t{c.w}, std::uint64_t{c.n_items}}) {
        want = (f != 0 && want > UINT64_MAX / f) ? UINT64_MAX : want * f;
    }
    constexpr std::size_t kChunk = 1 << 16;
    std::vector<unsigned char> bytes;
    std::array<char, kChunk> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        bytes.insert(bytes.end(), buf.data(), buf.data() + in.gcount());
        if (bytes.size() > want) break;
    }
    if (bytes.size() != want) {
        throw format_error(std::string(bytes.size() < want ? "truncated" : "oversized") + " payload: " +
                           std::to_string(bytes.size()) + " bytes, header implies " + std::to_string(want));
    }
    c.payload.resize(bytes.size() / 4);
    for (std::size_t i = 0; i < c.payload.size(); ++i) {
        c.payload[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes.data() + 4 * i));
    }
    c.validate();
    return c;
}

void write_container(const std::filesystem::path& path, const LatentContainer& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot open '" + path.string() + "' for writing");
    write_container(out, c);
}

LatentContainer read_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open '" + path.string() + "'");
    return read_container(in);
}

}  // namespace slfm
