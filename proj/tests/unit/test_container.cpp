#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "slfm/container.hpp"
#include "slfm/errors.hpp"

namespace {

using namespace slfm;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected slfm::Error";
    return ErrorKind::InvalidArgument;
}

void append_le(std::string& s, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

// Reference encoder written directly from the byte layout.
std::string encode(std::uint32_t d, std::uint32_t h, std::uint32_t w, std::uint32_t n, const std::vector<float>& data,
                   std::uint16_t version = 1, const char* magic = "SLFM") {
    std::string s(magic, 4);
    append_le(s, version, 2);
    for (std::uint32_t f : {d, h, w, n}) append_le(s, f, 4);
    for (float x : data) append_le(s, std::bit_cast<std::uint32_t>(x), 4);
    return s;
}

LatentContainer decode(const std::string& bytes) {
    std::istringstream in(bytes);
    return read_container(in);
}

std::string serialize(const LatentContainer& c) {
    std::ostringstream out;
    write_container(out, c);
    return out.str();
}

float random_finite(std::mt19937& rng) {
    // Arbitrary bit patterns cover subnormals, signed zeros and extremes.
    for (;;) {
        const float x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
        if (std::isfinite(x)) return x;
    }
}

TEST(Container, HeaderLayout) {
    const std::vector<float> data{1.0f, -2.5f};
    LatentContainer c;
    c.d = 2;
    c.h = 1;
    c.w = 1;
    c.n_items = 1;
    c.payload = data;
    const std::string bytes = serialize(c);
    EXPECT_EQ(bytes.size(), LatentContainer::kHeaderBytes + 8);
    EXPECT_EQ(bytes, encode(2, 1, 1, 1, data));
    EXPECT_EQ(bytes.substr(0, 6), std::string("SLFM\x01\x00", 6));
}

TEST(Container, FuzzedRoundTripIsBitExact) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::uint32_t> dim(0, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint32_t d = dim(rng), h = dim(rng), w = dim(rng), n = dim(rng);
        std::vector<float> data(std::size_t{d} * h * w * n);
        for (float& x : data) x = random_finite(rng);
        const std::string ref = encode(d, h, w, n, data);

        const LatentContainer c = decode(ref);
        EXPECT_EQ(c.d, d);
        EXPECT_EQ(c.h, h);
        EXPECT_EQ(c.w, w);
        EXPECT_EQ(c.n_items, n);
        ASSERT_EQ(c.payload.size(), data.size());
        EXPECT_EQ(std::memcmp(c.payload.data(), data.data(), data.size() * sizeof(float)), 0);
        EXPECT_EQ(serialize(c), ref);
    }
}

TEST(Container, TokenOrderIsChannelMajorWithinItem) {
    // d=2, h=1, w=3, n=2: item 1, position 2 holds channels at offsets 6+2 and 6+3+2.
    std::vector<float> data(12);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(i);
    const LatentContainer c = decode(encode(2, 1, 3, 2, data));
    EXPECT_EQ(c.token(1, 2), (Token{8.0, 11.0}));
    EXPECT_EQ(c.token(0, 0), (Token{0.0, 3.0}));
    const auto all = c.tokens();
    ASSERT_EQ(all.size(), 6u);
    EXPECT_EQ(all[5], c.token(1, 2));
    const LatentContainer back = LatentContainer::from_tokens(all, 1, 3);
    EXPECT_EQ(back.payload, c.payload);
}

TEST(Container, FromTokensRejectsBadShapes) {
    const std::vector<Token> tokens{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    EXPECT_EQ(kind_of([&] { LatentContainer::from_tokens(tokens, 1, 2); }), ErrorKind::InvalidArgument);
    const std::vector<Token> ragged{{1.0, 2.0}, {3.0}};
    EXPECT_EQ(kind_of([&] { LatentContainer::from_tokens(ragged, 1, 1); }), ErrorKind::DimensionMismatch);
}

TEST(Container, RejectsBadMagic) {
    EXPECT_EQ(kind_of([] { decode(encode(1, 1, 1, 1, {1.0f}, 1, "SLFX")); }), ErrorKind::Format);
}

TEST(Container, RejectsBadVersion) {
    EXPECT_EQ(kind_of([] { decode(encode(1, 1, 1, 1, {1.0f}, 2)); }), ErrorKind::Format);
    EXPECT_EQ(kind_of([] { decode(encode(1, 1, 1, 1, {1.0f}, 0)); }), ErrorKind::Format);
}

TEST(Container, RejectsTruncatedInput) {
    const std::string full = encode(2, 2, 2, 1, std::vector<float>(8, 0.5f));
    for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{21}, full.size() - 1, full.size() - 4}) {
        EXPECT_EQ(kind_of([&] { decode(full.substr(0, len)); }), ErrorKind::Format) << len;
    }
}

TEST(Container, RejectsOversizedPayload) {
    std::string bytes = encode(2, 1, 1, 1, {1.0f, 2.0f});
    bytes.push_back('\0');
    EXPECT_EQ(kind_of([&] { decode(bytes); }), ErrorKind::Format);
}

TEST(Container, RejectsAbsurdHeaderWithoutAllocating) {
    const std::string bytes = encode(0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, {1.0f});
    EXPECT_EQ(kind_of([&] { decode(bytes); }), ErrorKind::Format);
}

TEST(Container, RejectsNonFinitePayload) {
    for (float bad : {std::numeric_limits<float>::quiet_NaN(), std::numeric_limits<float>::infinity(),
                      -std::numeric_limits<float>::infinity()}) {
        EXPECT_EQ(kind_of([&] { decode(encode(1, 1, 1, 2, {0.0f, bad})); }), ErrorKind::Format);
        LatentContainer c;
        c.d = c.h = c.w = c.n_items = 1;
        c.payload = {bad};
        EXPECT_EQ(kind_of([&] { serialize(c); }), ErrorKind::Format);
    }
}

TEST(Container, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "slfm_container_test.slfm";
    LatentContainer c;
    c.d = 3;
    c.h = 2;
    c.w = 1;
    c.n_items = 2;
    c.payload = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    write_container(path, c);
    const LatentContainer back = read_container(path);
    EXPECT_EQ(back.payload, c.payload);
    std::filesystem::remove(path);
    EXPECT_EQ(kind_of([&] { read_container(path); }), ErrorKind::Format);
}

}  // namespace
