#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xsw/core/error.hpp"

namespace xsw {

namespace detail {

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline std::string_view strip_0x(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.remove_prefix(2);
    return text;
}

} // namespace detail

inline std::vector<std::uint8_t> parse_hex_bytes(std::string_view text) {
    text = detail::strip_0x(text);
    if (text.size() % 2 != 0) throw Error(ErrorCode::Parse, "odd-length hex string");
    std::vector<std::uint8_t> out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = detail::hex_nibble(text[2 * i]);
        int lo = detail::hex_nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::Parse, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(2 + bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

/// Fixed-width byte string: 20-byte addresses, 32-byte hashes and words, 4-byte selectors.
template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    static constexpr std::size_t size() { return N; }

    static FixedBytes from_hex(std::string_view text) {
        auto raw = parse_hex_bytes(text);
        if (raw.size() != N) {
            throw Error(ErrorCode::Parse, "expected " + std::to_string(N) + " bytes, got " + std::to_string(raw.size()));
        }
        FixedBytes out;
        std::copy(raw.begin(), raw.end(), out.bytes.begin());
        return out;
    }

    /// Big-endian encoding of `value` in the trailing eight bytes, `tag` in the leading eight.
    static FixedBytes from_counter(std::uint64_t tag, std::uint64_t value) requires(N >= 16) {
        FixedBytes out;
        for (std::size_t i = 0; i < 8; ++i) {
            out.bytes[i] = static_cast<std::uint8_t>(tag >> (56 - 8 * i));
            out.bytes[N - 8 + i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
        }
        return out;
    }

    std::string hex() const { return to_hex(bytes); }
    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

using Address = FixedBytes<20>;
using Hash32 = FixedBytes<32>;
using Word = FixedBytes<32>;
using Selector = FixedBytes<4>;

} // namespace xsw

template <std::size_t N>
struct std::hash<xsw::FixedBytes<N>> {
    std::size_t operator()(const xsw::FixedBytes<N>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto b : v.bytes) h = (h ^ b) * 1099511628211ull;
        return h;
    }
};
