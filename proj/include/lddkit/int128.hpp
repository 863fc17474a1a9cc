#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "lddkit/errors.hpp"

namespace lddkit {

// Distances and weights accumulate in signed 128-bit integers.
// Overflow is a hard error, never wraparound.
using i128 = __int128;

constexpr i128 I128_MAX = (~(i128)0) ^ ((i128)1 << 127);

// Sentinel for "unreachable / no value"; also the identity of min-aggregates.
constexpr i128 INF128 = I128_MAX;

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int128 add overflow");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int128 mul overflow");
    return r;
}

inline std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
    char buf[48];
    int p = 48;
    while (u > 0) {
        buf[--p] = char('0' + (int)(u % 10));
        u /= 10;
    }
    std::string s(buf + p, buf + 48);
    return neg ? "-" + s : s;
}

// Parses a base-10 integer; throws ParseError on junk or overflow.
inline i128 parse_i128(const std::string& s) {
    if (s.empty()) throw ParseError("empty integer literal");
    size_t at = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        at = 1;
    }
    if (at == s.size()) throw ParseError("bare sign is not an integer: '" + s + "'");
    i128 v = 0;
    for (; at < s.size(); ++at) {
        char c = s[at];
        if (c < '0' || c > '9') throw ParseError("bad integer literal: '" + s + "'");
        v = checked_add(checked_mul(v, 10), c - '0');
    }
    return neg ? -v : v;
}

// floor(log2 v) for v >= 1.
inline int floor_log2_i128(i128 v) {
    LDD_REQUIRE(v >= 1, "floor_log2 of nonpositive value");
    int k = -1;
    unsigned __int128 u = (unsigned __int128)v;
    while (u > 0) {
        u >>= 1;
        ++k;
    }
    return k;
}

} // namespace lddkit
