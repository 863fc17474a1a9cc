#pragma once

#include <gmpxx.h>

#include <string>

#include "lddkit/int128.hpp"

namespace lddkit {

// Exact rational arithmetic for every guarantee check. No floating point
// ever enters a comparison of the form x <= (1+eps)^k * y + c.
using Rat = mpq_class;
using Int = mpz_class;

inline Int mpz_of_i128(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
    Int hi((uint64_t)(u >> 64));
    Int lo((uint64_t)u);
    Int r = (hi << 64) + lo;
    return neg ? -r : r;
}

inline Rat rat_of_i128(i128 v) { return Rat(mpz_of_i128(v)); }

// Throws OverflowError if v does not fit a signed 128-bit integer.
inline i128 i128_of_mpz(const Int& v) {
    Int a = abs(v);
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 127) throw OverflowError("mpz exceeds int128");
    i128 r = 0;
    // Extract 64-bit limbs from the top down.
    Int hi = a >> 64;
    Int lo = a - (hi << 64);
    r = ((i128)hi.get_ui() << 64) | (i128)lo.get_ui();
    return v < 0 ? -r : r;
}

inline Rat rat_pow(const Rat& base, unsigned k) {
    Rat acc(1), b = base;
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    acc.canonicalize();
    return acc;
}

// floor(log2 x) for x > 0, exact.
inline long floor_log2_rat(const Rat& x) {
    LDD_REQUIRE(sgn(x) > 0, "floor_log2 of nonpositive rational");
    const Int num = x.get_num(), den = x.get_den();
    if (num >= den) {
        long e = (long)mpz_sizeinbase(num.get_mpz_t(), 2) - (long)mpz_sizeinbase(den.get_mpz_t(), 2);
        if (e < 0) e = 0;
        while (e > 0 && num < (den << e)) --e;
        while (num >= (den << (e + 1))) ++e;
        return e;
    }
    // x < 1: find k >= 1 with 2^-k <= x < 2^-(k-1).
    long k = (long)mpz_sizeinbase(den.get_mpz_t(), 2) - (long)mpz_sizeinbase(num.get_mpz_t(), 2);
    if (k < 1) k = 1;
    while ((num << k) < den) ++k;
    while (k > 1 && (num << (k - 1)) >= den) --k;
    return -k;
}

// ceil(log2 x) for x > 0, exact.
inline long ceil_log2_rat(const Rat& x) {
    long f = floor_log2_rat(x);
    Rat p = f >= 0 ? Rat(Int(1) << f) : Rat(Int(1), Int(1) << -f);
    p.canonicalize();
    return x == p ? f : f + 1;
}

// The exponent max(0, floor(log2 2D)) used by the blurry budgets.
inline unsigned blur_exponent(const Rat& D) {
    Rat twoD = D * 2;
    if (twoD <= 1) return 0;
    long e = floor_log2_rat(twoD);
    return e < 0 ? 0u : (unsigned)e;
}

inline std::string rat_str(const Rat& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// ceil(log2 max(n,4)): the default denominator of module precision defaults.
inline unsigned ceil_log2_at_least4(i128 n) {
    i128 m = n < 4 ? 4 : n;
    int f = floor_log2_i128(m);
    return (((i128)1 << f) == m) ? (unsigned)f : (unsigned)f + 1;
}

// eps = 1/ceil(log2 max(n,4)), the default where a theorem says 1/log n.
inline Rat default_eps_log(i128 n) { return Rat(1, (unsigned long)ceil_log2_at_least4(n)); }

// eps = 1/ceil(log2 max(n,4))^2, where a theorem says 1/log^2 n.
inline Rat default_eps_log2(i128 n) {
    unsigned long l = ceil_log2_at_least4(n);
    return Rat(1, l * l);
}

} // namespace lddkit
