#pragma once

#include <gmpxx.h>

#include <string>

#include <kfib/errors.hpp>

namespace kfib {

using BigInt = mpz_class;
using Rational = mpq_class;

// 2^e for e >= 0.
inline BigInt pow2z(unsigned long e) {
    BigInt r;
    mpz_setbit(r.get_mpz_t(), e);
    return r;
}

// 2^e as an exact rational, e may be negative.
inline Rational pow2q(long e) {
    Rational r;
    if (e >= 0)
        r = Rational(pow2z(static_cast<unsigned long>(e)));
    else
        r = Rational(1, pow2z(static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
}

// Binomial with the degenerate convention: C(a,b) = 0 if a < b or if a or b
// is negative.
inline BigInt binomial(long a, long b) {
    if (a < 0 || b < 0 || a < b) return BigInt(0);
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

// 2-adic valuation of x != 0.
inline unsigned long v2(const BigInt& x) {
    if (x == 0) throw domain_error("v2(0) undefined");
    return mpz_scan1(x.get_mpz_t(), 0);
}

// x == 2^j for some j >= 0.
inline bool is_pow2(const BigInt& x) {
    if (x <= 0) return false;
    return mpz_popcount(x.get_mpz_t()) == 1;
}

// floor(log2(x)) for x > 0.
inline long floor_log2(const BigInt& x) {
    if (x <= 0) throw domain_error("floor_log2 requires x > 0");
    return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)) - 1;
}

inline std::string dec(const BigInt& x) { return x.get_str(); }

}  // namespace kfib
