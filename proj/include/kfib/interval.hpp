#pragma once

#include <kfib/dyadic.hpp>

namespace kfib {

// Closed interval [lo, hi] with dyadic endpoints.  Every operation below
// rounds outward at the given working precision, so results are enclosures
// of the exact real value.
class DyadicInterval {
public:
    DyadicFloat lo, hi;

    DyadicInterval() = default;
    explicit DyadicInterval(const DyadicFloat& point) : lo(point), hi(point) {}
    DyadicInterval(DyadicFloat l, DyadicFloat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw domain_error("interval endpoints out of order");
    }
    static DyadicInterval from_long(long v) { return DyadicInterval(DyadicFloat(v)); }
    static DyadicInterval from_bigint(const BigInt& v) { return DyadicInterval(DyadicFloat(v)); }
    // Outward-rounded enclosure of an exact rational.
    static DyadicInterval from_rational(const Rational& q, long bits) {
        return DyadicInterval(DyadicFloat::from_rational_down(q, bits),
                              DyadicFloat::from_rational_up(q, bits));
    }

    DyadicFloat width() const { return hi - lo; }
    DyadicFloat mid() const { return DyadicFloat(BigInt(1), -1) * (lo + hi); }
    bool contains(const Rational& q) const {
        return lo.to_rational() <= q && q <= hi.to_rational();
    }
    bool contains(const DyadicFloat& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo.sgn() <= 0 && hi.sgn() >= 0; }
    bool contains_interval(const DyadicInterval& inner) const {
        return lo <= inner.lo && inner.hi <= hi;
    }
    bool strictly_positive() const { return lo.sgn() > 0; }
    bool strictly_negative() const { return hi.sgn() < 0; }
};

DyadicInterval iv_neg(const DyadicInterval& a);
DyadicInterval iv_abs(const DyadicInterval& a);
DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, long bits);
DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, long bits);
DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, long bits);
// Exact multiplication by an integer, then outward rounding.
DyadicInterval iv_mul_int(const DyadicInterval& a, const BigInt& z, long bits);
// Requires 0 not in b.
DyadicInterval iv_div(const DyadicInterval& a, const DyadicInterval& b, long bits);
// Integer power, e may be negative (then 0 must not be in a).
DyadicInterval iv_pow(const DyadicInterval& a, long e, long bits);
// Requires a.lo >= 0.
DyadicInterval iv_sqrt(const DyadicInterval& a, long bits);

// Enclosure of ln(x) for an exact dyadic x > 0 (argument reduction to [1,2)
// plus an atanh series with a rigorous tail bound, outward rounding
// throughout).
DyadicInterval ln_point(const DyadicFloat& x, long bits);
// Enclosure of ln over an interval, x.lo > 0.
DyadicInterval ln_interval(const DyadicInterval& x, long bits);
// Cached enclosures of ln 2 and 1/ln 2.
DyadicInterval ln2_interval(long bits);
DyadicInterval inv_ln2_interval(long bits);

// Enclosure of ||x|| = distance from x to the nearest integer.  Exact (no
// working precision needed: endpoints are dyadic).
DyadicInterval nearest_int_distance(const DyadicInterval& x);

}  // namespace kfib
