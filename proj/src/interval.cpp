#include <kfib/interval.hpp>

#include <map>
#include <mutex>

namespace kfib {

DyadicInterval iv_neg(const DyadicInterval& a) { return DyadicInterval(-a.hi, -a.lo); }

DyadicInterval iv_abs(const DyadicInterval& a) {
    if (a.lo.sgn() >= 0) return a;
    if (a.hi.sgn() <= 0) return iv_neg(a);
    return DyadicInterval(DyadicFloat(), std::max(-a.lo, a.hi));
}

DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, long bits) {
    return DyadicInterval((a.lo + b.lo).round_down(bits), (a.hi + b.hi).round_up(bits));
}

DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, long bits) {
    return DyadicInterval((a.lo - b.hi).round_down(bits), (a.hi - b.lo).round_up(bits));
}

DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, long bits) {
    // Sign fast paths cover the common cases; fall back to min/max of the
    // four exact endpoint products.
    if (a.lo.sgn() >= 0 && b.lo.sgn() >= 0)
        return DyadicInterval((a.lo * b.lo).round_down(bits), (a.hi * b.hi).round_up(bits));
    if (a.hi.sgn() <= 0 && b.hi.sgn() <= 0)
        return DyadicInterval((a.hi * b.hi).round_down(bits), (a.lo * b.lo).round_up(bits));
    if (a.lo.sgn() >= 0 && b.hi.sgn() <= 0)
        return DyadicInterval((a.hi * b.lo).round_down(bits), (a.lo * b.hi).round_up(bits));
    if (a.hi.sgn() <= 0 && b.lo.sgn() >= 0)
        return DyadicInterval((a.lo * b.hi).round_down(bits), (a.hi * b.lo).round_up(bits));
    DyadicFloat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    DyadicFloat mn = std::min(std::min(p1, p2), std::min(p3, p4));
    DyadicFloat mx = std::max(std::max(p1, p2), std::max(p3, p4));
    return DyadicInterval(mn.round_down(bits), mx.round_up(bits));
}

DyadicInterval iv_mul_int(const DyadicInterval& a, const BigInt& z, long bits) {
    DyadicFloat f(z);
    if (z >= 0)
        return DyadicInterval((a.lo * f).round_down(bits), (a.hi * f).round_up(bits));
    return DyadicInterval((a.hi * f).round_down(bits), (a.lo * f).round_up(bits));
}

DyadicInterval iv_div(const DyadicInterval& a, const DyadicInterval& b, long bits) {
    if (b.contains_zero()) throw domain_error("interval division by interval containing zero");
    if (b.lo.sgn() > 0) {
        const DyadicFloat& dl = a.lo.sgn() >= 0 ? b.hi : b.lo;
        const DyadicFloat& dh = a.hi.sgn() >= 0 ? b.lo : b.hi;
        return DyadicInterval(div_down(a.lo, dl, bits), div_up(a.hi, dh, bits));
    }
    // b strictly negative: a/b = -(a / (-b))
    return iv_neg(iv_div(a, iv_neg(b), bits));
}

DyadicInterval iv_pow(const DyadicInterval& a, long e, long bits) {
    if (e == 0) return DyadicInterval(DyadicFloat(1L));
    if (e < 0) return iv_div(DyadicInterval(DyadicFloat(1L)), iv_pow(a, -e, bits), bits);
    // binary powering, rounding outward at each step
    DyadicInterval base = a, acc(DyadicFloat(1L));
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1) acc = iv_mul(acc, base, bits);
        n >>= 1;
        if (n > 0) base = iv_mul(base, base, bits);
    }
    return acc;
}

DyadicInterval iv_sqrt(const DyadicInterval& a, long bits) {
    if (a.lo.sgn() < 0) throw domain_error("sqrt of interval with negative part");
    return DyadicInterval(sqrt_down(a.lo, bits), sqrt_up(a.hi, bits));
}

namespace {

// atanh(t) enclosure for an interval t with |t| <= 1/2, via the odd series
// with tail bound  sum_{j>i} t^(2j+1)/(2j+1) <= |t|^(2i+3) / ((2i+3)(1-t^2)).
DyadicInterval atanh_series(const DyadicInterval& t, long bits) {
    long wb = bits + 16;
    DyadicInterval t2 = iv_mul(t, t, wb);
    if (t2.hi >= DyadicFloat(BigInt(1), -1))  // |t| must stay below ~0.707
        throw domain_error("atanh series argument too large");
    DyadicInterval power = t;  // t^(2i+1)
    DyadicInterval sum = t;
    DyadicFloat tol = DyadicFloat::power_of_two(-(bits + 8));
    unsigned long i = 0;
    for (;;) {
        ++i;
        power = iv_mul(power, t2, wb);
        DyadicInterval term = iv_div(power, DyadicInterval(DyadicFloat(long(2 * i + 1))), wb);
        sum = iv_add(sum, term, wb);
        if (iv_abs(power).hi < tol) break;
    }
    // tail: magnitude at most |t|^(2i+3) / ((2i+3)(1 - t^2))
    DyadicInterval ptail = iv_mul(iv_abs(power), t2, wb);
    DyadicInterval denom = iv_mul_int(
        iv_sub(DyadicInterval(DyadicFloat(1L)), t2, wb), BigInt(2 * i + 3), wb);
    DyadicFloat tail = iv_div(ptail, denom, wb).hi;
    if (tail.sgn() < 0) tail = DyadicFloat();
    return DyadicInterval((sum.lo - tail).round_down(wb), (sum.hi + tail).round_up(wb));
}

std::mutex g_const_mutex;
std::map<long, DyadicInterval> g_ln2_cache;
std::map<long, DyadicInterval> g_inv_ln2_cache;

}  // namespace

DyadicInterval ln2_interval(long bits) {
    std::lock_guard<std::mutex> lk(g_const_mutex);
    auto it = g_ln2_cache.find(bits);
    if (it != g_ln2_cache.end()) return it->second;
    // ln 2 = 2 atanh(1/3)
    long wb = bits + 16;
    DyadicInterval third = iv_div(DyadicInterval(DyadicFloat(1L)),
                                  DyadicInterval(DyadicFloat(3L)), wb);
    DyadicInterval r = iv_mul_int(atanh_series(third, wb), BigInt(2), wb);
    g_ln2_cache.emplace(bits, r);
    return r;
}

DyadicInterval inv_ln2_interval(long bits) {
    {
        std::lock_guard<std::mutex> lk(g_const_mutex);
        auto it = g_inv_ln2_cache.find(bits);
        if (it != g_inv_ln2_cache.end()) return it->second;
    }
    DyadicInterval l2 = ln2_interval(bits + 16);
    DyadicInterval r = iv_div(DyadicInterval(DyadicFloat(1L)), l2, bits + 16);
    std::lock_guard<std::mutex> lk(g_const_mutex);
    g_inv_ln2_cache.emplace(bits, r);
    return r;
}

DyadicInterval ln_point(const DyadicFloat& x, long bits) {
    if (x.sgn() <= 0) throw domain_error("ln of nonpositive value");
    long wb = bits + 16;
    // x = m * 2^e with m in [1, 2)
    long e = x.bit_length() - 1 + x.exponent();
    DyadicFloat m(x.mantissa(), -(x.bit_length() - 1));
    // ln m = 2 atanh((m-1)/(m+1)), t in [0, 1/3)
    DyadicFloat one(1L);
    DyadicInterval t = iv_div(DyadicInterval(m - one), DyadicInterval(m + one), wb);
    DyadicInterval lnm = iv_mul_int(atanh_series(t, wb), BigInt(2), wb);
    if (e == 0) return lnm;
    DyadicInterval el2 = iv_mul_int(ln2_interval(wb), BigInt(e), wb);
    return iv_add(lnm, el2, wb);
}

DyadicInterval ln_interval(const DyadicInterval& x, long bits) {
    if (x.lo.sgn() <= 0) throw domain_error("ln of interval with nonpositive part");
    return DyadicInterval(ln_point(x.lo, bits).lo, ln_point(x.hi, bits).hi);
}

namespace {

// Exact distance from a dyadic point to the nearest integer.
DyadicFloat point_int_distance(const DyadicFloat& y) {
    BigInt n = y.round_nearest();
    return (y - DyadicFloat(n)).abs();
}

// Is there an integer in [a, b]?
bool interval_has_integer(const DyadicFloat& a, const DyadicFloat& b) {
    return a.ceil() <= b.floor();
}

}  // namespace

DyadicInterval nearest_int_distance(const DyadicInterval& x) {
    DyadicFloat da = point_int_distance(x.lo);
    DyadicFloat db = point_int_distance(x.hi);
    DyadicFloat half(BigInt(1), -1);
    DyadicFloat lo = interval_has_integer(x.lo, x.hi) ? DyadicFloat() : std::min(da, db);
    // A half-integer inside [lo,hi] <=> an odd integer inside [2lo, 2hi].
    DyadicFloat two(2L);
    BigInt a2 = (x.lo * two).ceil(), b2 = (x.hi * two).floor();
    bool has_half = false;
    if (a2 <= b2) {
        if (a2 != b2)
            has_half = true;  // two consecutive integers include an odd one
        else
            has_half = mpz_odd_p(a2.get_mpz_t());
    }
    DyadicFloat hi = has_half ? half : std::max(da, db);
    if (hi > half) hi = half;  // ||.|| never exceeds 1/2
    return DyadicInterval(lo, hi);
}

}  // namespace kfib
