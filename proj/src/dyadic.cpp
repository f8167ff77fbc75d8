#include <kfib/dyadic.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace kfib {

void DyadicFloat::normalize() {
    if (man_ == 0) {
        exp_ = 0;
        return;
    }
    unsigned long tz = mpz_scan1(man_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_tdiv_q_2exp(man_.get_mpz_t(), man_.get_mpz_t(), tz);
        exp_ += static_cast<long>(tz);
    }
}

int DyadicFloat::cmp(const DyadicFloat& o) const {
    int sa = sgn(), sb = o.sgn();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    // Same sign: compare magnitudes via top-bit positions first.
    long ta = bit_length() + exp_;  // 2^(ta-1) <= |a| < 2^ta
    long tb = o.bit_length() + o.exp_;
    if (ta != tb) {
        int mag = ta < tb ? -1 : 1;
        return sa > 0 ? mag : -mag;
    }
    // Align exponents and compare exactly.
    long e = std::min(exp_, o.exp_);
    BigInt a = man_ << static_cast<unsigned long>(exp_ - e);
    BigInt b = o.man_ << static_cast<unsigned long>(o.exp_ - e);
    return ::cmp(a, b) < 0 ? -1 : (a == b ? 0 : 1);
}

DyadicFloat operator+(const DyadicFloat& a, const DyadicFloat& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long e = std::min(a.exp_, b.exp_);
    BigInt m = (a.man_ << static_cast<unsigned long>(a.exp_ - e)) +
               (b.man_ << static_cast<unsigned long>(b.exp_ - e));
    return DyadicFloat(std::move(m), e);
}

DyadicFloat operator-(const DyadicFloat& a, const DyadicFloat& b) { return a + (-b); }

DyadicFloat operator*(const DyadicFloat& a, const DyadicFloat& b) {
    return DyadicFloat(a.man_ * b.man_, a.exp_ + b.exp_);
}

DyadicFloat DyadicFloat::round_down(long bits) const {
    long len = bit_length();
    if (len <= bits) return *this;
    unsigned long shift = static_cast<unsigned long>(len - bits);
    BigInt m;
    mpz_fdiv_q_2exp(m.get_mpz_t(), man_.get_mpz_t(), shift);
    return DyadicFloat(std::move(m), exp_ + static_cast<long>(shift));
}

DyadicFloat DyadicFloat::round_up(long bits) const {
    long len = bit_length();
    if (len <= bits) return *this;
    unsigned long shift = static_cast<unsigned long>(len - bits);
    BigInt m;
    mpz_cdiv_q_2exp(m.get_mpz_t(), man_.get_mpz_t(), shift);
    return DyadicFloat(std::move(m), exp_ + static_cast<long>(shift));
}

BigInt DyadicFloat::floor() const {
    if (exp_ >= 0) return man_ << static_cast<unsigned long>(exp_);
    BigInt r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), man_.get_mpz_t(), static_cast<unsigned long>(-exp_));
    return r;
}

BigInt DyadicFloat::ceil() const {
    if (exp_ >= 0) return man_ << static_cast<unsigned long>(exp_);
    BigInt r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), man_.get_mpz_t(), static_cast<unsigned long>(-exp_));
    return r;
}

BigInt DyadicFloat::round_nearest() const {
    // floor(|x| + 1/2) with the sign restored: ties away from zero.
    DyadicFloat half(BigInt(1), -1);
    BigInt r = (abs() + half).floor();
    return sgn() < 0 ? BigInt(-r) : r;
}

Rational DyadicFloat::to_rational() const {
    Rational q(man_);
    if (exp_ >= 0)
        q *= Rational(pow2z(static_cast<unsigned long>(exp_)));
    else
        q /= Rational(pow2z(static_cast<unsigned long>(-exp_)));
    q.canonicalize();
    return q;
}

DyadicFloat DyadicFloat::from_rational_down(const Rational& q, long bits) {
    if (q == 0) return DyadicFloat();
    const BigInt num = q.get_num(), den = q.get_den();  // den > 0 canonical
    long lnum = floor_log2(BigInt(::abs(num)));
    long lden = floor_log2(den);
    long s = bits + 2 + std::max<long>(0, lden - lnum);
    BigInt r = num << static_cast<unsigned long>(s);
    BigInt m;
    mpz_fdiv_q(m.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    return DyadicFloat(std::move(m), -s);
}

DyadicFloat DyadicFloat::from_rational_up(const Rational& q, long bits) {
    if (q == 0) return DyadicFloat();
    const BigInt num = q.get_num(), den = q.get_den();
    long lnum = floor_log2(BigInt(::abs(num)));
    long lden = floor_log2(den);
    long s = bits + 2 + std::max<long>(0, lden - lnum);
    BigInt r = num << static_cast<unsigned long>(s);
    BigInt m;
    mpz_cdiv_q(m.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    return DyadicFloat(std::move(m), -s);
}

double DyadicFloat::to_double() const {
    if (is_zero()) return 0.0;
    long e2;
    double d = mpz_get_d_2exp(&e2, man_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(std::max<long>(
                             std::min<long>(e2 + exp_, 1 << 20), -(1 << 20))));
}

std::string DyadicFloat::to_decimal(size_t digits) const {
    if (is_zero()) return "0";
    if (digits < 1) digits = 1;
    // e10 = floor(log10 |x|), found from the binary magnitude and corrected exactly.
    BigInt aman = ::abs(man_);
    long top = bit_length() + exp_;  // 2^(top-1) <= |x| < 2^top
    long e10 = static_cast<long>(std::floor((top - 1) * 0.30102999566398119));
    auto cmp_pow10 = [&](long e) {
        // compare |x| with 10^e:  aman * 2^exp ? 10^e
        BigInt p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e >= 0 ? e : -e));
        BigInt lhs = aman, rhs = p10;
        if (e < 0) {
            lhs *= p10;
            rhs = 1;
        }
        if (exp_ >= 0)
            lhs <<= static_cast<unsigned long>(exp_);
        else
            rhs <<= static_cast<unsigned long>(-exp_);
        return ::cmp(lhs, rhs);
    };
    while (cmp_pow10(e10) < 0) --e10;
    while (cmp_pow10(e10 + 1) >= 0) ++e10;
    // mantissa digits: floor(|x| / 10^(e10 - digits + 1))
    long shift10 = e10 - static_cast<long>(digits) + 1;
    BigInt num = aman, den = 1;
    if (exp_ >= 0)
        num <<= static_cast<unsigned long>(exp_);
    else
        den <<= static_cast<unsigned long>(-exp_);
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift10 >= 0 ? shift10 : -shift10));
    if (shift10 >= 0)
        den *= p10;
    else
        num *= p10;
    BigInt digs = num / den;
    std::string ds = digs.get_str();
    while (ds.size() > digits) {  // carry from the magnitude correction
        ds.pop_back();
        ++e10;
    }
    std::ostringstream os;
    if (sgn() < 0) os << '-';
    os << ds[0];
    if (ds.size() > 1) os << '.' << ds.substr(1);
    os << 'e' << e10;
    return os.str();
}

std::string DyadicFloat::to_hex_p() const {
    std::ostringstream os;
    os << man_.get_str(16) << " p " << exp_;
    return os.str();
}

DyadicFloat DyadicFloat::from_hex_p(const std::string& s) {
    std::istringstream is(s);
    std::string hex, p;
    long e;
    if (!(is >> hex >> p >> e) || p != "p")
        throw cache_error("bad dyadic literal: " + s);
    BigInt m;
    if (mpz_set_str(m.get_mpz_t(), hex.c_str(), 16) != 0)
        throw cache_error("bad dyadic mantissa: " + s);
    return DyadicFloat(std::move(m), e);
}

DyadicFloat div_down(const DyadicFloat& a, const DyadicFloat& b, long bits) {
    if (b.is_zero()) throw domain_error("division by zero");
    if (a.is_zero()) return DyadicFloat();
    long s = bits + 2 + std::max<long>(0, b.bit_length() - a.bit_length());
    BigInt num = a.mantissa() << static_cast<unsigned long>(s);
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mantissa().get_mpz_t());
    return DyadicFloat(std::move(q), a.exponent() - b.exponent() - s);
}

DyadicFloat div_up(const DyadicFloat& a, const DyadicFloat& b, long bits) {
    if (b.is_zero()) throw domain_error("division by zero");
    if (a.is_zero()) return DyadicFloat();
    long s = bits + 2 + std::max<long>(0, b.bit_length() - a.bit_length());
    BigInt num = a.mantissa() << static_cast<unsigned long>(s);
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mantissa().get_mpz_t());
    return DyadicFloat(std::move(q), a.exponent() - b.exponent() - s);
}

namespace {

// Shift a's mantissa so that the working exponent is even and the mantissa
// carries about 2*bits significant bits; returns (m2, half_exp).
std::pair<BigInt, long> sqrt_scale(const DyadicFloat& a, long bits) {
    long t = std::max<long>(0, 2 * bits + 2 - a.bit_length());
    if (((a.exponent() - t) & 1L) != 0) ++t;
    BigInt m2 = a.mantissa() << static_cast<unsigned long>(t);
    return {std::move(m2), (a.exponent() - t) / 2};
}

}  // namespace

DyadicFloat sqrt_down(const DyadicFloat& a, long bits) {
    if (a.sgn() < 0) throw domain_error("sqrt of negative");
    if (a.is_zero()) return DyadicFloat();
    auto [m2, he] = sqrt_scale(a, bits);
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), m2.get_mpz_t());
    return DyadicFloat(std::move(r), he);
}

DyadicFloat sqrt_up(const DyadicFloat& a, long bits) {
    if (a.sgn() < 0) throw domain_error("sqrt of negative");
    if (a.is_zero()) return DyadicFloat();
    auto [m2, he] = sqrt_scale(a, bits);
    BigInt r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), m2.get_mpz_t());
    if (rem != 0) r += 1;
    return DyadicFloat(std::move(r), he);
}

}  // namespace kfib
