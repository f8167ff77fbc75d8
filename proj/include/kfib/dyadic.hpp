#pragma once

#include <string>

#include <kfib/bigint.hpp>

namespace kfib {

// Arbitrary-precision dyadic rational man * 2^exp.
// Canonical form: man is odd, or man == 0 and exp == 0.  Exact add/sub/mul;
// division, sqrt and rounding are directed (round_down toward -inf, round_up
// toward +inf) so interval code can build enclosures on top.
class DyadicFloat {
public:
    DyadicFloat() : man_(0), exp_(0) {}
    DyadicFloat(BigInt mantissa, long exponent) : man_(std::move(mantissa)), exp_(exponent) {
        normalize();
    }
    explicit DyadicFloat(long v) : man_(v), exp_(0) { normalize(); }
    explicit DyadicFloat(const BigInt& v) : man_(v), exp_(0) { normalize(); }

    static DyadicFloat power_of_two(long e) { return DyadicFloat(BigInt(1), e); }

    const BigInt& mantissa() const { return man_; }
    long exponent() const { return exp_; }

    bool is_zero() const { return man_ == 0; }
    int sgn() const { return mpz_sgn(man_.get_mpz_t()); }

    // Bits in |mantissa|; 0 for zero.
    long bit_length() const {
        return is_zero() ? 0 : static_cast<long>(mpz_sizeinbase(man_.get_mpz_t(), 2));
    }

    int cmp(const DyadicFloat& o) const;
    bool operator==(const DyadicFloat& o) const { return man_ == o.man_ && exp_ == o.exp_; }
    bool operator!=(const DyadicFloat& o) const { return !(*this == o); }
    bool operator<(const DyadicFloat& o) const { return cmp(o) < 0; }
    bool operator<=(const DyadicFloat& o) const { return cmp(o) <= 0; }
    bool operator>(const DyadicFloat& o) const { return cmp(o) > 0; }
    bool operator>=(const DyadicFloat& o) const { return cmp(o) >= 0; }

    DyadicFloat operator-() const { return DyadicFloat(-man_, exp_); }
    friend DyadicFloat operator+(const DyadicFloat& a, const DyadicFloat& b);
    friend DyadicFloat operator-(const DyadicFloat& a, const DyadicFloat& b);
    friend DyadicFloat operator*(const DyadicFloat& a, const DyadicFloat& b);

    DyadicFloat abs() const { return sgn() < 0 ? -*this : *this; }

    // Round to at most `bits` significant mantissa bits.
    DyadicFloat round_down(long bits) const;  // toward -inf
    DyadicFloat round_up(long bits) const;    // toward +inf

    BigInt floor() const;
    BigInt ceil() const;
    // Nearest integer, ties rounded away from zero.
    BigInt round_nearest() const;
    bool is_integer() const { return exp_ >= 0; }

    Rational to_rational() const;
    static DyadicFloat from_rational_down(const Rational& q, long bits);
    static DyadicFloat from_rational_up(const Rational& q, long bits);

    double to_double() const;  // display only; may over/underflow to inf/0
    // Approximate scientific decimal, display/reporting only.
    std::string to_decimal(size_t digits = 18) const;

    // Lossless text form "<sign><hex-mantissa> p <exponent>", e.g. "-1a3f p -210".
    std::string to_hex_p() const;
    static DyadicFloat from_hex_p(const std::string& s);

private:
    BigInt man_;
    long exp_;
    void normalize();
};

// Directed division: result has about `bits` significant bits and is a valid
// lower (div_down) / upper (div_up) bound of a/b.  b must be nonzero.
DyadicFloat div_down(const DyadicFloat& a, const DyadicFloat& b, long bits);
DyadicFloat div_up(const DyadicFloat& a, const DyadicFloat& b, long bits);

// Directed square root, a >= 0.
DyadicFloat sqrt_down(const DyadicFloat& a, long bits);
DyadicFloat sqrt_up(const DyadicFloat& a, long bits);

}  // namespace kfib
