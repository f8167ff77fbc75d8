#include <kfib/bounds.hpp>

#include <mutex>

namespace kfib {

namespace {

DyadicInterval iv_one() { return DyadicInterval(DyadicFloat(1L)); }

// 1 + ln(v) for an exact positive integer v.
DyadicInterval one_plus_ln(const BigInt& v, long bits) {
    if (v <= 0) throw domain_error("log of nonpositive");
    return iv_add(iv_one(), ln_point(DyadicFloat(v), bits), bits);
}

DyadicInterval ln_of_int(const BigInt& v, long bits) { return ln_point(DyadicFloat(v), bits); }

// c * 10^e as an exact integer (c small, e >= 0).
BigInt dec_const(unsigned long c, unsigned long e) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
    return BigInt(c) * p;
}

}  // namespace

DyadicInterval matveev_lower_bound(const MatveevInputs& in, long bits) {
    if (in.t < 1 || in.D < 1 || in.B < 1 || in.A.size() != static_cast<size_t>(in.t))
        throw domain_error("matveev inputs out of domain");
    for (const auto& a : in.A)
        if (!a.strictly_positive()) throw domain_error("matveev A_i must be positive");
    long wb = bits + 16;
    // 1.4 * 30^{t+3} exactly: 7/5 * 30^{t+3} = 7 * 30^{t+2} * 6
    BigInt pow30;
    mpz_ui_pow_ui(pow30.get_mpz_t(), 30, static_cast<unsigned long>(in.t + 3));
    DyadicInterval mag = iv_div(iv_mul_int(iv_one(), 7 * pow30, wb),
                                DyadicInterval(DyadicFloat(5L)), wb);
    // t^{4.5} = t^4 sqrt(t)
    DyadicInterval t_iv = DyadicInterval(DyadicFloat(long(in.t)));
    mag = iv_mul(mag, iv_pow(t_iv, 4, wb), wb);
    mag = iv_mul(mag, iv_sqrt(t_iv, wb), wb);
    mag = iv_mul_int(mag, BigInt(in.D) * BigInt(in.D), wb);
    mag = iv_mul(mag, one_plus_ln(BigInt(in.D), wb), wb);
    mag = iv_mul(mag, one_plus_ln(in.B, wb), wb);
    for (const auto& a : in.A) mag = iv_mul(mag, a, wb);
    return iv_neg(mag);
}

BoundChain baker_chain(int k, const BigInt& n_hypothesis, long bits) {
    if (k < 4) throw domain_error("baker_chain needs k >= 4");
    if (n_hypothesis < 2) throw domain_error("baker_chain needs a positive n hypothesis");
    long wb = bits + 16;
    DyadicInterval lnk = ln_of_int(BigInt(k), wb);
    BigInt kz(k);

    // closed-form route: floor(2.8e41 k^11 ln^7 k), exact floor certified
    BigInt k11;
    mpz_pow_ui(k11.get_mpz_t(), kz.get_mpz_t(), 11);
    BigInt final_bound;
    {
        long b = wb;
        for (;;) {
            DyadicInterval v = iv_mul_int(iv_pow(ln_of_int(kz, b), 7, b),
                                          dec_const(28, 40) * k11, b);
            BigInt flo = v.lo.floor(), fhi = v.hi.floor();
            if (flo == fhi) {
                final_bound = flo;
                break;
            }
            b *= 2;
            if (b > (1L << 22)) throw precision_exhausted("closed-bound floor did not settle");
        }
    }

    // chain route: A = 5.1e34 k^11 ln^4 k; n < 16 A ln^3 A
    DyadicInterval A = iv_mul_int(iv_pow(lnk, 4, wb), dec_const(51, 33) * k11, wb);
    DyadicInterval lnA = ln_interval(A, wb);
    DyadicInterval chain = iv_mul_int(iv_mul(A, iv_pow(lnA, 3, wb), wb), BigInt(16), wb);

    // min/max bounds evaluated at the larger of (hypothesis, final bound)
    BigInt n_eval = n_hypothesis > final_bound ? n_hypothesis : final_bound;
    DyadicInterval opn = one_plus_ln(n_eval, wb);
    BigInt k4, k7;
    mpz_pow_ui(k4.get_mpz_t(), kz.get_mpz_t(), 4);
    mpz_pow_ui(k7.get_mpz_t(), kz.get_mpz_t(), 7);
    DyadicInterval minb = iv_mul(iv_mul_int(iv_pow(lnk, 2, wb), dec_const(425, 9) * k4, wb),
                                 opn, wb);
    DyadicInterval maxb = iv_mul(iv_mul_int(iv_pow(lnk, 3, wb), dec_const(42, 21) * k7, wb),
                                 iv_pow(opn, 2, wb), wb);

    BoundChain out;
    out.k = k;
    out.min_bound = minb.hi;
    out.max_bound = maxb.hi;
    out.final_n_bound = final_bound;
    out.chain_n_bound = chain.hi;
    out.n_hypothesis_used = n_eval;
    return out;
}

bool cutoff_inequality(int k) {
    if (k < 4) return false;
    BigInt kz(k);
    BigInt k33;
    mpz_pow_ui(k33.get_mpz_t(), kz.get_mpz_t(), 33);
    BigInt c = dec_const(28, 122) * k33;  // 2.8e123 * k^33
    DyadicFloat rhs = DyadicFloat::power_of_two(k - 5);
    for (long bits = 128;; bits *= 2) {
        DyadicInterval lhs = iv_mul_int(iv_pow(ln_of_int(kz, bits), 21, bits), c, bits);
        if (lhs.hi < rhs) return true;
        if (lhs.lo >= rhs) return false;
        if (bits > (1L << 20)) throw precision_exhausted("cutoff comparison did not settle");
    }
}

int cutoff_k() {
    static std::once_flag once;
    static int value = 0;
    std::call_once(once, [] {
        for (int k = 4; k <= 5000; ++k) {
            if (cutoff_inequality(k)) {
                value = k;
                return;
            }
        }
        throw precision_exhausted("cutoff_k search exhausted");
    });
    return value;
}

bool hyp_holds(int k, const BigInt& n) {
    if (k < 5) return false;
    BigInt n3 = n * n * n;
    return n3 < pow2z(static_cast<unsigned long>(k - 5));
}

}  // namespace kfib
