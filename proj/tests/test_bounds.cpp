#include <doctest.h>

#include <mpfr.h>

#include <random>
#include <string>

#include <kfib/bounds.hpp>

using namespace kfib;

namespace {

// MPFR-backed reference values, independent of the dyadic implementation.
struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(mpfr_prec_t prec = 400) { mpfr_init2(v, prec); }
    ~MpfrVal() { mpfr_clear(v); }
};

double ln_ref(double x) { return std::log(x); }

// closed Baker bound 2.8e41 k^11 ln(k)^7 computed with MPFR, floored into a string
std::string baker_closed_ref(long k, mpfr_prec_t prec = 600) {
    MpfrVal v(prec), lk(prec);
    mpfr_set_ui(lk.v, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_log(lk.v, lk.v, MPFR_RNDN);
    mpfr_pow_ui(lk.v, lk.v, 7, MPFR_RNDN);
    mpfr_set_ui(v.v, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_pow_ui(v.v, v.v, 11, MPFR_RNDN);
    mpfr_mul(v.v, v.v, lk.v, MPFR_RNDN);
    MpfrVal c(prec);
    mpfr_ui_pow_ui(c.v, 10, 40, MPFR_RNDN);
    mpfr_mul(v.v, v.v, c.v, MPFR_RNDN);
    mpfr_mul_ui(v.v, v.v, 28, MPFR_RNDN);
    mpz_t z;
    mpz_init(z);
    mpfr_get_z(z, v.v, MPFR_RNDD);
    char* s = mpz_get_str(nullptr, 10, z);
    std::string out(s);
    free(s);
    mpz_clear(z);
    return out;
}

// |matveev| magnitude with MPFR for the standard (t=3, D=k, B=n) data
double matveev_ref(long k, long n) {
    double a1 = 3.0 * k * ln_ref(double(k));
    double a2 = ln_ref(2.0);
    double a3 = k * ln_ref(2.0);
    return 1.4 * std::pow(30.0, 6) * std::pow(3.0, 4.5) * double(k) * double(k) *
           (1 + ln_ref(double(k))) * (1 + ln_ref(double(n))) * a1 * a2 * a3;
}

}  // namespace

TEST_CASE("matveev formula, direct trivial evaluation") {
    MatveevInputs in;
    in.t = 1;
    in.D = 1;
    in.B = 1;
    Rational a(16, 100);
    a.canonicalize();
    in.A = {DyadicInterval::from_rational(a, 96)};
    DyadicInterval r = matveev_lower_bound(in, 96);
    // -1.4 * 30^4 * 0.16 = -181440 exactly
    Rational expect(-181440);
    CHECK(r.contains(expect));
    CHECK(r.width().to_rational() < Rational(1, 1000000));
    CHECK(r.lo.to_rational() <= expect);  // the .lo endpoint is a valid lower bound
}

TEST_CASE("matveev reproduces the k^4 log^2 k bound shape") {
    for (long k : {4L, 10L, 50L, 200L}) {
        for (long n : {1600L, 1000000L}) {
            MatveevInputs in;
            in.t = 3;
            in.D = k;
            in.B = n;
            long wb = 128;
            DyadicInterval lnk = ln_point(DyadicFloat(k), wb);
            DyadicInterval ln2 = ln2_interval(wb);
            in.A = {iv_mul_int(lnk, 3 * BigInt(k), wb), ln2, iv_mul_int(ln2, BigInt(k), wb)};
            DyadicInterval r = matveev_lower_bound(in, wb);
            double mag = -r.lo.to_double();
            double shape = 4.2e11 * std::pow(double(k), 4) * std::pow(ln_ref(double(k)), 2) *
                           (1 + ln_ref(double(n)));
            CHECK(mag <= shape);
            CHECK(mag >= 0.3 * shape);
            // 10-significant-digit agreement with the independent evaluation
            double ref = matveev_ref(k, n);
            CHECK(std::abs(mag - ref) <= 1e-9 * ref);
        }
    }
}

TEST_CASE("matveev input validation") {
    MatveevInputs bad;
    bad.t = 2;
    bad.D = 1;
    bad.B = 1;
    bad.A = {DyadicInterval(DyadicFloat(1L))};  // wrong arity
    CHECK_THROWS_AS(matveev_lower_bound(bad, 64), domain_error);
    bad.A = {DyadicInterval(DyadicFloat(-1L), DyadicFloat(1L)),
             DyadicInterval(DyadicFloat(1L))};
    CHECK_THROWS_AS(matveev_lower_bound(bad, 64), domain_error);
}

TEST_CASE("baker chain at k = 4 against the independent oracle") {
    BoundChain b = baker_chain(4);
    // frozen from an independent MPFR evaluation
    CHECK(b.final_n_bound.get_str() ==
          "11555962741038613015637799795455664281720760077256");
    CHECK(b.final_n_bound.get_str() == baker_closed_ref(4));
    // 10 significant digits: the two routes above already agree exactly;
    // additionally the chain route must stay below the closed form
    CHECK(b.chain_n_bound.to_rational() <= Rational(b.final_n_bound));
    double ratio = b.chain_n_bound.to_double() / 1.1555962741038613e49;
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.0);
    CHECK(b.min_bound.to_rational() <= b.max_bound.to_rational());
    CHECK(b.n_hypothesis_used == b.final_n_bound);  // fixed point after one pass
}

TEST_CASE("closed-form Baker bound matches MPFR for several k") {
    for (long k : {5L, 10L, 50L, 790L})
        CHECK(baker_chain(static_cast<int>(k)).final_n_bound.get_str() == baker_closed_ref(k));
}

TEST_CASE("chain route is dominated by the closed form for all k") {
    for (int k : {4, 5, 10, 50, 200, 790}) {
        BoundChain b = baker_chain(k);
        CHECK(b.chain_n_bound.to_rational() <= Rational(b.final_n_bound));
    }
}

TEST_CASE("final bound is increasing in k") {
    CHECK(baker_chain(5).final_n_bound > baker_chain(4).final_n_bound);
    CHECK(baker_chain(6).final_n_bound > baker_chain(5).final_n_bound);
}

TEST_CASE("cutoff") {
    CHECK(cutoff_k() == 791);
    CHECK_FALSE(cutoff_inequality(790));
    CHECK(cutoff_inequality(791));
    CHECK(cutoff_inequality(1000));
    CHECK_FALSE(cutoff_inequality(4));
}

TEST_CASE("hyp_holds exact comparisons") {
    CHECK(hyp_holds(50, BigInt(1000)));           // 10^9 < 2^45
    CHECK_FALSE(hyp_holds(35, BigInt(1024)));     // 2^30 >= 2^30 boundary
    CHECK(hyp_holds(36, BigInt(1024)));
    CHECK_FALSE(hyp_holds(4, BigInt(1)));         // k < 5 is always false
    CHECK_FALSE(hyp_holds(2, BigInt(10)));
}

TEST_CASE("hyp holds for the closed Baker bound from k = 794 on") {
    // The cutoff at k = 791 does not yet make the growth hypothesis hold:
    // M_k^3 < 2^{k-5} fails for k = 791..793 and first holds at k = 794.
    CHECK_FALSE(hyp_holds(790, baker_chain(790).final_n_bound));
    CHECK_FALSE(hyp_holds(791, baker_chain(791).final_n_bound));
    CHECK_FALSE(hyp_holds(793, baker_chain(793).final_n_bound));
    for (int k : {794, 795, 800, 900, 1200})
        CHECK(hyp_holds(k, baker_chain(k).final_n_bound));
}

TEST_CASE("ln enclosure against MPFR directed rounding") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        long man = 1 + static_cast<long>(rng() % (1L << 30));
        long e = static_cast<long>(rng() % 64) - 32;
        DyadicFloat x(BigInt(man), e);
        DyadicInterval mine = ln_point(x, 128);
        MpfrVal xv(300), lo(300), hi(300), mlo(300), mhi(300);
        mpfr_set_q(xv.v, x.to_rational().get_mpq_t(), MPFR_RNDN);
        mpfr_log(lo.v, xv.v, MPFR_RNDD);
        mpfr_log(hi.v, xv.v, MPFR_RNDU);
        // the MPFR bracket must fall inside the dyadic enclosure
        mpfr_set_q(mlo.v, mine.lo.to_rational().get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(mhi.v, mine.hi.to_rational().get_mpq_t(), MPFR_RNDU);
        CHECK(mpfr_cmp(mlo.v, lo.v) <= 0);
        CHECK(mpfr_cmp(hi.v, mhi.v) <= 0);
    }
}
