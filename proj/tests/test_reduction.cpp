#include <doctest.h>

#include <random>
#include <sstream>

#include <kfib/bounds.hpp>
#include <kfib/reduction.hpp>

using namespace kfib;

namespace {

Rational rat(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// exact |x - p/q| < 1/q^2 for a rational x
bool approx_quality(const Rational& x, const BigInt& p, const BigInt& q) {
    Rational diff = x - rat(1, 1) * Rational(p) / Rational(q);
    diff.canonicalize();
    Rational bound = Rational(1) / Rational(q * q);
    return ::abs(diff) < bound;
}

void check_cf_invariants(const CFExpansion& cf) {
    REQUIRE(cf.quotients.size() == cf.convergents.size());
    BigInt pm1(1), qm1(0), pm2(0), qm2(1);
    for (size_t i = 0; i < cf.quotients.size(); ++i) {
        const BigInt& a = cf.quotients[i];
        if (i >= 1) CHECK(a >= 1);
        BigInt p = a * pm1 + pm2;
        BigInt q = a * qm1 + qm2;
        CHECK(cf.convergents[i].first == p);
        CHECK(cf.convergents[i].second == q);
        BigInt g;
        mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        CHECK(g == 1);
        if (i >= 2) CHECK(cf.convergents[i].second > cf.convergents[i - 1].second);
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        // best-approximation quality at both certified endpoints
        CHECK(approx_quality(cf.x.lo.to_rational(), p, q));
        CHECK(approx_quality(cf.x.hi.to_rational(), p, q));
    }
}

}  // namespace

TEST_CASE("golden ratio expands to all ones") {
    DominantRoot r = dominant_root(2, 256);
    CFExpansion cf = cf_expand(r.alpha, 40);
    REQUIRE(cf.quotients.size() == 40);
    for (const BigInt& a : cf.quotients) CHECK(a == 1);
    check_cf_invariants(cf);
}

TEST_CASE("rational 355/113 terminates as [3; 7, 16]") {
    CFExpansion cf = cf_expand_rational(rat(355, 113), 50);
    CHECK(cf.terminated);
    REQUIRE(cf.quotients.size() == 3);
    CHECK(cf.quotients[0] == 3);
    CHECK(cf.quotients[1] == 7);
    CHECK(cf.quotients[2] == 16);
    CHECK(cf.convergents.back().first == 355);
    CHECK(cf.convergents.back().second == 113);
}

TEST_CASE("tau_2 quotients match the high-precision expansion") {
    DyadicInterval tau = tau_interval(2, 300);
    CFExpansion cf = cf_expand(tau, 13);
    const long expect[] = {0, 1, 2, 3, 1, 2, 3, 2, 4, 2, 1, 2, 11};
    REQUIRE(cf.quotients.size() == 13);
    for (size_t i = 0; i < 13; ++i) CHECK(cf.quotients[i] == expect[i]);
    check_cf_invariants(cf);
}

TEST_CASE("wide intervals stop at the first ambiguous quotient") {
    DyadicInterval x(DyadicFloat::from_rational_down(rat(141, 100), 64),
                     DyadicFloat::from_rational_up(rat(142, 100), 64));
    CFExpansion cf = cf_expand(x, 100);
    CHECK(cf.quotients.size() < 10);  // ~1e-2 width certifies only a handful
    CHECK_FALSE(cf.terminated);
    check_cf_invariants(cf);
    // every certified quotient agrees with the exact expansions of both endpoints
    CFExpansion lo_cf = cf_expand_rational(x.lo.to_rational(), cf.quotients.size());
    CFExpansion hi_cf = cf_expand_rational(x.hi.to_rational(), cf.quotients.size());
    for (size_t i = 0; i < cf.quotients.size(); ++i) {
        CHECK(cf.quotients[i] == lo_cf.quotients[i]);
        CHECK(cf.quotients[i] == hi_cf.quotients[i]);
    }
}

TEST_CASE("cf domain errors") {
    CHECK_THROWS_AS(cf_expand(DyadicInterval(DyadicFloat(0L), DyadicFloat(1L)), 5),
                    domain_error);
    CHECK_THROWS_AS(cf_expand(DyadicInterval(DyadicFloat(-3L), DyadicFloat(-2L)), 5),
                    domain_error);
}

namespace {

// random dyadic with `bits` random mantissa bits, value in (lo_int, lo_int+1)
DyadicFloat random_dyadic(std::mt19937_64& rng, long bits, long int_part) {
    BigInt m(0);
    for (long i = 0; i < bits; i += 32) {
        m <<= 32;
        m += static_cast<unsigned long>(rng() & 0xffffffffULL);
    }
    m += BigInt(int_part) << static_cast<unsigned long>(bits);
    return DyadicFloat(m, -bits);
}

struct MicroInstance {
    ReductionInstance inst;
    long w_bound;
};

// Exhaustive counterexample scan for Dujella-Petho soundness: for u <= M the
// inequality 0 < |u tau - v + mu| < A B^-w must have no solution with
// w >= w_bound.
void exhaustive_check(const ReductionInstance& inst, long w_bound, long bits) {
    // threshold A B^{-w_bound}, upper enclosure
    DyadicInterval thr = iv_mul(inst.A, iv_pow(inst.B, -w_bound, bits), bits);
    REQUIRE(thr.hi.to_rational() < rat(1, 2));  // only the nearest v can violate
    long M = inst.M.get_si();
    for (long u = 1; u <= M; ++u) {
        DyadicInterval y = iv_add(iv_mul_int(inst.tau, BigInt(u), bits), inst.mu, bits);
        DyadicInterval dist = nearest_int_distance(y);
        bool violation = dist.hi < thr.lo && dist.lo.sgn() > 0;
        if (violation) {
            CAPTURE(u);
            CHECK_FALSE(violation);
            return;
        }
    }
}

}  // namespace

TEST_CASE("dp_reduce micro-scale soundness on random instances") {
    std::mt19937_64 rng(1234);
    int done = 0;
    while (done < 30) {
        ReductionInstance inst;
        inst.tau = DyadicInterval(random_dyadic(rng, 320, 0));
        inst.mu = DyadicInterval(random_dyadic(rng, 320, 0));
        if (rng() & 1) inst.mu = iv_neg(inst.mu);
        inst.A = DyadicInterval::from_rational(rat(1 + long(rng() % 200), 1), 64);
        inst.B = DyadicInterval::from_rational(rat(2 + long(rng() % 30), 10), 64);  // (1.2, 3.1]
        if (!(inst.B.lo > DyadicFloat(1L))) continue;
        inst.M = BigInt(10 + long(rng() % 991));  // M <= 1000 keeps the scan fast here
        ReductionOutcome out;
        try {
            out = dp_reduce(inst, 400, 25);
        } catch (const no_positive_epsilon&) {
            continue;  // fine; the reduction criterion fails on these convergents
        }
        CHECK(out.epsilon.lo.sgn() > 0);
        CHECK(out.q_used > 6 * inst.M);
        exhaustive_check(inst, out.w_bound, 420);
        ++done;
    }
    CHECK(done == 30);
}

TEST_CASE("dp_reduce rejects integer mu on every convergent") {
    ReductionInstance inst;
    inst.tau = dominant_root(2, 256).alpha;  // irrational
    inst.mu = DyadicInterval(DyadicFloat(3L));
    inst.A = DyadicInterval(DyadicFloat(8L));
    inst.B = DyadicInterval(DyadicFloat(2L));
    inst.M = 1000;
    CHECK_THROWS_AS(dp_reduce(inst, 256), no_positive_epsilon);
}

TEST_CASE("tau_2 with mu = log f_2 / log 2, M = 10^6") {
    long bits = 320;
    ReductionInstance inst;
    inst.tau = tau_interval(2, bits);
    inst.mu = iv_mul(ln_interval(f_k_value(2, bits), bits), inv_ln2_interval(bits), bits);
    inst.A = DyadicInterval(DyadicFloat(8L));
    inst.B = DyadicInterval(DyadicFloat(2L));
    inst.M = 1000000;
    ReductionOutcome out = dp_reduce(inst, bits);
    CHECK(out.w_bound > 0);
    CHECK(out.w_bound < 200);  // log2(8 q / eps) stays small at this scale
    // exhaustive cross-validation over the full u range
    exhaustive_check(inst, out.w_bound, 200);
}

TEST_CASE("dp_reduce determinism") {
    long bits = 300;
    ReductionInstance inst;
    inst.tau = tau_interval(4, bits);
    inst.mu = iv_mul(ln_interval(f_k_value(4, bits), bits), inv_ln2_interval(bits), bits);
    inst.A = DyadicInterval(DyadicFloat(200L));
    inst.B = dominant_root_cached(4, bits).alpha;
    inst.M = BigInt("100000000000");
    ReductionOutcome a = dp_reduce(inst, bits);
    ReductionOutcome b = dp_reduce(inst, bits);
    CHECK(a.q_used == b.q_used);
    CHECK(a.w_bound == b.w_bound);
    CHECK(a.epsilon.lo == b.epsilon.lo);
    CHECK(a.epsilon.hi == b.epsilon.hi);
}

TEST_CASE("gamma sweep smoke test with jsonl output") {
    std::ostringstream lines;
    SweepOptions opt;
    opt.M = BigInt(1000000);
    opt.bits = 320;
    opt.jsonl = &lines;
    SweepSummary s = reduction_sweep(GammaCase::gamma, 4, opt);
    CHECK(s.total_cells == 2);
    CHECK(s.failed_cells == 0);
    CHECK(s.branch_max.count("n-n1") == 1);
    CHECK(s.branch_max.count("m-m1") == 1);
    CHECK(s.branch_max["n-n1"] > 0);
    CHECK(lines.str().find("\"case\":\"gamma\"") != std::string::npos);
    CHECK(lines.str().find("\"branch\":\"n-n1\"") != std::string::npos);
}

TEST_CASE("gamma3 sweep: alternative A is dominated by the binding 114") {
    SweepOptions opt;
    opt.M = BigInt(1000000);
    opt.bits = 320;
    opt.l_min = 1;
    opt.l_max = 6;
    opt.j_min = 1;
    opt.j_max = 6;
    SweepSummary s = reduction_sweep(GammaCase::gamma3, 4, opt);
    CHECK(s.total_cells == 36);
    for (const SweepOutcome& o : s.outcomes) {
        if (!o.ok) continue;
        CHECK(o.w_bound_alt >= 0);
        CHECK(o.w_bound_alt <= o.w_bound);  // 2^6/ln 2 < 114
    }
    CHECK(s.max_w_alt <= s.max_w);
}

TEST_CASE("sweep cursor resume skips completed cells") {
    std::string cursor = "/tmp/kfib_test_cursor.txt";
    std::remove(cursor.c_str());
    SweepOptions opt;
    opt.M = BigInt(1000000);
    opt.bits = 320;
    opt.l_min = 1;
    opt.l_max = 5;
    opt.cursor_path = cursor;
    SweepSummary first = reduction_sweep(GammaCase::gamma1, 4, opt);
    CHECK(first.total_cells == 5);
    SweepSummary second = reduction_sweep(GammaCase::gamma1, 4, opt);
    CHECK(second.total_cells == 0);  // everything already done per the cursor
    std::remove(cursor.c_str());
}

TEST_CASE("large k needs the scaled convergent ladder") {
    // mu_k and tau_k are correlated through alpha ~ 2 - 2^-k, so ||mu q|| is
    // nearly integral on the early convergents and the first 25 rungs all
    // fail; the auto-scaled cap must still land a positive epsilon.
    SweepOptions opt;
    opt.bits = 2200;
    SweepSummary s = reduction_sweep(GammaCase::gamma, 300, opt);
    CHECK(s.failed_cells == 0);
    CHECK(s.branch_max["n-n1"] > 0);
    CHECK(s.branch_max["n-n1"] <= 1571);
    CHECK(s.branch_max["m-m1"] <= 1566);
    for (const auto& o : s.outcomes) CHECK(o.q > 6 * baker_chain(300).final_n_bound);
}

TEST_CASE("sweep determinism") {
    SweepOptions opt;
    opt.M = BigInt(1000000);
    opt.bits = 320;
    opt.j_min = 1;
    opt.j_max = 8;
    SweepSummary a = reduction_sweep(GammaCase::gamma2, 4, opt);
    SweepSummary b = reduction_sweep(GammaCase::gamma2, 4, opt);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (size_t i = 0; i < a.outcomes.size(); ++i) {
        CHECK(a.outcomes[i].w_bound == b.outcomes[i].w_bound);
        CHECK(a.outcomes[i].q == b.outcomes[i].q);
        CHECK(a.outcomes[i].epsilon_lo == b.outcomes[i].epsilon_lo);
    }
}
