#include <kfib/algebraic.hpp>

#include <kfib/sequence.hpp>

#include <map>
#include <mutex>

namespace kfib {

Rational psi_eval(int k, const Rational& x) {
    if (k < 2) throw domain_error("psi_eval needs k >= 2");
    // Horner: x^k - x^{k-1} - ... - x - 1
    Rational acc(1);
    for (int i = 0; i < k; ++i) {
        acc = acc * x - 1;
        acc.canonicalize();
    }
    return acc;
}

int psi_sign_exact(int k, const DyadicFloat& x) {
    if (x.sgn() <= 0 || x <= DyadicFloat(1L))
        throw domain_error("psi_sign_exact requires x > 1");
    // x = M / 2^s with s >= 0
    long s = std::max(0L, -x.exponent());
    BigInt M = x.mantissa() << static_cast<unsigned long>(x.exponent() + s);
    // sign of x^k (x-2) + 1  ==  sign of M^k (M - 2^{s+1}) + 2^{s(k+1)}
    BigInt Mk;
    mpz_pow_ui(Mk.get_mpz_t(), M.get_mpz_t(), static_cast<unsigned long>(k));
    BigInt N = Mk * (M - pow2z(static_cast<unsigned long>(s + 1))) +
               pow2z(static_cast<unsigned long>(s) * static_cast<unsigned long>(k + 1));
    return mpz_sgn(N.get_mpz_t());
}

namespace {

// Certified sign of Psi_k at a dyadic midpoint via interval evaluation of
// x^k (x-2) + 1, raising precision until the enclosure excludes zero.
int psi_sign_certified(int k, const DyadicFloat& x) {
    long bits = x.bit_length() + 64;
    for (int attempt = 0; attempt < 3; ++attempt, bits *= 2) {
        DyadicInterval xi(x);
        DyadicInterval v = iv_pow(xi, k, bits);
        v = iv_mul(v, DyadicInterval(x - DyadicFloat(2L)), bits);
        v = iv_add(v, DyadicInterval(DyadicFloat(1L)), bits);
        if (v.strictly_positive()) return 1;
        if (v.strictly_negative()) return -1;
    }
    return psi_sign_exact(k, x);  // midpoints are never the root, so this decides
}

}  // namespace

DominantRoot dominant_root(int k, long precision_bits) {
    if (k < 2) throw domain_error("dominant_root needs k >= 2");
    if (precision_bits < 16) throw domain_error("dominant_root needs precision_bits >= 16");
    // bracket (2(1 - 2^-k), 2) = ((2^k - 1) 2^{1-k}, 2)
    DyadicFloat lo(pow2z(static_cast<unsigned long>(k)) - 1, 1 - k);
    DyadicFloat hi(2L);
    DyadicFloat width_target = DyadicFloat::power_of_two(-precision_bits);
    DyadicFloat half(BigInt(1), -1);
    do {
        DyadicFloat mid = half * (lo + hi);
        if (psi_sign_certified(k, mid) < 0)
            lo = mid;
        else
            hi = mid;
    } while (hi - lo >= width_target);
    // final bracket certified by exact evaluation
    if (!(psi_sign_exact(k, lo) < 0 && psi_sign_exact(k, hi) > 0))
        throw domain_error("root bracket lost certification");
    DominantRoot r;
    r.k = k;
    r.precision_bits = precision_bits;
    r.alpha = DyadicInterval(lo, hi);
    return r;
}

namespace {

std::mutex g_root_mutex;
std::map<std::pair<int, long>, DominantRoot> g_root_cache;

}  // namespace

const DominantRoot& dominant_root_cached(int k, long precision_bits) {
    std::lock_guard<std::mutex> lk(g_root_mutex);
    auto key = std::make_pair(k, precision_bits);
    auto it = g_root_cache.find(key);
    if (it == g_root_cache.end())
        it = g_root_cache.emplace(key, dominant_root(k, precision_bits)).first;
    return it->second;
}

DyadicInterval f_k_value(int k, long precision_bits) {
    const DyadicInterval& alpha = dominant_root_cached(k, precision_bits).alpha;
    long wb = precision_bits + 16;
    DyadicInterval num = iv_sub(alpha, DyadicInterval(DyadicFloat(1L)), wb);
    DyadicInterval den = iv_add(
        iv_mul_int(iv_sub(alpha, DyadicInterval(DyadicFloat(2L)), wb), BigInt(k + 1), wb),
        DyadicInterval(DyadicFloat(2L)), wb);
    if (den.contains_zero()) throw precision_error("f_k denominator enclosure hits zero");
    DyadicInterval f = iv_div(num, den, wb);
    DyadicFloat half(BigInt(1), -1);
    DyadicFloat three_quarters(BigInt(3), -2);
    if (!(f.lo > half && f.hi < three_quarters))
        throw precision_error("cannot certify f_k(alpha) in (1/2, 3/4)");
    return f;
}

DyadicInterval binet_residual(int k, long n, long precision_bits) {
    if (n < 2 - static_cast<long>(k)) throw domain_error("binet_residual needs n >= 2-k");
    long wb = precision_bits + 16;
    const DyadicInterval& alpha = dominant_root_cached(k, precision_bits).alpha;
    DyadicInterval f = f_k_value(k, precision_bits);
    DyadicInterval approx = iv_mul(f, iv_pow(alpha, n - 1, wb), wb);
    DyadicInterval exact(DyadicFloat(kfib_term(k, n)));
    DyadicInterval res = iv_sub(exact, approx, wb);
    DyadicFloat half(BigInt(1), -1);
    if (!(res.lo > -half && res.hi < half))
        throw precision_error("cannot certify |binet residual| < 1/2");
    return res;
}

DyadicInterval binet_residual_auto(int k, long n, long start_bits, int max_doublings) {
    return with_precision_ladder(start_bits, max_doublings,
                                 [&](long b) { return binet_residual(k, n, b); });
}

void check_dominance(int k, long n, long precision_bits) {
    if (n < 1) throw domain_error("dominance asserted for n >= 1");
    long wb = precision_bits + 16;
    const DyadicInterval& alpha = dominant_root_cached(k, precision_bits).alpha;
    DyadicFloat fn(kfib_term(k, n));
    DyadicInterval low = iv_pow(alpha, n - 2, wb);
    DyadicInterval high = iv_pow(alpha, n - 1, wb);
    if (!(low.hi <= fn))
        throw precision_error("cannot certify alpha^{n-2} <= F_n");
    if (!(fn <= high.lo))
        throw precision_error("cannot certify F_n <= alpha^{n-1}");
}

void check_dominance_auto(int k, long n, long start_bits, int max_doublings) {
    with_precision_ladder(start_bits, max_doublings, [&](long b) {
        check_dominance(k, n, b);
        return 0;
    });
}

DyadicInterval log_interval(const DyadicInterval& x, long precision_bits) {
    return ln_interval(x, precision_bits);
}

DyadicInterval tau_interval(int k, long precision_bits) {
    long wb = precision_bits + 16;
    const DyadicInterval& alpha = dominant_root_cached(k, precision_bits).alpha;
    return iv_mul(ln_interval(alpha, wb), inv_ln2_interval(wb), wb);
}

}  // namespace kfib
