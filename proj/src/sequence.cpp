#include <kfib/sequence.hpp>

#include <map>

namespace kfib {

KFibSequence::KFibSequence(int k) : k_(k) {
    if (k < 2) throw domain_error("k-generalized Fibonacci needs k >= 2");
    // indices 2-k .. 1: k-1 zeros then 1
    terms_.assign(static_cast<size_t>(k_), BigInt(0));
    terms_.back() = 1;
    window_ = 1;  // sum of the k cached terms F_{2-k} .. F_1
}

const BigInt& KFibSequence::term(long n) {
    if (n < min_index())
        throw domain_error("index below 2-k for k=" + std::to_string(k_));
    while (n > max_cached()) {
        BigInt next = window_;
        window_ += next;
        window_ -= terms_[terms_.size() - static_cast<size_t>(k_)];
        terms_.push_back(std::move(next));
    }
    return terms_[static_cast<size_t>(n - min_index())];
}

namespace {

KFibSequence& thread_sequence(int k) {
    thread_local std::map<int, KFibSequence> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, KFibSequence(k)).first;
    return it->second;
}

}  // namespace

BigInt kfib_term(int k, long n) { return thread_sequence(k).term(n); }

BigInt kfib_three_term(int k, long n) {
    if (n < 3) throw domain_error("three-term recursion needs n >= 3");
    KFibSequence& seq = thread_sequence(k);
    return 2 * seq.term(n - 1) - seq.term(n - k - 1);
}

BigInt cooper_howard(int k, long n) {
    if (k < 2) throw domain_error("cooper_howard needs k >= 2");
    if (n < k + 2) throw domain_error("cooper_howard asserted only for n >= k+2");
    // The exponent n-(k+1)j-2 can reach -1 at the last term; accumulate as an
    // exact rational and convert at the end.
    Rational sum = pow2q(n - 2);
    long jmax = (n + k) / (k + 1) - 1;
    for (long j = 1; j <= jmax; ++j) {
        BigInt cnj = binomial(n - j * k, j) - binomial(n - j * k - 2, j - 2);
        if (j % 2 == 1) cnj = -cnj;
        sum += Rational(cnj) * pow2q(n - (k + 1) * j - 2);
    }
    if (sum.get_den() != 1)
        throw domain_error("cooper_howard sum is not an integer");
    return sum.get_num();
}

BigInt cooper_two_term(int k, long n) {
    if (n < k + 2 || n > 2 * k + 2)
        throw domain_error("cooper_two_term valid only for k+2 <= n <= 2k+2");
    // 2^{n-2} - (n-k) 2^{n-k-3}; at n = k+2 the second exponent is -1 and
    // (n-k) = 2 keeps the value integral.
    BigInt r = pow2z(static_cast<unsigned long>(n - 2));
    long e = n - k - 3;
    if (e >= 0) {
        r -= BigInt(n - k) << static_cast<unsigned long>(e);
    } else {
        BigInt t(n - k);
        if (mpz_odd_p(t.get_mpz_t()))
            throw domain_error("cooper_two_term fractional term");
        r -= t >> 1;
    }
    return r;
}

GomezEstimate gomez_estimate(int k, long n) {
    if (n < 2) throw domain_error("gomez_estimate needs n >= 2");
    if (k < 63 && n >= (1L << k))
        throw domain_error("gomez_estimate needs n < 2^k");
    long z = 2L * k - n;
    BigInt fkn = BigInt(z - 1) * BigInt(z + 2);
    if (mpz_odd_p(fkn.get_mpz_t()))
        throw domain_error("f(k,n) not integral");
    fkn >>= 1;
    Rational paren = Rational(1) + Rational(k - n) * pow2q(-(k + 1)) +
                     Rational(fkn) * pow2q(-(2 * k + 2));
    GomezEstimate g;
    g.main_term = pow2q(n - 2) * paren;
    g.main_term.canonicalize();
    g.zeta = Rational(kfib_term(k, n)) * pow2q(-(n - 2)) - paren;
    g.zeta.canonicalize();
    g.zeta_bound = Rational(4 * BigInt(n) * BigInt(n) * BigInt(n)) * pow2q(-(3 * k + 3));
    g.zeta_bound.canonicalize();
    return g;
}

}  // namespace kfib
