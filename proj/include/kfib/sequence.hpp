#pragma once

#include <vector>

#include <kfib/bigint.hpp>

namespace kfib {

// Cached prefix of the k-generalized Fibonacci sequence F^(k), indexed from
// n = 2-k.  Terms obey:
//   F_n = 0 for 2-k <= n <= 0,  F_1 = 1,
//   F_n = F_{n-1} + ... + F_{n-k} for n >= 2,
// grown with a sliding window sum (one add + one sub per term).
class KFibSequence {
public:
    explicit KFibSequence(int k);

    int order() const { return k_; }
    long min_index() const { return 2 - k_; }
    long max_cached() const { return min_index() + static_cast<long>(terms_.size()) - 1; }

    // F_n; extends the cache as needed.  n < 2-k is a domain error.
    const BigInt& term(long n);

private:
    int k_;
    std::vector<BigInt> terms_;  // terms_[i] = F_{i + 2 - k}
    BigInt window_;              // sum of the k latest cached terms
};

// Convenience wrapper over a per-thread cache of KFibSequence (one per k).
// Returns by value: the underlying cache vector may reallocate on growth, so
// handing out references across calls would dangle.
BigInt kfib_term(int k, long n);

// Value via the three-term recursion 2 F_{n-1} - F_{n-k-1}; n >= 3.
BigInt kfib_three_term(int k, long n);

// Full Cooper-Howard expansion
//   F_n = 2^{n-2} + sum_{j=1}^{floor((n+k)/(k+1)) - 1} C_{n,j} 2^{n-(k+1)j-2},
//   C_{n,j} = (-1)^j [ C(n-jk, j) - C(n-jk-2, j-2) ],
// n >= k+2.
BigInt cooper_howard(int k, long n);

// Two-term truncation 2^{n-2} - (n-k) 2^{n-k-3}, valid for k+2 <= n <= 2k+2.
BigInt cooper_two_term(int k, long n);

struct GomezEstimate {
    Rational main_term;   // 2^{n-2} (1 + (k-n)/2^{k+1} + f(k,n)/2^{2k+2})
    Rational zeta;        // F_n / 2^{n-2} - (1 + (k-n)/2^{k+1} + f(k,n)/2^{2k+2})
    Rational zeta_bound;  // 4 n^3 / 2^{3k+3}

    bool within_bound() const { return ::abs(zeta) < zeta_bound; }
};

// Exact-rational evaluation of the Gomez-Luca second-order estimate, with
// f(k,n) = (z-1)(z+2)/2, z = 2k-n.  Requires 2 <= n < 2^k.
GomezEstimate gomez_estimate(int k, long n);

}  // namespace kfib
