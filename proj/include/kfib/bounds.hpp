#pragma once

#include <vector>

#include <kfib/interval.hpp>

namespace kfib {

// Inputs of the Matveev lower bound for |log Lambda| of a linear form in t
// logarithms over a degree-D real field, with B >= max |b_i| and
// A_i >= max(D h(gamma_i), |log gamma_i|, 0.16).
struct MatveevInputs {
    int t = 0;
    long D = 0;
    BigInt B;
    std::vector<DyadicInterval> A;
};

// Enclosure of -1.4 * 30^{t+3} * t^{4.5} * D^2 (1+log D)(1+log B) A_1...A_t.
// The .lo endpoint is a valid lower bound on log|Lambda|.
DyadicInterval matveev_lower_bound(const MatveevInputs& in, long bits);

// The three-stage bound chain: Lambda gives min_bound, Lambda_1/Lambda_2 give
// max_bound, Lambda_3 closes to an absolute bound on n.
struct BoundChain {
    int k = 0;
    DyadicFloat min_bound;      // valid upper value of 4.25e11 k^4 ln^2(k) (1+ln n)
    DyadicFloat max_bound;      // valid upper value of 4.2e22 k^7 ln^3(k) (1+ln n)^2
    BigInt final_n_bound;       // floor(2.8e41 k^11 ln^7 k), the closed-form route
    DyadicFloat chain_n_bound;  // 16 A ln^3 A with A = 5.1e34 k^11 ln^4 k, the chain route
    BigInt n_hypothesis_used;   // the n at which min/max bounds were evaluated
};

// k >= 4.  Starts from n_hypothesis, then re-evaluates the min/max bounds at
// the final bound (one fixed-point pass).
BoundChain baker_chain(int k, const BigInt& n_hypothesis = BigInt(1600), long bits = 256);

// Minimal k >= 4 for which the k-cutoff inequality
//   2.8e123 * k^33 * ln(k)^21 < 2^(k-5)
// holds (certified directed comparison); 791.
int cutoff_k();
// The cutoff inequality evaluated at a single k.
bool cutoff_inequality(int k);

// Exact comparison n^3 < 2^{k-5}; false for k < 5 (then 2^{k-5} < 1).
bool hyp_holds(int k, const BigInt& n);

}  // namespace kfib
