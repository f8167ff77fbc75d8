#pragma once

#include <kfib/interval.hpp>

namespace kfib {

// Exact value of the characteristic polynomial
//   Psi_k(x) = x^k - x^{k-1} - ... - x - 1.
Rational psi_eval(int k, const Rational& x);

// Certified enclosure of the dominant root alpha(k) of Psi_k, obtained by
// bisection from the bracket (2(1 - 2^-k), 2).
struct DominantRoot {
    int k = 0;
    long precision_bits = 0;
    DyadicInterval alpha;
};

// Exact sign of Psi_k at a dyadic point x in (1, 2]; uses the identity
// (x-1) Psi_k(x) = x^{k+1} - 2 x^k + 1, sign-preserving on that range.
int psi_sign_exact(int k, const DyadicFloat& x);

DominantRoot dominant_root(int k, long precision_bits);
// Process-wide cache of dominant roots keyed by (k, precision_bits).
const DominantRoot& dominant_root_cached(int k, long precision_bits);

// Enclosure of f_k(alpha) = (alpha-1)/(2 + (k+1)(alpha-2)); certified to lie
// in (1/2, 3/4), else precision_error.
DyadicInterval f_k_value(int k, long precision_bits);

// Enclosure of F_n^(k) - f_k(alpha) alpha^{n-1}; certified to lie strictly
// inside (-1/2, 1/2), else precision_error.
DyadicInterval binet_residual(int k, long n, long precision_bits);
DyadicInterval binet_residual_auto(int k, long n, long start_bits = 256, int max_doublings = 5);

// Certifies alpha^{n-2} <= F_n^(k) <= alpha^{n-1}; throws precision_error if
// the enclosures cannot settle the comparisons.
void check_dominance(int k, long n, long precision_bits);
void check_dominance_auto(int k, long n, long start_bits = 256, int max_doublings = 5);

// Natural log over an interval (alias for the certified interval ln).
DyadicInterval log_interval(const DyadicInterval& x, long precision_bits);

// Enclosure of tau_k = ln(alpha)/ln(2).
DyadicInterval tau_interval(int k, long precision_bits);

}  // namespace kfib
