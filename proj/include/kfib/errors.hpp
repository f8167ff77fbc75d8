#pragma once

#include <stdexcept>
#include <string>

namespace kfib {

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Working precision too low to certify the requested result; callers retry
// at doubled precision (see with_precision_ladder).
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A continued-fraction step could not certify the next integer quotient.
struct ambiguous_quotient : precision_error {
    using precision_error::precision_error;
};

// Precision ladder exhausted its doubling budget.
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dp_reduce ran out of convergents without a certified positive epsilon.
struct no_positive_epsilon : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solution verification failed; both side values are kept in the message.
struct mismatch_error : std::runtime_error {
    std::string lhs, rhs;
    mismatch_error(std::string l, std::string r)
        : std::runtime_error("solution mismatch: " + l + " != " + r),
          lhs(std::move(l)), rhs(std::move(r)) {}
};

// Ordering constraints (n > n1 >= 2, m > m1 >= 0) violated.
struct range_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct cache_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Retries f(bits) with doubled precision on precision_error, up to
// max_doublings times; throws precision_exhausted past the cap.
template <class F>
auto with_precision_ladder(long start_bits, int max_doublings, F&& f) {
    long bits = start_bits;
    for (int attempt = 0;; ++attempt) {
        try {
            return f(bits);
        } catch (const precision_error& e) {
            if (attempt >= max_doublings)
                throw precision_exhausted(std::string("precision ladder exhausted: ") + e.what());
            bits *= 2;
        }
    }
}

}  // namespace kfib
