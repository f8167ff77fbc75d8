#include <doctest.h>

#include <vector>

#include <kfib/sequence.hpp>

using namespace kfib;

namespace {

// Independent oracle: plain k-term summation over a dense table, no sliding
// window, no sharing with the implementation path.
std::vector<BigInt> naive_prefix(int k, long n_max) {
    std::vector<BigInt> f(static_cast<size_t>(n_max + k), 0);  // f[i] = F_{i + 2 - k}
    auto at = [&](long n) -> BigInt& { return f[static_cast<size_t>(n + k - 2)]; };
    at(1) = 1;
    for (long n = 2; n <= n_max; ++n) {
        BigInt s = 0;
        for (int i = 1; i <= k; ++i) s += at(n - i);
        at(n) = s;
    }
    return f;
}

}  // namespace

TEST_CASE("initial terms and powers of two") {
    CHECK(kfib_term(4, 0) == 0);
    CHECK(kfib_term(4, -2) == 0);
    CHECK(kfib_term(4, 1) == 1);
    CHECK(kfib_term(4, 2) == 1);
    CHECK(kfib_term(4, 4) == 4);
    CHECK(kfib_term(4, 6) == 15);  // F_{k+2} = 2^k - 1
    CHECK(kfib_term(4, 13) == 1490);
    for (int k = 2; k <= 12; ++k) {
        for (long n = 2; n <= k + 1; ++n)
            CHECK(kfib_term(k, n) == pow2z(static_cast<unsigned long>(n - 2)));
        CHECK(kfib_term(k, k + 2) == pow2z(static_cast<unsigned long>(k)) - 1);
        // strict from n = k+2 on: F_n < 2^{n-2}
        for (long n = k + 2; n <= k + 40; ++n)
            CHECK(kfib_term(k, n) < pow2z(static_cast<unsigned long>(n - 2)));
    }
}

TEST_CASE("sliding-window cache matches the naive oracle") {
    for (int k : {2, 3, 4, 5, 6, 7, 8, 11}) {
        auto oracle = naive_prefix(k, 120);
        for (long n = 2 - k; n <= 120; ++n)
            CHECK(kfib_term(k, n) == oracle[static_cast<size_t>(n + k - 2)]);
    }
}

TEST_CASE("index domain errors") {
    CHECK_THROWS_AS(kfib_term(4, -3), domain_error);
    CHECK_THROWS_AS(kfib_term(10, -9), domain_error);
    CHECK_NOTHROW(kfib_term(10, -8));
    CHECK_THROWS_AS(kfib_term(1, 5), domain_error);
    CHECK_THROWS_AS(kfib_three_term(4, 2), domain_error);
}

TEST_CASE("three-term recursion examples and grid") {
    CHECK(kfib_three_term(4, 13) == 2 * 773 - 56);
    CHECK(kfib_three_term(4, 13) == 1490);
    CHECK(kfib_three_term(4, 3) == 2);  // 2*1 - 0, zero prefix
    CHECK(kfib_three_term(6, 8) == 63);  // 2*32 - 1
    for (int k = 2; k <= 12; ++k)
        for (long n = 3; n <= 150; ++n) CHECK(kfib_three_term(k, n) == kfib_term(k, n));
}

TEST_CASE("cooper-howard expansion") {
    CHECK(cooper_howard(4, 12) == 773);   // 2^10 - 8*2^5 + 5
    CHECK(cooper_howard(4, 8) == 56);     // 2^6 - 4*2
    CHECK(cooper_howard(10, 15) == 8172); // 2^13 - 5*2^2
    CHECK_THROWS_AS(cooper_howard(4, 5), domain_error);
    for (int k = 2; k <= 12; ++k)
        for (long n = k + 2; n <= 150; ++n) CHECK(cooper_howard(k, n) == kfib_term(k, n));
}

TEST_CASE("cooper two-term truncation") {
    CHECK(cooper_two_term(4, 8) == 56);
    CHECK(cooper_two_term(4, 10) == 208);
    CHECK(cooper_two_term(10, 12) == 1023);  // n = k+2 gives 2^k - 1
    CHECK_THROWS_AS(cooper_two_term(4, 11), domain_error);
    CHECK_THROWS_AS(cooper_two_term(4, 5), domain_error);
    for (int k = 4; k <= 12; ++k)
        for (long n = k + 2; n <= 2L * k + 2; ++n)
            CHECK(cooper_two_term(k, n) == kfib_term(k, n));
}

TEST_CASE("gomez estimate worked values") {
    GomezEstimate g1 = gomez_estimate(6, 15);
    CHECK(g1.main_term == 7617);
    CHECK(g1.zeta == 0);
    GomezEstimate g2 = gomez_estimate(6, 20);
    CHECK(g2.main_term == 233904);
    CHECK(g2.zeta == 0);
    // below 2k+3 the second-order term can be spurious
    GomezEstimate g3 = gomez_estimate(10, 15);
    Rational expect(-14);
    expect /= Rational(pow2z(22));
    expect.canonicalize();
    CHECK(g3.zeta == expect);
    CHECK_FALSE(g3.within_bound());  // the documented sub-2k+3 exception
    CHECK_THROWS_AS(gomez_estimate(4, 16), domain_error);
}

TEST_CASE("gomez residual bound on the asserted range") {
    for (int k = 6; k <= 12; ++k) {
        long hi = std::min<long>((1L << k) - 1, 120);
        for (long n = 2 * k + 3; n <= hi; ++n) {
            GomezEstimate g = gomez_estimate(k, n);
            CHECK(g.within_bound());
            // identity: main + 2^{n-2} zeta == F_n exactly
            CHECK(g.main_term + Rational(pow2z(static_cast<unsigned long>(n - 2))) * g.zeta ==
                  Rational(kfib_term(k, n)));
        }
    }
}

TEST_CASE("monotone difference 2^{n-2} - F_n increases from n = k+3") {
    for (int k = 4; k <= 10; ++k) {
        for (long n = k + 3; n <= 200; ++n) {
            BigInt cur = pow2z(static_cast<unsigned long>(n - 2)) - kfib_term(k, n);
            BigInt nxt = pow2z(static_cast<unsigned long>(n - 1)) - kfib_term(k, n + 1);
            CHECK(nxt > cur);
        }
    }
}
