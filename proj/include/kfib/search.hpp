#pragma once

#include <string>
#include <tuple>
#include <vector>

#include <kfib/bigint.hpp>

namespace kfib {

enum class Family { i, ii_a, ii_b, iii, iv, sporadic };
const char* family_name(Family f);

// One solution of F_n^(k) - 2^m = F_{n1}^(k) - 2^{m1} = c with
// n > n1 >= 2 and m > m1 >= 0, tagged with its parametric family.
struct SolutionRecord {
    int k = 0;
    BigInt c;
    long n = 0, m = 0, n1 = 0, m1 = 0;
    Family family = Family::sporadic;
    bool verified = true;
    std::string form;  // family iii: "derived" or "statement"
    std::string note;  // discrepancy description when !verified

    friend bool operator==(const SolutionRecord& a, const SolutionRecord& b) {
        return a.k == b.k && a.n == b.n && a.m == b.m && a.n1 == b.n1 && a.m1 == b.m1;
    }
    friend bool operator<(const SolutionRecord& a, const SolutionRecord& b) {
        auto ta = std::tie(a.k, a.n, a.n1, a.m, a.m1);
        auto tb = std::tie(b.k, b.n, b.n1, b.m, b.m1);
        return ta < tb;
    }
};

struct SearchConfig {
    int k_min = 4, k_max = 4;
    long n_max = 100;
    BigInt modulus{"100000000000000000000"};  // 10^20
    enum class Mode { naive, hash } mode = Mode::naive;

    void validate() const;
};

// Exact verification; classifies on success.  Throws range_error on ordering
// violations and mismatch_error (with both side values) on inequality.
SolutionRecord verify_solution(int k, long n, long m, long n1, long m1);

Family classify(int k, long n, long m, long n1, long m1, const BigInt& c);
Family classify(const SolutionRecord& r);

// All parametric-family instances with n <= n_max.  Statement-form family
// (iii) candidates that fail verification are emitted flagged
// (verified = false) rather than dropped.
std::vector<SolutionRecord> family_enumerate(int k, long n_max);

// m-window derived from the slope log(alpha)/log 2 (outward rounded, then
// widened by one on both ends), clamped to m >= 1.
std::pair<long, long> m_window(int k, long n);

// Exhaustive exact search: double loop over (n, n1) and the windowed (m, m1).
std::vector<SolutionRecord> brute_force_search(const SearchConfig& cfg);

// Residue-set intersection search (mod cfg.modulus) with exact
// re-verification of every candidate; equals brute_force_search as a set.
std::vector<SolutionRecord> hash_search(const SearchConfig& cfg);

std::string to_json_line(const SolutionRecord& r);
std::string solution_csv_header();
std::string to_csv_line(const SolutionRecord& r);

}  // namespace kfib
