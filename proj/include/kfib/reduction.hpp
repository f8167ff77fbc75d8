#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <kfib/algebraic.hpp>

namespace kfib {

// Certified continued fraction of every real in an interval: a quotient is
// emitted only when the whole interval yields the same integer part at that
// step.  Convergents satisfy the usual recurrences.
struct CFExpansion {
    DyadicInterval x;  // the expanded enclosure (informational)
    std::vector<BigInt> quotients;
    std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_i, q_i)
    bool terminated = false;  // input was an exact rational, fully expanded
};

// x.lo > 0 required.  Stops at max_quotients or at the first step where the
// interval straddles an integer boundary (all earlier quotients stay valid).
CFExpansion cf_expand(const DyadicInterval& x, std::size_t max_quotients);
// Exact expansion of a rational (terminates).
CFExpansion cf_expand_rational(const Rational& x, std::size_t max_quotients);

// One Dujella-Petho reduction instance: if eps = ||mu q|| - M ||tau q|| > 0
// for a convergent denominator q > 6M of tau, then 0 < |u tau - v + mu| <
// A B^-w with u <= M forces w < log(A q / eps) / log B.
struct ReductionInstance {
    DyadicInterval tau;
    DyadicInterval mu;
    DyadicInterval A;  // > 0
    DyadicInterval B;  // > 1
    BigInt M;          // >= 1
};

struct ReductionOutcome {
    BigInt q_used;
    DyadicInterval epsilon;  // epsilon.lo > 0 certified
    long w_bound = 0;        // ceil of log(A q / eps)/log B, outward rounded
    int convergent_index = 0;
};

// Shares the CF of tau and the ladder of candidate convergents (q > 6M and
// the next retry_cap ones) across many mu values.
class ReductionEngine {
public:
    ReductionEngine(const DyadicInterval& tau, BigInt M, long bits, int retry_cap = 25);

    // mu given directly.
    ReductionOutcome reduce(const DyadicInterval& mu, const DyadicInterval& A,
                            const DyadicInterval& B) const;
    // mu = x / ln 2 (the common shape of the Gamma linear forms); cheaper
    // because 1/ln2 * q is folded per convergent.
    ReductionOutcome reduce_scaled(const DyadicInterval& x, const DyadicInterval& A,
                                   const DyadicInterval& B) const;
    // Rebind an outcome to different (A, B); epsilon and q do not depend on
    // them, only the final w formula does.
    long w_bound_with(const ReductionOutcome& out, const DyadicInterval& A,
                      const DyadicInterval& B) const;

    const CFExpansion& cf() const { return cf_; }
    long bits() const { return bits_; }

private:
    struct Rung {
        BigInt q;
        DyadicInterval m_tau_dist;  // M * ||tau q||
        DyadicInterval inv_ln2_q;   // q / ln 2
    };
    ReductionOutcome finish(const DyadicInterval& muq, const Rung& rung, int index,
                            const DyadicInterval& A, const DyadicInterval& B) const;

    long bits_;
    BigInt M_;
    CFExpansion cf_;
    std::vector<Rung> rungs_;
    std::vector<int> rung_index_;
};

ReductionOutcome dp_reduce(const ReductionInstance& inst, long bits = 2200, int retry_cap = 25);

enum class GammaCase { gamma, gamma1, gamma2, gamma3 };
const char* gamma_case_name(GammaCase c);

struct SweepOutcome {
    GammaCase kase = GammaCase::gamma;
    int k = 0;
    long l = 0, j = 0;    // 0 when not applicable
    std::string branch;   // gamma only: "n-n1" or "m-m1"
    bool ok = false;
    BigInt q;
    DyadicFloat epsilon_lo;
    long w_bound = -1;
    long w_bound_alt = -1;  // gamma3 only: A = 2^6/ln 2 variant
    std::string error;
};

std::string to_json_line(const SweepOutcome& o);

struct SweepSummary {
    std::vector<SweepOutcome> outcomes;  // empty if keep_outcomes = false
    long max_w = -1;                     // maximum binding w_bound over ok cells
    long max_w_alt = -1;                 // gamma3: maximum under A = 2^6/ln 2
    std::map<std::string, long> branch_max;
    std::size_t total_cells = 0;
    std::size_t failed_cells = 0;
};

struct SweepOptions {
    long l_min = 1, l_max = 0;  // gamma1/gamma3
    long j_min = 1, j_max = 0;  // gamma2/gamma3
    BigInt M;                   // empty => the closed Baker bound for this k
    long bits = 2200;
    int max_doublings = 5;
    // 0 = auto: max(25, 50 + k/3).  For large k the forms mu_k = log2 f_k and
    // tau_k are correlated through alpha ~ 2 - 2^-k, which drives ||mu q||
    // within ~2^-k of an integer on the early convergents; epsilon only turns
    // positive ~k/5 convergents past q > 6M.
    int retry_cap = 0;
    std::ostream* jsonl = nullptr;
    std::string cursor_path;    // resume support for long sweeps
    bool keep_outcomes = true;
};

SweepSummary reduction_sweep(GammaCase c, int k, SweepOptions opt);

// The per-k reduction pipeline: Gamma gives per-branch bounds on n-n1 and
// m-m1, Gamma_1/Gamma_2 tighten them, Gamma_3 over the resulting grid bounds
// n itself.
struct PipelineResult {
    int k = 0;
    long gamma_w_n = -1;   // n-n1 via (200, alpha)
    long gamma_w_m = -1;   // m-m1 via (8, 2)
    long gamma1_w_m = -1;  // m-m1 via (8, 2) over l
    long gamma2_w_n = -1;  // n-n1 via (114, alpha) over j
    long n_bound = -1;     // gamma3 binding bound on n (A = 114)
    long n_bound_alt = -1; // gamma3 with A = 2^6/ln 2
    std::size_t failed_cells = 0;
    bool established = false;  // true iff every cell reduced
};

PipelineResult final_n_bound_after_reduction(int k, long bits = 2200,
                                             std::ostream* jsonl = nullptr);

}  // namespace kfib
