#include <kfib/reduction.hpp>

#include <kfib/bounds.hpp>

#include <array>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace kfib {

namespace {

BigInt rat_floor(const Rational& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

CFExpansion cf_core(Rational lo, Rational hi, std::size_t max_quotients) {
    if (lo > hi) throw domain_error("cf_expand interval out of order");
    if (lo <= 0) throw domain_error("cf_expand requires a positive lower endpoint");
    CFExpansion out;
    // convergent recurrence seeds: p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
    BigInt pm1(1), qm1(0), pm2(0), qm2(1);
    while (out.quotients.size() < max_quotients) {
        BigInt fl_lo = rat_floor(lo), fl_hi = rat_floor(hi);
        if (fl_lo != fl_hi) break;  // quotient not certified for the whole interval
        const BigInt& a = fl_lo;
        out.quotients.push_back(a);
        BigInt p = a * pm1 + pm2;
        BigInt q = a * qm1 + qm2;
        out.convergents.emplace_back(p, q);
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        lo -= Rational(a);
        hi -= Rational(a);
        lo.canonicalize();
        hi.canonicalize();
        if (lo == 0 && hi == 0) {
            out.terminated = true;
            break;
        }
        if (lo == 0 || hi == 0) break;  // next quotient unbounded on one side
        Rational nlo = 1 / hi, nhi = 1 / lo;
        lo = nlo;
        hi = nhi;
    }
    return out;
}

}  // namespace

CFExpansion cf_expand(const DyadicInterval& x, std::size_t max_quotients) {
    CFExpansion out = cf_core(x.lo.to_rational(), x.hi.to_rational(), max_quotients);
    out.x = x;
    return out;
}

CFExpansion cf_expand_rational(const Rational& x, std::size_t max_quotients) {
    CFExpansion out = cf_core(x, x, max_quotients);
    out.x = DyadicInterval::from_rational(x, 128);
    return out;
}

ReductionEngine::ReductionEngine(const DyadicInterval& tau, BigInt M, long bits, int retry_cap)
    : bits_(bits), M_(std::move(M)) {
    if (M_ < 1) throw domain_error("reduction needs M >= 1");
    if (retry_cap < 1) retry_cap = 1;
    BigInt six_m = 6 * M_;
    // Expand far enough to get the base convergent plus the retry ladder;
    // quotient count is generous, certification truncates it anyway.
    cf_ = cf_expand(tau, 4096);
    int base = -1;
    for (int i = 0; i < static_cast<int>(cf_.convergents.size()); ++i) {
        if (cf_.convergents[static_cast<size_t>(i)].second > six_m) {
            base = i;
            break;
        }
    }
    if (base < 0)
        throw ambiguous_quotient("no certified convergent with q > 6M at this precision");
    DyadicInterval invl2 = inv_ln2_interval(bits_);
    for (int i = base; i < static_cast<int>(cf_.convergents.size()) &&
                       i < base + retry_cap; ++i) {
        Rung r;
        r.q = cf_.convergents[static_cast<size_t>(i)].second;
        DyadicInterval tq = iv_mul_int(tau, r.q, bits_);
        r.m_tau_dist = iv_mul_int(nearest_int_distance(tq), M_, bits_);
        r.inv_ln2_q = iv_mul_int(invl2, r.q, bits_);
        rungs_.push_back(std::move(r));
        rung_index_.push_back(i);
    }
}

namespace {

// w_bound = ceil(log(A q / eps_lo) / log B); the integer only needs modest
// working precision, every rounding is directed so the result stays a valid
// bound.
long w_bound_value(const BigInt& q, const DyadicFloat& eps_lo, const DyadicInterval& A,
                   const DyadicInterval& B) {
    if (!(B.lo > DyadicFloat(1L))) throw domain_error("dp_reduce needs B > 1");
    const long wbits = 128;
    DyadicFloat aq = (A.hi * DyadicFloat(q)).round_up(wbits);
    DyadicFloat x = div_up(aq, eps_lo.round_down(wbits), wbits);
    DyadicFloat num = ln_point(x, wbits).hi;
    DyadicFloat den = ln_point(B.lo.round_down(wbits), wbits).lo;
    if (den.sgn() <= 0) throw precision_error("log B enclosure not positive");
    BigInt w = div_up(num, den, wbits).ceil();
    if (!mpz_fits_slong_p(w.get_mpz_t()))
        throw domain_error("w bound does not fit a machine integer");
    return w.get_si();
}

}  // namespace

long ReductionEngine::w_bound_with(const ReductionOutcome& out, const DyadicInterval& A,
                                   const DyadicInterval& B) const {
    return w_bound_value(out.q_used, out.epsilon.lo, A, B);
}

ReductionOutcome ReductionEngine::finish(const DyadicInterval& muq, const Rung& rung,
                                         int index, const DyadicInterval& A,
                                         const DyadicInterval& B) const {
    DyadicInterval eps = iv_sub(nearest_int_distance(muq), rung.m_tau_dist, bits_);
    if (eps.lo.sgn() <= 0) throw no_positive_epsilon("epsilon not certifiably positive");
    ReductionOutcome out;
    out.q_used = rung.q;
    out.epsilon = eps;
    out.w_bound = w_bound_value(rung.q, eps.lo, A, B);
    out.convergent_index = index;
    return out;
}

ReductionOutcome ReductionEngine::reduce(const DyadicInterval& mu, const DyadicInterval& A,
                                         const DyadicInterval& B) const {
    for (size_t i = 0; i < rungs_.size(); ++i) {
        try {
            DyadicInterval muq = iv_mul_int(mu, rungs_[i].q, bits_);
            return finish(muq, rungs_[i], rung_index_[i], A, B);
        } catch (const no_positive_epsilon&) {
            // advance to the next convergent
        }
    }
    throw no_positive_epsilon("no convergent produced a certified positive epsilon");
}

ReductionOutcome ReductionEngine::reduce_scaled(const DyadicInterval& x,
                                                const DyadicInterval& A,
                                                const DyadicInterval& B) const {
    for (size_t i = 0; i < rungs_.size(); ++i) {
        try {
            DyadicInterval muq = iv_mul(x, rungs_[i].inv_ln2_q, bits_);
            return finish(muq, rungs_[i], rung_index_[i], A, B);
        } catch (const no_positive_epsilon&) {
        }
    }
    throw no_positive_epsilon("no convergent produced a certified positive epsilon");
}

ReductionOutcome dp_reduce(const ReductionInstance& inst, long bits, int retry_cap) {
    if (!inst.A.strictly_positive()) throw domain_error("dp_reduce needs A > 0");
    ReductionEngine eng(inst.tau, inst.M, bits, retry_cap);
    return eng.reduce(inst.mu, inst.A, inst.B);
}

const char* gamma_case_name(GammaCase c) {
    switch (c) {
        case GammaCase::gamma: return "gamma";
        case GammaCase::gamma1: return "gamma1";
        case GammaCase::gamma2: return "gamma2";
        case GammaCase::gamma3: return "gamma3";
    }
    return "?";
}

std::string to_json_line(const SweepOutcome& o) {
    std::ostringstream os;
    os << "{\"case\":\"" << gamma_case_name(o.kase) << "\",\"k\":" << o.k;
    if (o.l > 0) os << ",\"l\":" << o.l;
    if (o.j > 0) os << ",\"j\":" << o.j;
    if (!o.branch.empty()) os << ",\"branch\":\"" << o.branch << "\"";
    if (o.ok) {
        os << ",\"q\":\"" << o.q.get_str() << "\",\"epsilon_lo\":\""
           << o.epsilon_lo.to_decimal(8) << "\",\"w_bound\":" << o.w_bound;
        if (o.w_bound_alt >= 0) os << ",\"w_bound_alt\":" << o.w_bound_alt;
    } else {
        os << ",\"error\":\"" << o.error << "\"";
    }
    os << "}";
    return os.str();
}

namespace {

struct SweepDriver {
    GammaCase kase;
    int k;
    SweepOptions& opt;
    SweepSummary summary;
    std::optional<std::array<long, 2>> cursor;  // resume point (l, j)
    std::ofstream cursor_out;

    SweepDriver(GammaCase c, int kk, SweepOptions& o) : kase(c), k(kk), opt(o) {
        if (!opt.cursor_path.empty()) {
            std::ifstream in(opt.cursor_path);
            std::string cs;
            int ck;
            long cl, cj;
            if (in >> cs >> ck >> cl >> cj) {
                if (cs == gamma_case_name(kase) && ck == k) cursor = {cl, cj};
            }
        }
    }

    bool skip(long l, long j) {
        if (!cursor) return false;
        if (std::array<long, 2>{l, j} <= *cursor) return true;
        cursor.reset();
        return false;
    }

    void emit(SweepOutcome o) {
        ++summary.total_cells;
        if (o.ok) {
            if (o.w_bound > summary.max_w) summary.max_w = o.w_bound;
            if (o.w_bound_alt > summary.max_w_alt) summary.max_w_alt = o.w_bound_alt;
            std::string key = o.branch.empty() ? "w" : o.branch;
            auto it = summary.branch_max.find(key);
            if (it == summary.branch_max.end() || o.w_bound > it->second)
                summary.branch_max[key] = o.w_bound;
        } else {
            ++summary.failed_cells;
        }
        if (opt.jsonl) (*opt.jsonl) << to_json_line(o) << "\n";
        if (!opt.cursor_path.empty()) {
            std::ofstream out(opt.cursor_path, std::ios::trunc);
            out << gamma_case_name(kase) << " " << k << " " << o.l << " " << o.j << "\n";
        }
        if (opt.keep_outcomes) summary.outcomes.push_back(std::move(o));
    }
};

}  // namespace

SweepSummary reduction_sweep(GammaCase c, int k, SweepOptions opt) {
    if (k < 4) throw domain_error("reduction sweeps start at k = 4");
    if (opt.M == 0) opt.M = baker_chain(k).final_n_bound;
    if ((c == GammaCase::gamma1 || c == GammaCase::gamma3) && opt.l_max < opt.l_min)
        throw domain_error("sweep needs an l range");
    if ((c == GammaCase::gamma2 || c == GammaCase::gamma3) && opt.j_max < opt.j_min)
        throw domain_error("sweep needs a j range");

    int retry_cap = opt.retry_cap > 0 ? opt.retry_cap : std::max(25, 50 + k / 3);
    return with_precision_ladder(opt.bits, opt.max_doublings, [&](long bits) {
        SweepDriver drv(c, k, opt);
        ReductionEngine eng(tau_interval(k, bits), opt.M, bits, retry_cap);
        long wb = bits + 16;
        DyadicInterval lnf = ln_interval(f_k_value(k, bits), wb);
        const DyadicInterval& alpha = dominant_root_cached(k, bits).alpha;
        DyadicInterval two_hundred(DyadicFloat(200L));
        DyadicInterval eight(DyadicFloat(8L));
        DyadicInterval one_fourteen(DyadicFloat(114L));
        DyadicInterval two(DyadicFloat(2L));
        DyadicInterval a_alt = iv_mul_int(inv_ln2_interval(wb), BigInt(64), wb);  // 2^6/ln 2

        auto run_cell = [&](long l, long j, const std::string& branch,
                            const DyadicInterval& x, const DyadicInterval& A,
                            const DyadicInterval& B, const DyadicInterval* A_alt) {
            if (drv.skip(l, j)) return;
            SweepOutcome o;
            o.kase = c;
            o.k = k;
            o.l = l;
            o.j = j;
            o.branch = branch;
            try {
                ReductionOutcome r = eng.reduce_scaled(x, A, B);
                o.ok = true;
                o.q = r.q_used;
                o.epsilon_lo = r.epsilon.lo;
                o.w_bound = r.w_bound;
                if (A_alt) o.w_bound_alt = eng.w_bound_with(r, *A_alt, B);
            } catch (const no_positive_epsilon& e) {
                o.error = e.what();
            }
            drv.emit(std::move(o));
        };

        switch (c) {
            case GammaCase::gamma: {
                // mu = log f_k(alpha) / log 2; branch (200, alpha) bounds n-n1,
                // branch (8, 2) bounds m-m1
                run_cell(0, 0, "n-n1", lnf, two_hundred, alpha, nullptr);
                run_cell(0, 0, "m-m1", lnf, eight, two, nullptr);
                break;
            }
            case GammaCase::gamma1: {
                // mu = log(f (alpha^l - 1)) / log 2 with (8, 2), bounds m-m1
                DyadicInterval apow(DyadicFloat(1L));
                for (long l = 1; l <= opt.l_max; ++l) {
                    apow = iv_mul(apow, alpha, wb);
                    if (l < opt.l_min) continue;
                    DyadicInterval term =
                        iv_sub(apow, DyadicInterval(DyadicFloat(1L)), wb);
                    DyadicInterval x = iv_add(lnf, ln_interval(term, wb), wb);
                    run_cell(l, 0, "", x, eight, two, nullptr);
                }
                break;
            }
            case GammaCase::gamma2: {
                // mu = log(f (2^j - 1)) / log 2 with (114, alpha), bounds n-n1
                for (long j = opt.j_min; j <= opt.j_max; ++j) {
                    DyadicFloat pj(pow2z(static_cast<unsigned long>(j)) - 1, 0);
                    DyadicInterval x =
                        iv_add(lnf, ln_point(pj, wb), wb);
                    run_cell(0, j, "", x, one_fourteen, alpha, nullptr);
                }
                break;
            }
            case GammaCase::gamma3: {
                // mu = log(f (alpha^l - 1)/(2^j - 1)) / log 2 with (A, 2);
                // A = 114 binding, A = 2^6/ln 2 as printed
                std::vector<DyadicInterval> U;  // lnf + ln(alpha^l - 1)
                U.reserve(static_cast<size_t>(opt.l_max));
                DyadicInterval apow(DyadicFloat(1L));
                for (long l = 1; l <= opt.l_max; ++l) {
                    apow = iv_mul(apow, alpha, wb);
                    DyadicInterval term =
                        iv_sub(apow, DyadicInterval(DyadicFloat(1L)), wb);
                    U.push_back(iv_add(lnf, ln_interval(term, wb), wb));
                }
                std::vector<DyadicInterval> V;  // ln(2^j - 1)
                V.reserve(static_cast<size_t>(opt.j_max));
                for (long j = 1; j <= opt.j_max; ++j) {
                    DyadicFloat pj(pow2z(static_cast<unsigned long>(j)) - 1, 0);
                    V.push_back(ln_point(pj, wb));
                }
                for (long l = opt.l_min; l <= opt.l_max; ++l) {
                    for (long j = opt.j_min; j <= opt.j_max; ++j) {
                        DyadicInterval x = iv_sub(U[static_cast<size_t>(l - 1)],
                                                  V[static_cast<size_t>(j - 1)], wb);
                        run_cell(l, j, "", x, one_fourteen, two, &a_alt);
                    }
                }
                break;
            }
        }
        return std::move(drv.summary);
    });
}

PipelineResult final_n_bound_after_reduction(int k, long bits, std::ostream* jsonl) {
    PipelineResult res;
    res.k = k;
    BigInt M = baker_chain(k).final_n_bound;

    SweepOptions g;
    g.M = M;
    g.bits = bits;
    g.jsonl = jsonl;
    g.keep_outcomes = false;
    SweepSummary sg = reduction_sweep(GammaCase::gamma, k, g);
    res.failed_cells += sg.failed_cells;
    auto branch = [&](const char* name) {
        auto it = sg.branch_max.find(name);
        return it == sg.branch_max.end() ? -1L : it->second;
    };
    res.gamma_w_n = branch("n-n1");
    res.gamma_w_m = branch("m-m1");
    if (res.gamma_w_n < 0 || res.gamma_w_m < 0) return res;  // not established

    SweepOptions g1 = g;
    g1.l_min = 1;
    g1.l_max = res.gamma_w_n;
    SweepSummary s1 = reduction_sweep(GammaCase::gamma1, k, g1);
    res.failed_cells += s1.failed_cells;
    res.gamma1_w_m = s1.max_w;

    SweepOptions g2 = g;
    g2.j_min = 1;
    g2.j_max = res.gamma_w_m;
    SweepSummary s2 = reduction_sweep(GammaCase::gamma2, k, g2);
    res.failed_cells += s2.failed_cells;
    res.gamma2_w_n = s2.max_w;

    if (res.gamma1_w_m < 0 || res.gamma2_w_n < 0) return res;

    SweepOptions g3 = g;
    g3.l_min = 1;
    g3.l_max = std::max(res.gamma_w_n, res.gamma2_w_n);
    g3.j_min = 1;
    g3.j_max = std::max(res.gamma_w_m, res.gamma1_w_m);
    SweepSummary s3 = reduction_sweep(GammaCase::gamma3, k, g3);
    res.failed_cells += s3.failed_cells;
    res.n_bound = s3.max_w;
    res.n_bound_alt = s3.max_w_alt;
    if (res.n_bound >= 0 && res.failed_cells == 0) res.established = true;
    return res;
}

}  // namespace kfib
