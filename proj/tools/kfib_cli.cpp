// Command-line front end: sequence queries, certified roots with a cache,
// family enumeration, exhaustive searches, Baker bounds and the
// continued-fraction reduction pipeline.
//
// Exit codes: 0 success, 1 verification discrepancy (sporadic solution or
// search records outside the families), 2 usage error, 3 computation failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include <kfib/bounds.hpp>
#include <kfib/cache.hpp>
#include <kfib/reduction.hpp>
#include <kfib/search.hpp>
#include <kfib/sequence.hpp>

using namespace kfib;

namespace {

std::string default_cache_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* dir = std::getenv("KFIB_CACHE_DIR"))
        return std::string(dir) + "/kfib_cache.txt";
    return "";
}

struct OutSink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutSink(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::trunc);
            if (!file) throw domain_error("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

void write_records(std::ostream& os, const std::vector<SolutionRecord>& recs,
                   const std::string& format) {
    if (format == "csv") {
        os << solution_csv_header() << "\n";
        for (const auto& r : recs) os << to_csv_line(r) << "\n";
    } else {
        for (const auto& r : recs) os << to_json_line(r) << "\n";
    }
}

std::string bounds_json(int k) {
    BoundChain b = baker_chain(k);
    std::ostringstream os;
    os << "{\"k\":" << k << ",\"min_bound\":\"" << b.min_bound.to_decimal(12)
       << "\",\"max_bound\":\"" << b.max_bound.to_decimal(12) << "\",\"final_n_bound\":\""
       << b.final_n_bound.get_str() << "\",\"chain_n_bound\":\""
       << b.chain_n_bound.to_decimal(12) << "\",\"cutoff_satisfied\":"
       << (cutoff_inequality(k) ? "true" : "false") << ",\"hyp_satisfied\":"
       << (hyp_holds(k, b.final_n_bound) ? "true" : "false")
       << ",\"min_bound_constants\":[\"4.2e11\",\"4.25e11\"]}";
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"pillai-kfib: verification and search for F_n^(k) - 2^m = F_n1^(k) - 2^m1"};
    app.require_subcommand(1);

    // fib
    auto* fib = app.add_subcommand("fib", "print F_n^(k)");
    int fib_k = 4;
    long fib_n = 0;
    fib->add_option("--k", fib_k, "recursion order (>= 2)")->required();
    fib->add_option("--n", fib_n, "index (>= 2-k)")->required();

    // root
    auto* root = app.add_subcommand("root", "certified enclosure of the dominant root");
    int root_k = 4;
    long root_bits = 256;
    std::string root_cache;
    bool root_verbose = false;
    root->add_option("--k", root_k)->required();
    root->add_option("--bits", root_bits, "precision bits (default 256)");
    root->add_option("--cache", root_cache, "cache file (default $KFIB_CACHE_DIR/kfib_cache.txt)");
    root->add_flag("--verbose", root_verbose, "log cache hits/misses");

    // families
    auto* fams = app.add_subcommand("families", "enumerate the parametric solution families");
    int fam_k = 4;
    long fam_nmax = 100;
    std::string fam_out, fam_format = "jsonl";
    fams->add_option("--k", fam_k)->required();
    fams->add_option("--n-max", fam_nmax)->required();
    fams->add_option("--out", fam_out, "output path (default stdout)");
    fams->add_option("--format", fam_format, "jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));

    // search
    auto* search = app.add_subcommand("search", "exhaustive solution search");
    SearchConfig scfg;
    std::string s_mode = "naive", s_modulus, s_out, s_format = "jsonl";
    search->add_option("--k-min", scfg.k_min)->required();
    search->add_option("--k-max", scfg.k_max)->required();
    search->add_option("--n-max", scfg.n_max)->required();
    search->add_option("--mode", s_mode)->check(CLI::IsMember({"naive", "hash"}));
    search->add_option("--modulus", s_modulus, "residue modulus for hash mode (default 10^20)");
    search->add_option("--out", s_out);
    search->add_option("--format", s_format)->check(CLI::IsMember({"jsonl", "csv"}));

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Baker bound chain report");
    int bounds_k = 4;
    std::string bounds_out;
    bounds->add_option("--k", bounds_k)->required();
    bounds->add_option("--out", bounds_out);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "continued-fraction reduction sweeps");
    std::string r_case = "gamma";
    int r_kmin = 0, r_kmax = 0, r_k = 0;
    long r_lmax = 0, r_jmax = 0, r_bits = 2200;
    std::string r_m, r_out, r_cursor;
    reduce->add_option("--case", r_case, "gamma|gamma1|gamma2|gamma3|all")
        ->check(CLI::IsMember({"gamma", "gamma1", "gamma2", "gamma3", "all"}));
    reduce->add_option("--k", r_k, "single k");
    reduce->add_option("--k-min", r_kmin, "sweep start (long-running mode)");
    reduce->add_option("--k-max", r_kmax, "sweep end");
    reduce->add_option("--l-max", r_lmax, "alpha-exponent range (gamma1/gamma3)");
    reduce->add_option("--j-max", r_jmax, "2-exponent range (gamma2/gamma3)");
    reduce->add_option("--m", r_m, "override M (default: the closed Baker bound)");
    reduce->add_option("--bits", r_bits, "working precision (default 2200)");
    reduce->add_option("--out", r_out, "jsonl output path");
    reduce->add_option("--cursor", r_cursor, "cursor file for resumable sweeps");

    // report
    auto* report = app.add_subcommand("report", "families + search + classification per k");
    int rep_kmin = 4, rep_kmax = 4;
    long rep_nmax = 100;
    std::string rep_out;
    report->add_option("--k-min", rep_kmin)->required();
    report->add_option("--k-max", rep_kmax)->required();
    report->add_option("--n-max", rep_nmax);
    report->add_option("--out", rep_out, "report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    if (fib->parsed()) {
        std::cout << kfib_term(fib_k, fib_n).get_str() << "\n";
        return 0;
    }

    if (root->parsed()) {
        std::string path = default_cache_path(root_cache);
        RootCache cache;
        if (!path.empty()) cache = RootCache::load_or_empty(path);
        const DominantRoot* hit = path.empty() ? nullptr : cache.find_root(root_k, root_bits);
        DominantRoot r;
        if (hit) {
            if (root_verbose) std::cerr << "cache hit: root k=" << root_k << " bits=" << root_bits << "\n";
            r = *hit;
        } else {
            if (root_verbose) std::cerr << "cache miss: bisecting\n";
            r = dominant_root(root_k, root_bits);
            if (!path.empty()) {
                cache.put_root(r);
                cache.save(path);
            }
        }
        std::cout << "k=" << r.k << " bits=" << r.precision_bits << "\n"
                  << "lo = " << r.alpha.lo.to_hex_p() << "  (" << r.alpha.lo.to_decimal(30) << ")\n"
                  << "hi = " << r.alpha.hi.to_hex_p() << "  (" << r.alpha.hi.to_decimal(30) << ")\n";
        return 0;
    }

    if (fams->parsed()) {
        auto recs = family_enumerate(fam_k, fam_nmax);
        OutSink sink(fam_out);
        write_records(sink.get(), recs, fam_format);
        return 0;
    }

    if (search->parsed()) {
        scfg.mode = (s_mode == "hash") ? SearchConfig::Mode::hash : SearchConfig::Mode::naive;
        if (!s_modulus.empty()) scfg.modulus = BigInt(s_modulus);
        auto recs = scfg.mode == SearchConfig::Mode::hash ? hash_search(scfg)
                                                          : brute_force_search(scfg);
        OutSink sink(s_out);
        write_records(sink.get(), recs, s_format);
        for (const auto& r : recs)
            if (r.family == Family::sporadic) {
                std::cerr << "sporadic solution found: " << to_json_line(r) << "\n";
                return 1;
            }
        return 0;
    }

    if (bounds->parsed()) {
        OutSink sink(bounds_out);
        sink.get() << bounds_json(bounds_k) << "\n";
        return 0;
    }

    if (reduce->parsed()) {
        if (r_k == 0 && r_kmin == 0)
            throw CLI::ValidationError("reduce", "need --k or --k-min/--k-max");
        int lo = r_k ? r_k : r_kmin;
        int hi = r_k ? r_k : (r_kmax ? r_kmax : r_kmin);
        OutSink sink(r_out);
        bool any_failed = false;
        for (int k = lo; k <= hi; ++k) {
            if (r_case == "all") {
                PipelineResult p = final_n_bound_after_reduction(k, r_bits, &sink.get());
                std::ostringstream os;
                os << "{\"k\":" << k << ",\"gamma_w_n\":" << p.gamma_w_n
                   << ",\"gamma_w_m\":" << p.gamma_w_m << ",\"gamma1_w_m\":" << p.gamma1_w_m
                   << ",\"gamma2_w_n\":" << p.gamma2_w_n << ",\"n_bound\":" << p.n_bound
                   << ",\"n_bound_alt\":" << p.n_bound_alt << ",\"established\":"
                   << (p.established ? "true" : "false") << "}";
                sink.get() << os.str() << "\n";
                if (!p.established) {
                    std::cerr << "reduction not established for k=" << k << "\n";
                    any_failed = true;
                }
            } else {
                SweepOptions opt;
                opt.bits = r_bits;
                if (!r_m.empty()) opt.M = BigInt(r_m);
                opt.jsonl = &sink.get();
                opt.cursor_path = r_cursor;
                opt.keep_outcomes = false;
                GammaCase gc = r_case == "gamma"    ? GammaCase::gamma
                               : r_case == "gamma1" ? GammaCase::gamma1
                               : r_case == "gamma2" ? GammaCase::gamma2
                                                    : GammaCase::gamma3;
                // default ranges: full-sweep sizes per case
                if (gc == GammaCase::gamma1) opt.l_max = r_lmax > 0 ? r_lmax : 1571;
                if (gc == GammaCase::gamma2) opt.j_max = r_jmax > 0 ? r_jmax : 1566;
                if (gc == GammaCase::gamma3) {
                    opt.l_max = r_lmax > 0 ? r_lmax : 1574;
                    opt.j_max = r_jmax > 0 ? r_jmax : 1570;
                }
                SweepSummary s = reduction_sweep(gc, k, opt);
                sink.get() << "{\"case\":\"" << r_case << "\",\"k\":" << k
                           << ",\"max_w\":" << s.max_w << ",\"cells\":" << s.total_cells
                           << ",\"failed\":" << s.failed_cells << "}\n";
                if (s.failed_cells > 0) any_failed = true;
            }
        }
        return any_failed ? 3 : 0;
    }

    if (report->parsed()) {
        std::ostringstream body;
        bool discrepancy = false;
        long sporadic_total = 0;
        body << "{\"k_min\":" << rep_kmin << ",\"k_max\":" << rep_kmax
             << ",\"n_max\":" << rep_nmax << ",\"per_k\":[";
        for (int k = rep_kmin; k <= rep_kmax; ++k) {
            auto fam = family_enumerate(k, rep_nmax);
            SearchConfig cfg;
            cfg.k_min = cfg.k_max = k;
            cfg.n_max = rep_nmax;
            cfg.mode = SearchConfig::Mode::hash;
            auto found = hash_search(cfg);
            long sporadic = 0, flagged = 0;
            bool subset = true;
            for (const auto& r : found) {
                if (r.family == Family::sporadic) ++sporadic;
                if (std::find(fam.begin(), fam.end(), r) == fam.end()) subset = false;
            }
            for (const auto& f : fam)
                if (!f.verified) ++flagged;
            sporadic_total += sporadic;
            if (sporadic > 0 || !subset) discrepancy = true;
            if (k > rep_kmin) body << ",";
            body << "{\"k\":" << k << ",\"families\":" << fam.size() << ",\"found\":"
                 << found.size() << ",\"sporadic\":" << sporadic
                 << ",\"search_subset_of_families\":" << (subset ? "true" : "false")
                 << ",\"statement_form_flags\":" << flagged << "}";
        }
        body << "],\"sporadic_total\":" << sporadic_total << "}";
        OutSink sink(rep_out);
        sink.get() << body.str() << "\n";
        return discrepancy ? 1 : 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 3;
    }
}
