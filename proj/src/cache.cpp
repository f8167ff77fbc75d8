#include <kfib/cache.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace kfib {

namespace {
constexpr const char* kHeader = "KFIBCACHE v1";
}

RootCache RootCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cache_error("cannot open cache file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw cache_error("cache version header mismatch in " + path);
    RootCache c;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string kind;
        is >> kind;
        auto fail = [&](const std::string& why) {
            throw cache_error(path + ":" + std::to_string(lineno) + ": " + why);
        };
        if (kind == "root") {
            int k;
            long bits;
            std::string lo_hex, hi_hex, p1, p2;
            long e1, e2;
            if (!(is >> k >> bits >> lo_hex >> p1 >> e1 >> hi_hex >> p2 >> e2) ||
                p1 != "p" || p2 != "p")
                fail("malformed root line");
            DominantRoot r;
            r.k = k;
            r.precision_bits = bits;
            r.alpha = DyadicInterval(DyadicFloat::from_hex_p(lo_hex + " p " + std::to_string(e1)),
                                     DyadicFloat::from_hex_p(hi_hex + " p " + std::to_string(e2)));
            c.roots_[{k, bits}] = std::move(r);
        } else if (kind == "cf") {
            int k;
            long bits;
            size_t count;
            if (!(is >> k >> bits >> count)) fail("malformed cf line");
            std::vector<BigInt> qs;
            qs.reserve(count);
            std::string tok;
            for (size_t i = 0; i < count; ++i) {
                if (!(is >> tok)) fail("cf line shorter than its count");
                qs.emplace_back(tok);
            }
            c.quotients_[{k, bits}] = std::move(qs);
        } else {
            fail("unknown record kind: " + kind);
        }
    }
    return c;
}

RootCache RootCache::load_or_empty(const std::string& path) {
    if (!std::filesystem::exists(path)) return RootCache();
    return load(path);
}

void RootCache::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw cache_error("cannot write cache file: " + path);
    out << kHeader << "\n";
    for (const auto& [key, r] : roots_) {
        out << "root " << key.first << " " << key.second << " " << r.alpha.lo.to_hex_p()
            << " " << r.alpha.hi.to_hex_p() << "\n";
    }
    for (const auto& [key, qs] : quotients_) {
        out << "cf " << key.first << " " << key.second << " " << qs.size();
        for (const auto& q : qs) out << " " << q.get_str();
        out << "\n";
    }
    if (!out) throw cache_error("write failure on cache file: " + path);
}

const DominantRoot* RootCache::find_root(int k, long bits) const {
    auto it = roots_.find({k, bits});
    return it == roots_.end() ? nullptr : &it->second;
}

void RootCache::put_root(const DominantRoot& r) { roots_[{r.k, r.precision_bits}] = r; }

const std::vector<BigInt>* RootCache::find_quotients(int k, long bits) const {
    auto it = quotients_.find({k, bits});
    return it == quotients_.end() ? nullptr : &it->second;
}

void RootCache::put_quotients(int k, long bits, std::vector<BigInt> q) {
    quotients_[{k, bits}] = std::move(q);
}

}  // namespace kfib
