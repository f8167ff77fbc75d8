#pragma once

#include <map>
#include <string>
#include <vector>

#include <kfib/algebraic.hpp>

namespace kfib {

// Line-oriented, versioned, human-auditable store for dominant roots and CF
// quotients.  Format:
//   KFIBCACHE v1
//   root <k> <bits> <lo mantissa_hex> p <exp> <hi mantissa_hex> p <exp>
//   cf <k> <bits> <count> <a0> <a1> ...
// A reload reproduces bit-identical dyadic endpoints.
class RootCache {
public:
    RootCache() = default;

    // Throws cache_error on a missing/corrupt/mismatched-version file.
    static RootCache load(const std::string& path);
    // Returns an empty cache when the file does not exist.
    static RootCache load_or_empty(const std::string& path);
    void save(const std::string& path) const;

    const DominantRoot* find_root(int k, long bits) const;
    void put_root(const DominantRoot& r);

    const std::vector<BigInt>* find_quotients(int k, long bits) const;
    void put_quotients(int k, long bits, std::vector<BigInt> q);

    std::size_t size() const { return roots_.size() + quotients_.size(); }

private:
    std::map<std::pair<int, long>, DominantRoot> roots_;
    std::map<std::pair<int, long>, std::vector<BigInt>> quotients_;
};

}  // namespace kfib
