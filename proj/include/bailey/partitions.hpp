#pragma once

#include <cstdint>
#include <set>
#include <vector>

namespace bailey {

// Brute-force partition counter: number of partitions of n (for n < order)
// into parts whose residue mod `modulus` is not excluded. Plain dynamic
// programming over part sizes; deliberately independent of the series
// engine so it can serve as ground truth.
inline std::vector<std::uint64_t> partition_oracle(long long modulus,
                                                   const std::set<long long>& excluded_residues,
                                                   long long order)
{
    std::set<long long> excl;
    for (long long r : excluded_residues) {
        long long m = r % modulus;
        if (m < 0) m += modulus;
        excl.insert(m);
    }
    std::vector<std::uint64_t> count(order > 0 ? order : 0, 0);
    if (order <= 0) return count;
    count[0] = 1;
    for (long long part = 1; part < order; ++part) {
        if (excl.count(part % modulus)) continue;
        for (long long n = part; n < order; ++n) count[n] += count[n - part];
    }
    return count;
}

} // namespace bailey
