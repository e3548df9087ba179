#pragma once

#include <cstdint>
#include <string>

#include "ssp/graph.hpp"

namespace ssp {

struct OracleBudget {
    std::uint64_t max_nodes = 0;  // 0 = unlimited
    double max_seconds = 0.0;     // 0 = unlimited
};

struct OracleResult {
    bool conclusive = false;
    int value = -1;               // minimum strong-separating system size when conclusive
    PathSystem witness;
    int refuted_below = 0;        // every size < refuted_below was ruled out
    std::uint64_t nodes = 0;
    bool from_cache = false;
};

// Exhaustive search for the smallest strong-separating path system. Sizes are tried in
// increasing order starting from the Sperner bound (m edges need an antichain of m subsets);
// on complete graphs one path of maximum length is fixed to 0-1-...-l by symmetry.
// Needs m <= 64. Exceeding the budget yields conclusive == false, never a wrong value.
// When cache_path is nonempty, conclusive results are stored there as JSON keyed by a
// relabeling-invariant hash (exact canonical form for n <= 8).
OracleResult exact_ssp(const Graph& g, const OracleBudget& budget = {}, const std::string& cache_path = "");

// Minimal k with C(k, floor(k/2)) >= m.
int sperner_lower_bound(std::size_t m);

}  // namespace ssp
