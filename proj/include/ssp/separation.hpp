#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssp/graph.hpp"

namespace ssp {

enum class SeparationMode { weak, strong };

const char* to_string(SeparationMode mode);
SeparationMode parse_separation_mode(const std::string& s);

struct PathCheck {
    bool ok = true;
    std::size_t index = 0;  // first invalid path when !ok
    std::string reason;
};

PathCheck validate_path_system(const Graph& g, const PathSystem& ps);

// sig[e] = sorted indices of the paths containing edge id e. Throws InvalidPathError.
using Signatures = std::vector<std::vector<int>>;
Signatures edge_signatures(const Graph& g, const PathSystem& ps);

// Edge ids of every path, in path order. Throws InvalidPathError.
std::vector<std::vector<int>> path_edge_lists(const Graph& g, const PathSystem& ps);

struct SeparationReport {
    SeparationMode mode = SeparationMode::strong;
    bool ok = true;
    // Number of offending ordered pairs (e, f). Strong: sig(e) is a subset of sig(f).
    // Weak: sig(e) == sig(f).
    std::uint64_t violation_count = 0;
    // At most `max_listed` of them, in order of e then f.
    std::vector<std::pair<Edge, Edge>> violations;
    bool truncated = false;
    std::vector<Edge> uncovered;
};

SeparationReport verify_separation(const Graph& g, const PathSystem& ps, SeparationMode mode,
                                   std::size_t max_listed = 1000);

// True when sig[e] is nonempty and not contained in sig[f] for any other edge f.
// Only edges on the shortest path through e can contain it, so this is O(path length * |sig|).
bool is_separated(const Signatures& sig, const std::vector<std::vector<int>>& path_edges, int e);

// is_separated for every edge.
std::vector<char> separated_edges(const Graph& g, const PathSystem& ps);

}  // namespace ssp
