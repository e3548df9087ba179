#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssp {

// Undirected edge, always stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;
    auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

inline constexpr int kNoEdge = -1;

// Simple undirected graph on vertices 0..n-1. Immutable once built; edge ids index
// the lexicographically sorted edge list.
class Graph {
public:
    Graph() = default;
    // Throws std::invalid_argument on self-loops, duplicate edges or out-of-range endpoints.
    Graph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    std::span<const int> neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    // Edge ids parallel to neighbors(v).
    std::span<const int> incident_edges(int v) const { return adj_ids_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
    int max_degree() const;
    int min_degree() const;

    // kNoEdge when u and v are not adjacent (or equal).
    int edge_id(int u, int v) const;
    bool has_edge(int u, int v) const { return edge_id(u, v) != kNoEdge; }

    // |E| / C(n,2); zero for n < 2.
    double density() const;

    // Subgraph on the same vertex set keeping the given edge ids.
    Graph edge_subgraph(std::span<const int> edge_ids) const;

    // FNV-1a over (n, sorted edge list); stable across runs and platforms.
    std::uint64_t hash() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> adj_ids_;
};

// Ordered sequence of distinct vertices; validity against a host graph is checked separately.
struct Path {
    std::vector<int> vertices;

    std::size_t num_edges() const { return vertices.size() < 2 ? 0 : vertices.size() - 1; }
    bool operator==(const Path&) const = default;
};

struct PathSystem {
    std::vector<Path> paths;

    std::size_t size() const { return paths.size(); }
    bool operator==(const PathSystem&) const = default;
};

// Thrown by operations that require a valid path system.
class InvalidPathError : public std::invalid_argument {
public:
    InvalidPathError(std::size_t index, const std::string& reason)
        : std::invalid_argument("path " + std::to_string(index) + ": " + reason), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// Edge ids of a path in order; throws InvalidPathError (with `index`) when the path is not simple in g.
std::vector<int> path_edge_ids(const Graph& g, const Path& p, std::size_t index = 0);

// Graph families used by the CLI, the benchmark harness and the tests.
Graph complete_graph(int n);
// K_{n/2,n/2} with parts {0..n/2-1} and {n/2..n-1}; n must be even.
Graph complete_bipartite_graph(int n);
// Uniform-ish random d-regular graph: a circulant start followed by many random double-edge swaps.
Graph random_regular_graph(int n, int d, std::uint64_t seed);

}  // namespace ssp
