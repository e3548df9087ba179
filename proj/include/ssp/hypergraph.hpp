#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssp {

// k-uniform hypergraph on vertices 0..num_vertices-1. Hyperedges are stored sorted.
class UniformHypergraph {
public:
    UniformHypergraph() = default;
    // Throws std::invalid_argument unless every edge has exactly k distinct in-range vertices
    // and no edge repeats.
    UniformHypergraph(int k, int num_vertices, std::vector<std::vector<int>> edges);

    int k() const { return k_; }
    int num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<int>& edge(std::size_t i) const { return edges_[i]; }
    const std::vector<std::vector<int>>& edges() const { return edges_; }

private:
    int k_ = 0;
    int num_vertices_ = 0;
    std::vector<std::vector<int>> edges_;
};

struct DegreeStats {
    long long min = 0;  // delta_j
    long long max = 0;  // Delta_j
};

// Min/max number of hyperedges containing a j-set. By default only j-sets lying inside some
// hyperedge are considered; with `exhaustive` every j-subset of the vertex set counts, so the
// minimum drops to 0 as soon as one j-set is uncovered.
DegreeStats degree_stats(const UniformHypergraph& h, int j, bool exhaustive = false);

// A conflict is a set of hyperedge indices; a matching is conflict-free when it contains no
// conflict entirely.
class ConflictSystem {
public:
    using Visitor = std::function<bool(std::span<const int>)>;  // return false to stop

    virtual ~ConflictSystem() = default;
    virtual int max_conflict_size() const = 0;
    // Every conflict containing `edge` (sorted member lists).
    virtual void for_each_conflict_containing(int edge, const Visitor& visit) const = 0;
    // Every conflict exactly once. Returns false when more than `budget` conflicts would be visited
    // (budget 0 = unlimited) or the visitor stopped early.
    virtual bool for_each_conflict(const Visitor& visit, std::uint64_t budget) const = 0;
    // Would adding `edge` to the chosen set make some conflict fully chosen?
    virtual bool completes_conflict(int edge, const std::function<bool(int)>& is_chosen) const;
};

// Conflicts listed explicitly. Sizes are not restricted so that malformed systems can be checked.
class ExplicitConflictSystem : public ConflictSystem {
public:
    ExplicitConflictSystem() = default;
    ExplicitConflictSystem(std::size_t num_hyperedges, std::vector<std::vector<int>> conflicts);

    std::size_t size() const { return conflicts_.size(); }
    int max_conflict_size() const override { return max_size_; }
    void for_each_conflict_containing(int edge, const Visitor& visit) const override;
    bool for_each_conflict(const Visitor& visit, std::uint64_t budget) const override;

private:
    std::vector<std::vector<int>> conflicts_;
    std::vector<std::vector<int>> by_edge_;
    int max_size_ = 0;
};

struct TrackedSet {
    std::string name;
    std::vector<int> members;
};

struct MatchingOptions {
    int restarts = 1;
    std::uint64_t max_iterations = 0;  // per restart, 0 = unlimited
};

struct MatchingResult {
    std::vector<int> chosen;                 // sorted hyperedge indices
    std::vector<long long> tracked_coverage; // |Z ∩ chosen| per tracked set
    std::uint64_t iterations = 0;            // candidates examined in the returned restart
    int restart = 0;                         // index of the returned restart
    bool capped = false;                     // iteration cap stopped the pass early
};

// Randomized greedy: hyperedges in seeded random order, each taken unless it meets a chosen
// vertex or completes a conflict. Restarts use independent sub-seeds and the one with the
// largest total tracked coverage wins, then the largest matching, then the lowest restart index.
MatchingResult find_conflict_free_matching(const UniformHypergraph& h, const ConflictSystem& c,
                                           const std::vector<TrackedSet>& tracked, std::uint64_t seed,
                                           const MatchingOptions& opts = {});

struct MatchingCheck {
    bool is_matching = true;
    bool conflict_free = true;
    bool maximal = true;
    std::string detail;
};

// Post-hoc exhaustive check of a chosen set.
MatchingCheck check_matching(const UniformHypergraph& h, const ConflictSystem& c, const std::vector<int>& chosen);

struct ConflictBoundReport {
    bool conclusive = true;
    bool c1 = true, c2 = true, c3 = true;
    std::string c1_violation, c2_violation, c3_violation;
    std::uint64_t conflicts_seen = 0;
    bool ok() const { return conclusive && c1 && c2 && c3; }
};

// (C1) 3 <= |C| <= ell; (C2) Delta_1(C^(j)) <= ell d^(j-1); (C3) Delta_j'(C^(j)) <= ell d^(j-j'-rho)
// for 3 <= j <= ell and 2 <= j' < j. Exhaustive; more than `budget` conflicts gives an
// inconclusive report.
ConflictBoundReport check_bounded_conflicts(const UniformHypergraph& h, const ConflictSystem& c, double d, int ell,
                                            double rho, std::uint64_t budget = 1000000);

using Arc = std::pair<int, int>;

// Number of directed j-cycles of the complete digraph on n vertices that contain every arc of r,
// by enumeration (cycles counted as subgraphs). Requires |r| < j, 1 <= j, and n <= 9.
long long count_cycles_containing(int n, const std::vector<Arc>& r, int j);

// j^|r| * n^(j - |r| - 1)
double cycle_count_bound(int n, int r_size, int j);

}  // namespace ssp
