#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ssp/graph.hpp"
#include "ssp/separator.hpp"

namespace ssp {

struct BreakCyclesResult {
    SeparatorCollection collection;
    std::vector<int> removed;  // one edge id per cycle, sorted
    int removed_max_degree = 0;
    int attempts = 0;
};

// Removes one uniformly random edge from every cycle of every two-matching, redrawing until the
// removed set S has max degree in G[S] at most 4 eps beta n (eps, beta from the collection's
// params). Throws StageFailure("break_cycles") after max_attempts draws.
BreakCyclesResult break_cycles(const Graph& g, const SeparatorCollection& s, std::uint64_t seed, int max_attempts = 50);

// Largest working eps' (times 0.9) meeting eps' <= delta/(4L), eps' <= 1/16,
// eps' <= (delta/(8(1 + 4 L beta)))^2 and 4 L eps' beta + 2 sqrt(eps') < delta/4.
double choose_eps_prime(double delta, int L, double beta);

struct ConnectOptions {
    double eps = 0.1;         // final remainder target, eps n
    double eps_prime = 0.01;  // endpoint budget sqrt(eps') n
    int L = 1;                // connectors have at most L inner vertices
    // Tightness thresholds in vertices; negative values mean eps n and sqrt(eps') n.
    double free_threshold = -1;
    double budget_threshold = -1;
    // Full separation re-check (I1) every this many iterations and after the last one;
    // 0 picks every iteration for small graphs and 16 evenly spaced checks otherwise.
    int full_check_every = 0;
};

// Tightness thresholds fitted to the starting state: the budget threshold sits `slack` vertices
// above max(deg_{G-E_0}(u) + 2 d_0(u)) over vertices with endpoints, the free threshold at least
// as high. Used when eps n and sqrt(eps') n are below the degrees the separator actually leaves.
ConnectOptions calibrate_thresholds(const Graph& g, const SeparatorCollection& s, ConnectOptions base, double slack);

// Working state of the gluing process: the collection C_i, its signatures, the separated set
// E_i, used connecting edges, endpoint debts d_i and degrees in G - E_i.
class ConnectState {
public:
    ConnectState(const Graph& g, const SeparatorCollection& s, const ConnectOptions& opts);

    const Graph& graph() const { return *g_; }
    const std::vector<int>& signature(int e) const { return sig_[static_cast<std::size_t>(e)]; }
    bool in_separated(int e) const { return in_e_[static_cast<std::size_t>(e)] != 0; }
    bool used_connector(int e) const { return used_[static_cast<std::size_t>(e)] != 0; }
    int debt(int u) const { return d_[static_cast<std::size_t>(u)]; }
    int remainder_degree(int u) const { return rem_deg_[static_cast<std::size_t>(u)]; }
    double free_threshold() const { return free_thr_; }
    double budget_threshold() const { return budget_thr_; }
    const std::vector<int>& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
    int num_members() const { return static_cast<int>(members_.size()); }

    // E^f: f plus the edges of Q_i still in E that (C \ {Q_i}) + (Q_i + f) no longer separates from f.
    // Throws std::invalid_argument when f already lies in member i.
    std::vector<int> compute_ef(int f, int i) const;
    bool is_tight(int u) const;
    // Not a used connecting edge, and no endpoint of an E^f edge is tight.
    bool available(int f, int i) const;

    // Test hooks for synthetic states.
    void set_debt(int u, int d) { d_[static_cast<std::size_t>(u)] = d; }
    void set_remainder_degree(int u, int deg) { rem_deg_[static_cast<std::size_t>(u)] = deg; }
    void mark_used(int e) { used_[static_cast<std::size_t>(e)] = 1; }

private:
    friend class Connector;
    const Graph* g_;
    std::vector<std::vector<int>> members_;  // edge ids of C_i members
    std::vector<std::vector<int>> original_; // edge ids of Q_i
    std::vector<std::vector<int>> sig_;
    std::vector<char> in_e_, used_;
    std::vector<int> d_, rem_deg_;
    double free_thr_ = 0, budget_thr_ = 0;
};

// Shortest good (x,y)-path for member i: at most L inner vertices (a direct edge counts as
// zero), inner vertices outside `blocked`, all edges available. Inner vertices are tried in
// lexicographic order. Absent when no such path exists.
std::optional<Path> find_good_path(const ConnectState& st, int x, int y, int i, const std::vector<char>& blocked, int L);

struct ConnectStats {
    int members_glued = 0;        // members turned into a single path
    int fallback_members = 0;     // members left as several paths
    int extra_paths = 0;          // paths beyond one per nonempty member
    std::size_t connectors = 0;
    std::size_t connector_edges = 0;
    std::size_t demoted = 0;      // edges removed from E over all iterations
    std::size_t bookkeeping_separated = 0;  // |E_t|
    bool i1_ok = true, i2_ok = true, i3_ok = true;
    int full_checks = 0;
    int iterations = 0;
};

// Paths of the result plus the honestly recomputed set of edges that the system separates
// from every other edge of G.
struct AlmostSepSystem {
    PathSystem paths;
    std::vector<int> owner;          // member index behind each path
    std::vector<char> separated;     // per edge id
    int remainder_max_degree = 0;    // max degree of G minus the separated edges
    ConnectStats stats;
};

// Glues the paths of each Q_i into one path through good connecting paths, in order i = 1..t,
// maintaining E_i as in the invariants (I1)-(I3). When no good path exists the member keeps its
// remaining fragments as separate paths. Requires acyclic two-matchings.
AlmostSepSystem connect_paths(const Graph& g, const SeparatorCollection& s, const ConnectOptions& opts);

nlohmann::json almost_sep_to_json(const Graph& g, const AlmostSepSystem& a);

}  // namespace ssp
