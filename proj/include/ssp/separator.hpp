#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssp/base.hpp"
#include "ssp/graph.hpp"
#include "ssp/hypergraph.hpp"
#include "ssp/util.hpp"

namespace ssp {

// One orientation per host edge: arcs[id] = (tail, head) for edge id.
struct OrientedGraph {
    int n = 0;
    std::vector<Arc> arcs;
    std::vector<int> out_degree, in_degree;
};

OrientedGraph orient_random(const Graph& g, std::uint64_t seed);

// X_i for every base vertex i, stored transposed as Y_x = {i : x in X_i}.
struct XFamily {
    int n = 0;            // host vertices
    int base_vertices = 0;
    std::vector<Bitset> y;  // y[x] over base vertices
    std::vector<int> x_size;  // |X_i|

    bool contains(int i, int x) const { return y[static_cast<std::size_t>(x)].test(static_cast<std::size_t>(i)); }
    std::vector<int> members(int i) const;
};

XFamily sample_x_family(int n, const BaseThreeGraph& j, double eps, std::uint64_t seed);

// The auxiliary 8-uniform hypergraph, kept implicit. A hyperedge is a pair (arc id, triple id)
// present iff both arc ends lie in X_a for all three triple vertices a. Its eight vertices are
// the arc (as a B-edge), the triple, and the slots (tail,a), (head,a) for a in the triple.
class ImplicitAuxGraph {
public:
    ImplicitAuxGraph(const OrientedGraph& d, const BaseThreeGraph& j, const XFamily& x);

    const OrientedGraph& oriented() const { return *d_; }
    const XFamily& family() const { return *x_; }
    const std::vector<std::array<int, 3>>& triples() const { return triples_; }
    int u1_size() const { return u1_; }
    bool in_u1(int a) const { return a < u1_; }

    bool present(int arc, int triple) const;
    // Vertex ids: arcs [0, m), triples [m, m + T), then tail slots and head slots, each n * |V(J)|.
    std::array<int, 8> vertices(int arc, int triple) const;
    int num_vertices() const;

    // Enumerates every present (arc, triple); only sensible for tiny instances.
    std::vector<std::pair<int, int>> all_edges() const;
    // Triples incident to base vertex a.
    const std::vector<int>& triples_at(int a) const { return by_vertex_[static_cast<std::size_t>(a)]; }

private:
    const OrientedGraph* d_;
    const XFamily* x_;
    std::vector<std::array<int, 3>> triples_;
    std::vector<std::vector<int>> by_vertex_;
    int u1_ = 0;
};

// Number of directed cycles of length 3..r that a family of monochromatic arcs may not close.
// r = floor(1 / eps_prime): a cycle of length > r is at least 1/eps_prime long.
int conflict_cycle_limit(double eps_prime);

// Conflicts F(C, i, ...) for every directed cycle C of D with 3 <= |C| <= r and colour i in U1:
// one hyperedge per arc of C, each with a triple containing i. Lazily answers completion queries
// and enumerates explicitly on tiny instances (hyperedge ids index aux.all_edges()).
class AuxConflictSystem : public ConflictSystem {
public:
    AuxConflictSystem(const ImplicitAuxGraph& aux, double eps_prime);

    int limit() const { return r_; }
    int max_conflict_size() const override { return r_; }
    void for_each_conflict_containing(int edge, const Visitor& visit) const override;
    bool for_each_conflict(const Visitor& visit, std::uint64_t budget) const override;
    bool completes_conflict(int edge, const std::function<bool(int)>& is_chosen) const override;
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Lazy query on a partial matching given as (arc, triple) pairs: does adding the candidate
    // close a directed cycle of length <= r whose arcs all carry a triple containing the same
    // U1 colour as the candidate?
    bool closes_cycle(const std::vector<std::pair<int, int>>& chosen, std::pair<int, int> candidate) const;

private:
    bool enumerate(const Visitor& visit, std::uint64_t budget, int only_edge) const;

    const ImplicitAuxGraph* aux_;
    int r_;
    std::vector<std::pair<int, int>> edges_;
};

struct SeparatorMatchingOptions {
    int restarts = 4;
    double eps_prime = 0.01;
};

// Matching state summaries for the test sets: matched arcs per tail vertex (Z_{x1}), per head
// vertex (Z_{y2}) and matched hyperedges per base vertex (Z_i).
struct TestSetCounters {
    int tail_min = 0, tail_max = 0;
    int head_min = 0, head_max = 0;
    int colour_min = 0, colour_max = 0;
    double tail_mean = 0, head_mean = 0, colour_mean = 0;
};

struct AuxMatching {
    std::vector<std::pair<int, int>> chosen;  // (arc id, triple id)
    std::size_t unmatched_arcs = 0;
    int restart = 0;
    TestSetCounters counters;
};

// Arc-driven randomized greedy: arcs in seeded random order, each takes the first admissible
// triple found from a random colour and a random offset, rejecting candidates that collide with
// used vertices of the 8-graph or close a short monochromatic directed cycle. Restarts run in
// parallel and the largest matching wins (ties: lowest restart index).
AuxMatching match_auxiliary(const ImplicitAuxGraph& aux, const SeparatorMatchingOptions& opts, std::uint64_t seed);

struct SeparatorParams {
    double delta = 0;
    int L = 0;
    double beta = 0;  // t = beta n two-matchings (here lambda of the base construction)
    double eps = 0;   // compactness / endpoint / remainder parameter
};

struct SeparatorCollection {
    int t = 0;
    std::vector<std::vector<int>> q;  // edge ids per two-matching, sorted
    SeparatorParams params;
};

// Q_a collects xy for every matched (x y, ijk) with a in {i,j,k} and a in U1.
// Throws std::logic_error if some Q_a gets a vertex of degree above 2.
SeparatorCollection extract_two_matchings(const Graph& g, const std::vector<std::pair<int, int>>& chosen,
                                          const ImplicitAuxGraph& aux);

struct TwoMatchingShape {
    int paths = 0;
    int cycles = 0;
    int min_cycle = 0;   // 0 without cycles
    int max_degree = 0;
    std::vector<std::vector<int>> cycle_edges;  // edge ids per cycle
};

TwoMatchingShape two_matching_shape(const Graph& g, const std::vector<int>& edge_ids);

struct SeparatorValidateOptions {
    bool check_connectivity = true;
    std::uint64_t samples = 200;  // sampled pairs per two-matching
    std::uint64_t seed = 0;
    int max_checked_members = 8;  // two-matchings sampled for robust connectivity
};

struct SeparatorReport {
    bool degree_ok = true;      // every Q has max degree <= 2
    int max_paths = 0;          // Q1: paths per Q
    int min_cycle = 0;          // Q1: shortest cycle over all Q, 0 without cycles
    int short_cycles = 0;       // cycles shorter than 1/eps
    bool compact_ok = true;
    double min_connectivity = 0;  // smallest sampled count/n^ell among checked Q
    bool connectivity_ok = true;
    bool connectivity_checked = false;
    bool separation_ok = true;  // Q2
    std::uint64_t separation_violations = 0;
    bool size_ok = true;
    int max_endpoints = 0;      // Q3
    bool endpoints_ok = true;
    int max_multiplicity = 0;   // Q4
    bool multiplicity_ok = true;
    int remainder_max_degree = 0;  // Q5
    bool remainder_ok = true;
    std::size_t covered_edges = 0;

    bool structural_ok() const { return degree_ok && separation_ok && multiplicity_ok; }
    bool ok() const {
        return structural_ok() && compact_ok && connectivity_ok && size_ok && endpoints_ok && remainder_ok;
    }
};

// expected_t < 0 skips the size check.
SeparatorReport validate_separator(const Graph& g, const SeparatorCollection& s, const SeparatorValidateOptions& opts = {},
                                   int expected_t = -1);

struct SeparatorBuildOptions {
    int restarts = 4;
    int stage_retries = 5;
    BaseTolerance tolerance{};
    int base_attempts = 50;
    SeparatorValidateOptions validate{};
};

struct SeparatorBuild {
    SeparatorCollection collection;
    SeparatorReport report;
    BaseParams base_params;
    int base_attempts = 0;
    std::size_t aux_matched = 0;
    std::size_t unmatched_arcs = 0;
    TestSetCounters counters;
    int x_min = 0, x_max = 0;           // |X_i| extremes
    int out_min = 0, out_max = 0;       // out-degree extremes of D
};

class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Orient, build the base 3-graph with lambda = beta / (1 - eps), sample X with p = 1 - eps,
// match, extract and validate. Measurements that miss their targets are reported, not fatal.
SeparatorBuild build_separator(const Graph& g, double delta, int L, double eps, double eps_prime, std::uint64_t seed,
                               const SeparatorBuildOptions& opts = {});

nlohmann::json separator_to_json(const Graph& g, const SeparatorCollection& s);
SeparatorCollection separator_from_json(const Graph& g, const nlohmann::json& j);

}  // namespace ssp
