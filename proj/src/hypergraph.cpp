#include "ssp/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ssp/util.hpp"

namespace ssp {

UniformHypergraph::UniformHypergraph(int k, int num_vertices, std::vector<std::vector<int>> edges)
    : k_(k), num_vertices_(num_vertices) {
    if (k < 1) throw std::invalid_argument("uniformity must be positive");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto& e = edges[i];
        std::sort(e.begin(), e.end());
        if (static_cast<int>(e.size()) != k) {
            throw std::invalid_argument("hyperedge " + std::to_string(i) + " has " + std::to_string(e.size()) +
                                        " vertices, expected " + std::to_string(k));
        }
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
            throw std::invalid_argument("hyperedge " + std::to_string(i) + " repeats a vertex");
        }
        if (e.front() < 0 || e.back() >= num_vertices) {
            throw std::invalid_argument("hyperedge " + std::to_string(i) + " has a vertex out of range");
        }
    }
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    for (std::size_t k2 = 1; k2 < order.size(); ++k2) {
        if (edges[order[k2]] == edges[order[k2 - 1]]) {
            throw std::invalid_argument("duplicate hyperedge " + std::to_string(order[k2]));
        }
    }
    edges_ = std::move(edges);
}

namespace {

// Calls f(subset) for every j-subset of the sorted vector `items`.
template <class F>
void for_each_subset(const std::vector<int>& items, int j, F&& f) {
    const int s = static_cast<int>(items.size());
    if (j > s || j < 0) return;
    std::vector<int> idx(static_cast<std::size_t>(j));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> sub(static_cast<std::size_t>(j));
    while (true) {
        for (int t = 0; t < j; ++t) sub[static_cast<std::size_t>(t)] = items[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
        f(sub);
        int pos = j - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == s - j + pos) --pos;
        if (pos < 0) return;
        ++idx[static_cast<std::size_t>(pos)];
        for (int t = pos + 1; t < j; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t) - 1] + 1;
    }
}

double binomial(double n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace

DegreeStats degree_stats(const UniformHypergraph& h, int j, bool exhaustive) {
    if (j < 1 || j > h.k()) throw std::invalid_argument("degree_stats needs 1 <= j <= k");
    std::map<std::vector<int>, long long> counts;
    for (const auto& e : h.edges()) for_each_subset(e, j, [&](const std::vector<int>& s) { ++counts[s]; });
    DegreeStats st;
    if (counts.empty()) return st;
    st.min = counts.begin()->second;
    for (const auto& [s, c] : counts) {
        st.min = std::min(st.min, c);
        st.max = std::max(st.max, c);
    }
    if (exhaustive && static_cast<double>(counts.size()) < binomial(h.num_vertices(), j)) st.min = 0;
    return st;
}

bool ConflictSystem::completes_conflict(int edge, const std::function<bool(int)>& is_chosen) const {
    bool found = false;
    for_each_conflict_containing(edge, [&](std::span<const int> conflict) {
        for (int x : conflict)
            if (x != edge && !is_chosen(x)) return true;
        found = true;
        return false;
    });
    return found;
}

ExplicitConflictSystem::ExplicitConflictSystem(std::size_t num_hyperedges, std::vector<std::vector<int>> conflicts)
    : by_edge_(num_hyperedges) {
    for (std::size_t i = 0; i < conflicts.size(); ++i) {
        auto& c = conflicts[i];
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (int x : c) {
            if (x < 0 || static_cast<std::size_t>(x) >= num_hyperedges) {
                throw std::invalid_argument("conflict " + std::to_string(i) + " references a missing hyperedge");
            }
            by_edge_[static_cast<std::size_t>(x)].push_back(static_cast<int>(i));
        }
        max_size_ = std::max(max_size_, static_cast<int>(c.size()));
    }
    conflicts_ = std::move(conflicts);
}

void ExplicitConflictSystem::for_each_conflict_containing(int edge, const Visitor& visit) const {
    if (edge < 0 || static_cast<std::size_t>(edge) >= by_edge_.size()) return;
    for (int ci : by_edge_[static_cast<std::size_t>(edge)])
        if (!visit(conflicts_[static_cast<std::size_t>(ci)])) return;
}

bool ExplicitConflictSystem::for_each_conflict(const Visitor& visit, std::uint64_t budget) const {
    if (budget != 0 && conflicts_.size() > budget) return false;
    for (const auto& c : conflicts_)
        if (!visit(c)) return false;
    return true;
}

namespace {

MatchingResult greedy_pass(const UniformHypergraph& h, const ConflictSystem& c, const std::vector<TrackedSet>& tracked,
                           std::uint64_t seed, const MatchingOptions& opts) {
    Rng rng(seed);
    std::vector<int> order(h.num_edges());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<char> used(static_cast<std::size_t>(h.num_vertices()), 0);
    std::vector<char> chosen(h.num_edges(), 0);
    MatchingResult res;
    auto is_chosen = [&](int x) { return chosen[static_cast<std::size_t>(x)] != 0; };
    for (int e : order) {
        if (opts.max_iterations != 0 && res.iterations >= opts.max_iterations) {
            res.capped = true;
            break;
        }
        ++res.iterations;
        const auto& verts = h.edge(static_cast<std::size_t>(e));
        bool clash = false;
        for (int v : verts)
            if (used[static_cast<std::size_t>(v)]) clash = true;
        if (clash || c.completes_conflict(e, is_chosen)) continue;
        for (int v : verts) used[static_cast<std::size_t>(v)] = 1;
        chosen[static_cast<std::size_t>(e)] = 1;
    }
    for (std::size_t e = 0; e < chosen.size(); ++e)
        if (chosen[e]) res.chosen.push_back(static_cast<int>(e));
    for (const auto& z : tracked) {
        long long cov = 0;
        for (int x : z.members)
            if (x >= 0 && static_cast<std::size_t>(x) < chosen.size() && chosen[static_cast<std::size_t>(x)]) ++cov;
        res.tracked_coverage.push_back(cov);
    }
    return res;
}

}  // namespace

MatchingResult find_conflict_free_matching(const UniformHypergraph& h, const ConflictSystem& c,
                                           const std::vector<TrackedSet>& tracked, std::uint64_t seed,
                                           const MatchingOptions& opts) {
    const int restarts = std::max(1, opts.restarts);
    std::vector<MatchingResult> runs(static_cast<std::size_t>(restarts));
    parallel_for(runs.size(), [&](std::size_t r) {
        runs[r] = greedy_pass(h, c, tracked, mix_seed(seed, r), opts);
        runs[r].restart = static_cast<int>(r);
    });
    std::size_t best = 0;
    auto total = [&](const MatchingResult& m) {
        return std::accumulate(m.tracked_coverage.begin(), m.tracked_coverage.end(), 0LL);
    };
    for (std::size_t r = 1; r < runs.size(); ++r) {
        long long a = total(runs[r]), b = total(runs[best]);
        if (a > b || (a == b && runs[r].chosen.size() > runs[best].chosen.size())) best = r;
    }
    return runs[best];
}

MatchingCheck check_matching(const UniformHypergraph& h, const ConflictSystem& c, const std::vector<int>& chosen) {
    MatchingCheck chk;
    std::vector<int> owner(static_cast<std::size_t>(h.num_vertices()), -1);
    std::vector<char> in(h.num_edges(), 0);
    for (int e : chosen) {
        in[static_cast<std::size_t>(e)] = 1;
        for (int v : h.edge(static_cast<std::size_t>(e))) {
            if (owner[static_cast<std::size_t>(v)] >= 0 && chk.is_matching) {
                chk.is_matching = false;
                chk.detail = "hyperedges " + std::to_string(owner[static_cast<std::size_t>(v)]) + " and " +
                             std::to_string(e) + " share vertex " + std::to_string(v);
            }
            owner[static_cast<std::size_t>(v)] = e;
        }
    }
    c.for_each_conflict(
        [&](std::span<const int> conflict) {
            for (int x : conflict)
                if (!in[static_cast<std::size_t>(x)]) return true;
            chk.conflict_free = false;
            if (chk.detail.empty()) chk.detail = "a conflict is fully chosen";
            return false;
        },
        0);
    auto is_chosen = [&](int x) { return in[static_cast<std::size_t>(x)] != 0; };
    for (std::size_t e = 0; e < h.num_edges() && chk.maximal; ++e) {
        if (in[e]) continue;
        bool free = true;
        for (int v : h.edge(e))
            if (owner[static_cast<std::size_t>(v)] >= 0) free = false;
        if (free && !c.completes_conflict(static_cast<int>(e), is_chosen)) {
            chk.maximal = false;
            if (chk.detail.empty()) chk.detail = "hyperedge " + std::to_string(e) + " could still be added";
        }
    }
    return chk;
}

ConflictBoundReport check_bounded_conflicts(const UniformHypergraph& h, const ConflictSystem& c, double d, int ell,
                                            double rho, std::uint64_t budget) {
    (void)h;
    ConflictBoundReport rep;
    // by size j: vertex degrees and j'-set degrees
    std::map<int, std::map<int, long long>> deg1;
    std::map<std::pair<int, int>, std::map<std::vector<int>, long long>> degj;
    bool complete = c.for_each_conflict(
        [&](std::span<const int> conflict) {
            ++rep.conflicts_seen;
            int s = static_cast<int>(conflict.size());
            if (s < 3 || s > ell) {
                if (rep.c1) {
                    rep.c1 = false;
                    rep.c1_violation = "conflict of size " + std::to_string(s) + " outside [3, " + std::to_string(ell) + "]";
                }
                return true;
            }
            std::vector<int> members(conflict.begin(), conflict.end());
            for (int x : members) ++deg1[s][x];
            for (int jp = 2; jp < s; ++jp)
                for_each_subset(members, jp, [&](const std::vector<int>& sub) { ++degj[{s, jp}][sub]; });
            return true;
        },
        budget);
    if (!complete) {
        rep.conclusive = false;
        return rep;
    }
    for (const auto& [j, counts] : deg1) {
        long long mx = 0;
        for (const auto& [v, cnt] : counts) mx = std::max(mx, cnt);
        double bound = ell * std::pow(d, j - 1);
        if (static_cast<double>(mx) > bound && rep.c2) {
            rep.c2 = false;
            rep.c2_violation = "Delta_1 of size-" + std::to_string(j) + " conflicts is " + std::to_string(mx) +
                               " > " + std::to_string(bound);
        }
    }
    for (const auto& [key, counts] : degj) {
        auto [j, jp] = key;
        long long mx = 0;
        for (const auto& [sub, cnt] : counts) mx = std::max(mx, cnt);
        double bound = ell * std::pow(d, j - jp - rho);
        if (static_cast<double>(mx) > bound && rep.c3) {
            rep.c3 = false;
            rep.c3_violation = "Delta_" + std::to_string(jp) + " of size-" + std::to_string(j) + " conflicts is " +
                               std::to_string(mx) + " > " + std::to_string(bound);
        }
    }
    return rep;
}

long long count_cycles_containing(int n, const std::vector<Arc>& r, int j) {
    if (n < 0 || n > 9) throw std::invalid_argument("count_cycles_containing enumerates only n <= 9");
    if (j < 1) throw std::invalid_argument("cycle length must be positive");
    if (static_cast<int>(r.size()) >= j) throw std::invalid_argument("needs |r| < j");
    std::set<Arc> need(r.begin(), r.end());
    for (auto [u, v] : need) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("arc endpoint out of range");
        if (u == v) return 0;
    }
    if (j == 1 || j > n) return 0;
    long long count = 0;
    std::vector<int> seq(static_cast<std::size_t>(j));
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    // The smallest vertex of a cycle is placed first, so every directed cycle appears once.
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == j) {
            std::size_t hit = 0;
            for (int t = 0; t < j; ++t) {
                Arc a{seq[static_cast<std::size_t>(t)], seq[static_cast<std::size_t>((t + 1) % j)]};
                if (need.count(a)) ++hit;
            }
            if (hit == need.size()) ++count;
            return;
        }
        for (int v = seq[0] + 1; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = 1;
            seq[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1);
            used[static_cast<std::size_t>(v)] = 0;
        }
    };
    for (int s = 0; s < n; ++s) {
        seq[0] = s;
        used[static_cast<std::size_t>(s)] = 1;
        rec(rec, 1);
        used[static_cast<std::size_t>(s)] = 0;
    }
    return count;
}

double cycle_count_bound(int n, int r_size, int j) {
    return std::pow(static_cast<double>(j), r_size) * std::pow(static_cast<double>(n), j - r_size - 1);
}

}  // namespace ssp
