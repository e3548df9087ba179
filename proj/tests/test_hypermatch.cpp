#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ssp/hypergraph.hpp"

using namespace ssp;

namespace {

UniformHypergraph random_3graph(int v, int m, std::mt19937_64& rng) {
    std::set<std::vector<int>> seen;
    std::uniform_int_distribution<int> pick(0, v - 1);
    while (static_cast<int>(seen.size()) < m) {
        std::vector<int> e{pick(rng), pick(rng), pick(rng)};
        std::sort(e.begin(), e.end());
        if (e[0] == e[1] || e[1] == e[2]) continue;
        seen.insert(e);
    }
    return UniformHypergraph(3, v, {seen.begin(), seen.end()});
}

// Ordered sequences of distinct vertices, each cycle counted j times.
long long cycles_by_sequences(int n, const std::vector<Arc>& r, int j) {
    if (j < 2) return 0;
    long long total = 0;
    std::vector<int> seq(static_cast<std::size_t>(j), 0);
    while (true) {
        std::set<int> d(seq.begin(), seq.end());
        if (static_cast<int>(d.size()) == j) {
            std::set<Arc> arcs;
            for (int t = 0; t < j; ++t) arcs.insert({seq[static_cast<std::size_t>(t)], seq[static_cast<std::size_t>((t + 1) % j)]});
            bool all = true;
            for (auto a : r)
                if (!arcs.count(a)) all = false;
            if (all) ++total;
        }
        int pos = j - 1;
        while (pos >= 0 && ++seq[static_cast<std::size_t>(pos)] == n) seq[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return total / j;
}

}  // namespace

TEST_SUITE("hypermatch") {

TEST_CASE("hypergraph validation") {
    CHECK_THROWS_AS(UniformHypergraph(3, 5, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(UniformHypergraph(3, 5, {{0, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(UniformHypergraph(3, 5, {{0, 1, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(UniformHypergraph(3, 5, {{0, 1, 2}, {2, 1, 0}}), std::invalid_argument);
    UniformHypergraph h(3, 5, {{4, 1, 2}});
    CHECK(h.edge(0) == std::vector<int>{1, 2, 4});
}

TEST_CASE("degree statistics") {
    UniformHypergraph disjoint(3, 6, {{0, 1, 2}, {3, 4, 5}});
    auto s1 = degree_stats(disjoint, 1);
    CHECK(s1.min == 1);
    CHECK(s1.max == 1);
    UniformHypergraph shared(3, 4, {{0, 1, 2}, {0, 1, 3}});
    CHECK(degree_stats(shared, 2).max == 2);
    CHECK(degree_stats(shared, 2).min == 1);
    CHECK(degree_stats(shared, 2, true).min == 0);  // {2,3} lies in no edge
    CHECK(degree_stats(shared, 3, true).min == 0);
    CHECK_THROWS(degree_stats(shared, 0));
    CHECK_THROWS(degree_stats(shared, 4));

    std::mt19937_64 rng(9);
    auto h = random_3graph(25, 120, rng);
    std::vector<long long> deg(25, 0);
    for (const auto& e : h.edges())
        for (int v : e) ++deg[static_cast<std::size_t>(v)];
    long long mx = *std::max_element(deg.begin(), deg.end());
    long long mn = mx;
    for (auto d : deg)
        if (d > 0) mn = std::min(mn, d);
    CHECK(degree_stats(h, 1).max == mx);
    CHECK(degree_stats(h, 1).min == mn);
}

TEST_CASE("greedy matching examples") {
    ExplicitConflictSystem none(2, {});
    UniformHypergraph two(3, 6, {{0, 1, 2}, {3, 4, 5}});
    CHECK(find_conflict_free_matching(two, none, {}, 1).chosen.size() == 2);

    UniformHypergraph three(3, 9, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
    ExplicitConflictSystem one(3, {{0, 1, 2}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(find_conflict_free_matching(three, one, {}, seed).chosen.size() == 2);

    UniformHypergraph touching(3, 5, {{0, 1, 2}, {2, 3, 4}});
    CHECK(find_conflict_free_matching(touching, none, {}, 4).chosen.size() == 1);
}

TEST_CASE("random matchings are valid, conflict-free, maximal and deterministic") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        auto h = random_3graph(30, 80, rng);
        std::vector<std::vector<int>> conflicts;
        std::uniform_int_distribution<int> pick(0, 79);
        for (int c = 0; c < 40; ++c) conflicts.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
        ExplicitConflictSystem cs(h.num_edges(), conflicts);
        std::vector<TrackedSet> tracked{{"first-half", {}}};
        for (int e = 0; e < 40; ++e) tracked[0].members.push_back(e);
        MatchingOptions opts;
        opts.restarts = 3;
        auto a = find_conflict_free_matching(h, cs, tracked, 77 + static_cast<std::uint64_t>(trial), opts);
        auto b = find_conflict_free_matching(h, cs, tracked, 77 + static_cast<std::uint64_t>(trial), opts);
        CHECK(a.chosen == b.chosen);
        CHECK(a.restart == b.restart);
        auto chk = check_matching(h, cs, a.chosen);
        CHECK(chk.is_matching);
        CHECK(chk.conflict_free);
        CHECK(chk.maximal);
        long long cov = 0;
        for (int e : a.chosen)
            if (e < 40) ++cov;
        CHECK(a.tracked_coverage[0] == cov);
    }
}

TEST_CASE("iteration cap stops early") {
    UniformHypergraph two(3, 6, {{0, 1, 2}, {3, 4, 5}});
    ExplicitConflictSystem none(2, {});
    MatchingOptions opts;
    opts.max_iterations = 1;
    auto r = find_conflict_free_matching(two, none, {}, 1, opts);
    CHECK(r.capped);
    CHECK(r.chosen.size() == 1);
}

TEST_CASE("bounded conflict checks") {
    UniformHypergraph h(3, 12, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}});
    ExplicitConflictSystem empty(4, {});
    CHECK(check_bounded_conflicts(h, empty, 2.0, 4, 0.1).ok());
    ExplicitConflictSystem small(4, {{0, 1}});
    auto r = check_bounded_conflicts(h, small, 2.0, 4, 0.1);
    CHECK_FALSE(r.c1);
    CHECK_FALSE(r.ok());
    ExplicitConflictSystem dense(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    auto rd = check_bounded_conflicts(h, dense, 1.0, 3, 0.1);
    CHECK(rd.ok());  // vertex degree 3 <= 3, pair degree 2 <= 3
    UniformHypergraph six(3, 18, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}, {12, 13, 14}, {15, 16, 17}});
    ExplicitConflictSystem fan(6, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}});
    auto rf = check_bounded_conflicts(six, fan, 1.2, 3, 0.5);
    CHECK(rf.c2);        // Delta_1 = 4 <= 3 * 1.44
    CHECK_FALSE(rf.c3);  // pair {0,1} has degree 4 > 3 * 1.2^0.5
    auto budget = check_bounded_conflicts(h, dense, 1.0, 3, 0.1, 2);
    CHECK_FALSE(budget.conclusive);
}

TEST_CASE("cycle counting") {
    CHECK(count_cycles_containing(4, {{0, 1}}, 3) == 2);
    CHECK(count_cycles_containing(4, {{0, 1}, {1, 0}}, 3) == 0);
    CHECK_THROWS(count_cycles_containing(4, {{0, 1}, {1, 2}}, 2));
    CHECK_THROWS(count_cycles_containing(10, {}, 3));
    for (int n = 1; n <= 6; ++n)
        for (int j = 1; j <= 5; ++j) {
            CHECK(count_cycles_containing(n, {}, j) == cycles_by_sequences(n, {}, j));
            if (j > 1 && n >= 2) CHECK(count_cycles_containing(n, {{0, 1}}, j) == cycles_by_sequences(n, {{0, 1}}, j));
            if (j > 2 && n >= 3)
                CHECK(count_cycles_containing(n, {{0, 1}, {2, 0}}, j) == cycles_by_sequences(n, {{0, 1}, {2, 0}}, j));
        }
}

TEST_CASE("cycle bound holds for nonempty arc sets") {
    for (int n = 2; n <= 6; ++n) {
        std::vector<Arc> arcs;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v) arcs.push_back({u, v});
        for (int j = 2; j <= 5; ++j)
            for (std::size_t a = 0; a < arcs.size(); ++a) {
                CHECK(count_cycles_containing(n, {arcs[a]}, j) <= cycle_count_bound(n, 1, j));
                if (j > 2)
                    for (std::size_t b = a + 1; b < arcs.size(); ++b)
                        CHECK(count_cycles_containing(n, {arcs[a], arcs[b]}, j) <= cycle_count_bound(n, 2, j));
            }
    }
}

TEST_CASE("cycle bound fails without any prescribed arc") {
    // Four vertices carry six directed 2-cycles, more than 2^0 * 4^1.
    CHECK(count_cycles_containing(4, {}, 2) == 6);
    CHECK(count_cycles_containing(4, {}, 2) > cycle_count_bound(4, 0, 2));
    CHECK(count_cycles_containing(7, {}, 3) == 70);
    CHECK(count_cycles_containing(7, {}, 3) > cycle_count_bound(7, 0, 3));
}

}
