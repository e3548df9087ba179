#include <doctest.h>

#include <algorithm>
#include <set>

#include "ssp/refine.hpp"
#include "ssp/separation.hpp"

using namespace ssp;

namespace {

// Signatures rebuilt from member edge lists with f appended to member i.
std::vector<std::set<int>> signatures_with(const Graph& g, const ConnectState& st, int f, int i) {
    std::vector<std::set<int>> sig(g.m());
    for (int a = 0; a < st.num_members(); ++a)
        for (int e : st.member(a)) sig[static_cast<std::size_t>(e)].insert(a);
    sig[static_cast<std::size_t>(f)].insert(i);
    return sig;
}

SeparatorCollection small_collection(const Graph& g, std::vector<std::vector<Edge>> members) {
    SeparatorCollection s;
    s.t = static_cast<int>(members.size());
    for (const auto& m : members) {
        std::vector<int> ids;
        for (auto e : m) ids.push_back(g.edge_id(e.u, e.v));
        std::sort(ids.begin(), ids.end());
        s.q.push_back(ids);
    }
    s.params = {1.0, 1, 1.0, 0.1};
    return s;
}

}  // namespace

TEST_SUITE("refine") {

TEST_CASE("break_cycles removes one edge per cycle") {
    std::vector<Edge> ring;
    for (int v = 0; v < 12; ++v) ring.push_back(make_edge(v, (v + 1) % 12));
    Graph g(12, ring);
    auto s = small_collection(g, {ring, {{0, 1}, {2, 3}}});
    auto r = break_cycles(g, s, 7);
    REQUIRE(r.removed.size() == 1);
    CHECK(r.collection.q[0].size() == 11);
    CHECK(r.collection.q[1] == s.q[1]);
    CHECK(two_matching_shape(g, r.collection.q[0]).cycles == 0);
    CHECK(r.removed_max_degree == 1);
    CHECK(r.attempts == 1);
    CHECK(break_cycles(g, s, 7).removed == r.removed);

    auto acyclic = small_collection(g, {{{0, 1}, {1, 2}}});
    auto same = break_cycles(g, acyclic, 1);
    CHECK(same.removed.empty());
    CHECK(same.collection.q == acyclic.q);

    s.params.eps = 0.001;  // 4 eps beta n < 1: any removal breaks the degree bound
    CHECK_THROWS_AS(break_cycles(g, s, 7), StageFailure);
}

TEST_CASE("E^f matches the containment definition and has at most four edges") {
    auto g = complete_graph(30);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto b = build_separator(g, 1.0, 1, 0.3, 0.05, seed);
        auto s = break_cycles(g, b.collection, seed).collection;
        ConnectState st(g, s, {});
        Rng rng(seed);
        std::uniform_int_distribution<int> pick_e(0, static_cast<int>(g.m()) - 1);
        std::uniform_int_distribution<int> pick_i(0, s.t - 1);
        int checked = 0;
        for (int trial = 0; trial < 400; ++trial) {
            int f = pick_e(rng), i = pick_i(rng);
            const auto& sf = st.signature(f);
            if (std::find(sf.begin(), sf.end(), i) != sf.end() || sf.size() > 3) continue;
            auto ef = st.compute_ef(f, i);
            auto sig = signatures_with(g, st, f, i);
            std::set<int> want{f};
            for (int e : s.q[static_cast<std::size_t>(i)]) {
                if (!st.in_separated(e)) continue;
                const auto& se = sig[static_cast<std::size_t>(e)];
                const auto& sfi = sig[static_cast<std::size_t>(f)];
                if (std::includes(sfi.begin(), sfi.end(), se.begin(), se.end())) want.insert(e);
            }
            CHECK(std::set<int>(ef.begin(), ef.end()) == want);
            CHECK(ef.size() <= 4);
            ++checked;
        }
        CHECK(checked > 100);
        int inside = s.q[0].front();
        CHECK_THROWS_AS(st.compute_ef(inside, 0), std::invalid_argument);
    }
}

TEST_CASE("tightness thresholds") {
    Graph g = complete_graph(6);
    auto s = small_collection(g, {{{0, 1}}});
    ConnectOptions o;
    o.free_threshold = 10;
    o.budget_threshold = 20;
    ConnectState st(g, s, o);
    st.set_debt(2, 0);
    st.set_remainder_degree(2, 8);
    CHECK_FALSE(st.is_tight(2));
    st.set_remainder_degree(2, 9);
    CHECK(st.is_tight(2));
    st.set_debt(3, 3);
    st.set_remainder_degree(3, 12);  // 20 - 2*3 - 2 = 12
    CHECK_FALSE(st.is_tight(3));
    st.set_remainder_degree(3, 13);
    CHECK(st.is_tight(3));
    st.set_debt(3, 4);
    st.set_remainder_degree(3, 11);  // the allowance shrinks by 2 per endpoint
    CHECK(st.is_tight(3));

    ConnectOptions d;
    d.eps = 0.5;
    d.eps_prime = 0.25;
    ConnectState sd(g, s, d);
    CHECK(sd.free_threshold() == doctest::Approx(3.0));
    CHECK(sd.budget_threshold() == doctest::Approx(3.0));
}

TEST_CASE("good paths on a 10-vertex fixture") {
    Graph g(10, {{0, 1}, {2, 3}, {1, 4}, {2, 4}, {1, 5}, {2, 5}, {1, 6}, {6, 7}, {2, 7}, {8, 9}});
    auto s = small_collection(g, {{{0, 1}, {2, 3}}});
    ConnectOptions o;
    o.free_threshold = o.budget_threshold = 100;
    ConnectState st(g, s, o);
    std::vector<char> blocked(10, 0);
    for (int v : {0, 1, 2, 3}) blocked[static_cast<std::size_t>(v)] = 1;

    CHECK_FALSE(find_good_path(st, 1, 2, 0, blocked, 0).has_value());
    auto p = find_good_path(st, 1, 2, 0, blocked, 1);
    REQUIRE(p);
    CHECK(p->vertices == std::vector<int>{1, 4, 2});
    st.mark_used(g.edge_id(2, 4));
    CHECK(find_good_path(st, 1, 2, 0, blocked, 1)->vertices == std::vector<int>{1, 5, 2});
    st.set_debt(5, 0);
    st.set_remainder_degree(5, 99);  // tight: edges at 5 become unavailable
    CHECK_FALSE(find_good_path(st, 1, 2, 0, blocked, 1).has_value());
    CHECK(find_good_path(st, 1, 2, 0, blocked, 2)->vertices == std::vector<int>{1, 6, 7, 2});
    blocked[6] = 1;
    CHECK_FALSE(find_good_path(st, 1, 2, 0, blocked, 3).has_value());
    CHECK_FALSE(find_good_path(st, 0, 3, 0, blocked, 3).has_value());
}

TEST_CASE("connect_paths on K60 keeps the invariants") {
    auto g = complete_graph(60);
    auto b = build_separator(g, 1.0, 1, 0.1, 0.0005, 3);
    auto s = break_cycles(g, b.collection, 3).collection;
    ConnectOptions base;
    base.eps = 0.1;
    base.eps_prime = 0.0005;
    auto o = calibrate_thresholds(g, s, base, 5);
    auto a = connect_paths(g, s, o);
    CHECK(a.stats.i1_ok);
    CHECK(a.stats.i2_ok);
    CHECK(a.stats.i3_ok);
    CHECK(a.stats.full_checks == a.stats.iterations);
    CHECK(validate_path_system(g, a.paths).ok);
    CHECK(a.separated == separated_edges(g, a.paths));
    CHECK(a.owner.size() == a.paths.size());

    // every Q_i lies inside the paths of member i, and connectors add at most L inner vertices each
    auto lists = path_edge_lists(g, a.paths);
    std::vector<std::set<int>> by_member(static_cast<std::size_t>(s.t));
    for (std::size_t k = 0; k < lists.size(); ++k)
        by_member[static_cast<std::size_t>(a.owner[k])].insert(lists[k].begin(), lists[k].end());
    std::size_t added = 0;
    for (int i = 0; i < s.t; ++i) {
        const auto& have = by_member[static_cast<std::size_t>(i)];
        for (int e : s.q[static_cast<std::size_t>(i)]) CHECK(have.count(e) == 1);
        added += have.size() - s.q[static_cast<std::size_t>(i)].size();
    }
    CHECK(added == a.stats.connector_edges);
    CHECK(a.stats.connector_edges <= 2 * a.stats.connectors);
    std::size_t bookkept = 0;
    for (char c : a.separated) bookkept += c ? 1u : 0u;
    CHECK(bookkept >= a.stats.bookkeeping_separated);
    MESSAGE("paths " << a.paths.size() << " separated " << bookkept << "/" << g.m() << " remainder degree "
                     << a.remainder_max_degree);

    auto again = connect_paths(g, s, o);
    CHECK(again.paths == a.paths);
    auto j = almost_sep_to_json(g, a);
    CHECK(j["separated"].size() == bookkept);
    CHECK(j["paths"].size() == a.paths.size());
}

TEST_CASE("connect_paths falls back to separate fragments") {
    // two fragments with no connecting path at all
    Graph g(6, {{0, 1}, {2, 3}, {4, 5}});
    auto s = small_collection(g, {{{0, 1}, {2, 3}}, {{2, 3}, {4, 5}}});
    auto a = connect_paths(g, s, {});
    CHECK(a.paths.size() == 4);
    CHECK(a.stats.fallback_members == 2);
    CHECK(a.stats.extra_paths == 2);
    CHECK(validate_path_system(g, a.paths).ok);
    CHECK(a.stats.i1_ok);

    std::vector<Edge> ring{{0, 1}, {1, 2}, {0, 2}};
    Graph tri(3, ring);
    CHECK_THROWS_AS(connect_paths(tri, small_collection(tri, {ring}), {}), std::invalid_argument);
}

TEST_CASE("working eps' choice") {
    for (double delta : {1.0, 0.5, 0.2, 0.05})
        for (int L : {1, 2, 3})
            for (double beta : {0.5, 1.0, 1.2}) {
                double e = choose_eps_prime(delta, L, beta);
                CHECK(e > 0);
                CHECK(e <= delta / (4.0 * L));
                CHECK(e <= 1.0 / 16.0);
                CHECK(e <= std::pow(delta / (8.0 * (1.0 + 4.0 * L * beta)), 2.0));
                CHECK(4.0 * L * e * beta + 2.0 * std::sqrt(e) < delta / 4.0);
            }
    CHECK_THROWS_AS(choose_eps_prime(0.0, 1, 1.0), std::domain_error);
}

}
