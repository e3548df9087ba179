#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ssp/base.hpp"

using namespace ssp;

TEST_SUITE("baseconstruct") {

TEST_CASE("derived parameters") {
    auto bp = make_base_params(2000, 0.5, (std::sqrt(2.5) - 1.0) / 0.9);
    CHECK(bp.beta == doctest::Approx(std::sqrt(2.5) - 1.0));
    CHECK(bp.d2 + bp.d3 == doctest::Approx(bp.beta * 2000 / bp.lambda).epsilon(1e-12));
    CHECK(bp.p == doctest::Approx(0.81));
    CHECK(bp.u1 == 1291);
    CHECK(bp.u2 == 375);
    // 3 alpha = 2 beta + beta^2
    CHECK(3 * bp.alpha == doctest::Approx(2 * bp.beta + bp.beta * bp.beta));

    auto full = make_base_params(100, 1.0, 1.1);
    CHECK(full.beta == doctest::Approx(1.0));
    CHECK(full.d3 == 0.0);
    CHECK(full.q == 0.0);

    CHECK_THROWS_AS(make_base_params(100, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(make_base_params(100, 0.5, 0.3), std::domain_error);
    CHECK_THROWS_AS(make_base_params(30, 0.5, 0.62), std::domain_error);  // q > 1 at tiny n
}

TEST_CASE("sampling is deterministic and structurally sound") {
    auto bp = make_base_params(300, 0.5, (std::sqrt(2.5) - 1.0) / 0.9);
    auto a = sample_base(bp, 17);
    auto b = sample_base(bp, 17);
    CHECK(a.j1 == b.j1);
    CHECK(a.j2 == b.j2);
    CHECK(a.num_edges() == a.i2_edges + a.i3_edges);
    for (const auto& t : a.j2) {
        int outside = 0;
        for (int v : t) outside += v >= a.u1_size;
        CHECK(outside == 1);
    }
    for (const auto& t : a.j1)
        for (int v : t) CHECK(v < a.u1_size);
    auto rep = validate_base(a, bp);
    CHECK(rep.get("J1").ok);
    CHECK(rep.get("J2").ok);
    CHECK(rep.get("J3").ok);
}

TEST_CASE("validator degree counts match a direct recount") {
    auto bp = make_base_params(200, 0.5, (std::sqrt(2.5) - 1.0) / 0.8);
    auto j = sample_base(bp, 3);
    std::map<int, long long> deg;
    for (const auto& t : j.triples())
        for (int v : t) ++deg[v];
    long long lo = 1 << 30, hi = 0;
    for (int v = 0; v < j.num_vertices(); ++v) {
        lo = std::min(lo, deg[v]);
        hi = std::max(hi, deg[v]);
    }
    auto rep = validate_base(j, bp, BaseTolerance{1e9});
    CHECK(rep.get("J6").measured_min == lo);
    CHECK(rep.get("J6").measured_max == hi);
    CHECK(rep.get("J5").measured_max == static_cast<double>(j.num_edges()));
    std::map<std::pair<int, int>, int> codeg;
    for (const auto& t : j.triples())
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) ++codeg[{t[a], t[b]}];
    int mx = 0;
    for (auto& [k, c] : codeg) mx = std::max(mx, c);
    CHECK(rep.get("J4").measured_max == mx);
}

TEST_CASE("planted violations are caught") {
    auto bp = make_base_params(300, 0.5, (std::sqrt(2.5) - 1.0) / 0.9);
    auto j = sample_base(bp, 5);
    REQUIRE(!j.j2.empty());
    auto bad = j;
    auto t = bad.j2.front();
    int z = 0;
    while (z == t[0] || z == t[1]) ++z;
    std::array<int, 3> clash{t[0], t[1], z};
    std::sort(clash.begin(), clash.end());
    bad.j1.push_back(clash);
    CHECK_FALSE(validate_base(bad, bp).get("J3").ok);

    auto isolated = j;
    int last = j.num_vertices() - 1;
    std::erase_if(isolated.j2, [&](const std::array<int, 3>& e) { return e[2] == last; });
    auto rep = validate_base(isolated, bp, BaseTolerance{0.5});
    CHECK_FALSE(rep.get("J6").ok);
    CHECK(rep.get("J6").measured_min == 0);
}

TEST_CASE("build_base at n=2000 for alpha=1, lambda=1.1") {
    auto out = build_base(2000, 1.0, 1.1, 7);
    CHECK(out.report.ok());
    CHECK(out.attempts >= 1);
    CHECK(out.graph.j1.empty());
}

TEST_CASE("build_base fails loudly when no draw validates") {
    CHECK_THROWS_AS(build_base(300, 0.5, (std::sqrt(2.5) - 1.0) / 0.9, 1, BaseTolerance{1e-6}, 3), BaseConstructionError);
}

TEST_CASE("dump format") {
    BaseThreeGraph j;
    j.u1_size = 3;
    j.u2_size = 1;
    j.j1 = {{0, 1, 2}};
    j.j2 = {{0, 1, 3}};
    std::ostringstream os;
    write_base(os, j);
    CHECK(os.str() == "# U1 3 U2 1\n0 1 2\n0 1 3\n");
}

}
