#include "ssp/base.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "ssp/util.hpp"

namespace ssp {

BaseParams make_base_params(long long n, double alpha, double lambda) {
    if (n < 1) throw std::domain_error("n must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0,1]");
    BaseParams bp;
    bp.n = n;
    bp.alpha = alpha;
    bp.lambda = lambda;
    bp.beta = std::sqrt(3.0 * alpha + 1.0) - 1.0;
    if (!(bp.beta < lambda)) {
        throw std::domain_error("base construction needs beta < lambda (beta=" + std::to_string(bp.beta) +
                                ", lambda=" + std::to_string(lambda) + ")");
    }
    const double nd = static_cast<double>(n);
    bp.d2 = bp.beta * bp.beta * nd / lambda;
    // alpha - beta^2 can dip below zero by rounding when alpha = 1.
    const double rest = std::max(0.0, alpha - bp.beta * bp.beta);
    bp.d3 = 3.0 * rest * nd / (2.0 * lambda);
    bp.p = bp.beta * bp.beta / (lambda * lambda);
    if (!(bp.p > 0.0 && bp.p < 1.0)) throw std::domain_error("pair probability p must lie in (0,1)");
    bp.q = 3.0 * rest / (std::pow(1.0 - bp.p, 3) * lambda * lambda * lambda * nd);
    if (bp.q > 1.0) {
        throw std::domain_error("triangle probability q = " + std::to_string(bp.q) + " exceeds 1; n is too small for lambda");
    }
    bp.u1 = static_cast<int>(std::floor(lambda * nd));
    bp.u2 = static_cast<int>(std::floor(lambda * nd * bp.beta / 2.0));
    if (bp.u1 < 3 || bp.u2 < 1) throw std::domain_error("base vertex classes are too small");
    return bp;
}

std::vector<std::array<int, 3>> BaseThreeGraph::triples() const {
    std::vector<std::array<int, 3>> out = j1;
    out.insert(out.end(), j2.begin(), j2.end());
    return out;
}

UniformHypergraph BaseThreeGraph::to_hypergraph() const {
    std::vector<std::vector<int>> edges;
    for (const auto& t : triples()) edges.push_back({t[0], t[1], t[2]});
    return UniformHypergraph(3, num_vertices(), std::move(edges));
}

bool BaseReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.ok; });
}

const PropertyCheck& BaseReport::get(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

BaseThreeGraph sample_base(const BaseParams& bp, std::uint64_t seed) {
    Rng rng(seed);
    BaseThreeGraph j;
    j.u1_size = bp.u1;
    j.u2_size = bp.u2;
    const auto u1 = static_cast<std::size_t>(bp.u1);

    std::bernoulli_distribution pair_coin(bp.p);
    std::vector<Bitset> comp(u1, Bitset(u1));
    for (auto& b : comp) b.set_all();
    std::vector<std::pair<int, int>> i2;
    for (std::size_t x = 0; x < u1; ++x) {
        comp[x].reset(x);
        for (std::size_t y = x + 1; y < u1; ++y) {
            if (pair_coin(rng)) {
                i2.emplace_back(static_cast<int>(x), static_cast<int>(y));
                comp[x].reset(y);
                comp[y].reset(x);
            }
        }
    }

    if (bp.q > 0.0) {
        std::bernoulli_distribution tri_coin(bp.q);
        Bitset common(u1);
        for (std::size_t x = 0; x < u1; ++x) {
            comp[x].for_each([&](std::size_t y) {
                if (y <= x) return;
                common = comp[x];
                common &= comp[y];
                common.for_each([&](std::size_t z) {
                    if (z > y && tri_coin(rng)) {
                        j.j1.push_back({static_cast<int>(x), static_cast<int>(y), static_cast<int>(z)});
                    }
                });
            });
        }
    }

    std::uniform_int_distribution<int> part(0, bp.u2 - 1);
    for (auto [x, y] : i2) j.j2.push_back({x, y, bp.u1 + part(rng)});
    j.i2_edges = i2.size();
    j.i3_edges = j.j1.size();
    return j;
}

namespace {

PropertyCheck named(const std::string& name) {
    PropertyCheck c;
    c.name = name;
    return c;
}

}  // namespace

BaseReport validate_base(const BaseThreeGraph& j, const BaseParams& bp, const BaseTolerance& tol) {
    BaseReport rep;
    const double nd = static_cast<double>(bp.n);
    const double slack = tol.multiplier * std::pow(nd, 2.0 / 3.0);
    const double codeg_slack = tol.multiplier * std::pow(std::log(nd), 2.0);
    const int u1 = j.u1_size;
    const int nv = j.num_vertices();

    PropertyCheck j1c = named("J1");
    j1c.measured_min = u1;
    j1c.measured_max = j.u2_size;
    j1c.ok = u1 == bp.u1 && j.u2_size == bp.u2;
    if (!j1c.ok) {
        j1c.detail = "partition sizes " + std::to_string(u1) + "/" + std::to_string(j.u2_size) + " expected " +
                     std::to_string(bp.u1) + "/" + std::to_string(bp.u2);
    }

    PropertyCheck j2c = named("J2");
    auto in_u1 = [&](int v) { return v >= 0 && v < u1; };
    auto in_u2 = [&](int v) { return v >= u1 && v < nv; };
    auto distinct = [](const std::array<int, 3>& t) { return t[0] != t[1] && t[1] != t[2] && t[0] != t[2]; };
    for (const auto& t : j.j1) {
        if (!distinct(t) || !in_u1(t[0]) || !in_u1(t[1]) || !in_u1(t[2])) {
            j2c.ok = false;
            j2c.detail = "J1 triple outside U1";
            break;
        }
    }
    for (const auto& t : j.j2) {
        if (!j2c.ok) break;
        int inside = static_cast<int>(in_u1(t[0])) + static_cast<int>(in_u1(t[1])) + static_cast<int>(in_u1(t[2]));
        int outside = static_cast<int>(in_u2(t[0])) + static_cast<int>(in_u2(t[1])) + static_cast<int>(in_u2(t[2]));
        if (!distinct(t) || inside != 2 || outside != 1) {
            j2c.ok = false;
            j2c.detail = "J2 triple without exactly two U1 vertices";
        }
    }

    // Pair degrees inside U1, split by edge class; pair degrees between U1 and U2.
    const auto su1 = static_cast<std::size_t>(std::max(u1, 0));
    const auto su2 = static_cast<std::size_t>(std::max(j.u2_size, 0));
    std::vector<std::uint16_t> in_j1(su1 * su1, 0), in_j2(su1 * su1, 0), cross(su1 * su2, 0);
    auto bump = [](std::uint16_t& c) {
        if (c < 65535) ++c;
    };
    std::vector<long long> deg(static_cast<std::size_t>(std::max(nv, 0)), 0), deg2(su1, 0), deg3(su1, 0);
    if (j2c.ok) {
        for (const auto& t : j.j1) {
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) bump(in_j1[static_cast<std::size_t>(t[a]) * su1 + static_cast<std::size_t>(t[b])]);
            for (int v : t) {
                ++deg[static_cast<std::size_t>(v)];
                ++deg3[static_cast<std::size_t>(v)];
            }
        }
        for (const auto& t : j.j2) {
            // sorted: t[0], t[1] in U1, t[2] in U2
            bump(in_j2[static_cast<std::size_t>(t[0]) * su1 + static_cast<std::size_t>(t[1])]);
            bump(cross[static_cast<std::size_t>(t[0]) * su2 + static_cast<std::size_t>(t[2] - u1)]);
            bump(cross[static_cast<std::size_t>(t[1]) * su2 + static_cast<std::size_t>(t[2] - u1)]);
            for (int v : t) ++deg[static_cast<std::size_t>(v)];
            ++deg2[static_cast<std::size_t>(t[0])];
            ++deg2[static_cast<std::size_t>(t[1])];
        }
    }

    PropertyCheck j3c = named("J3");
    PropertyCheck j4c = named("J4");
    j4c.target = 0;
    j4c.slack = codeg_slack;
    long long max_codeg = 0;
    long long clashes = 0;
    for (std::size_t x = 0; x < su1; ++x)
        for (std::size_t y = x + 1; y < su1; ++y) {
            auto a = in_j1[x * su1 + y], b = in_j2[x * su1 + y];
            if (b > 1 || (b == 1 && a > 0)) {
                if (clashes == 0) {
                    j3c.detail = "pair " + std::to_string(x) + " " + std::to_string(y) + " lies in " + std::to_string(a) +
                                 " J1 and " + std::to_string(b) + " J2 edges";
                }
                ++clashes;
            }
            max_codeg = std::max<long long>(max_codeg, a + b);
        }
    for (auto c : cross) max_codeg = std::max<long long>(max_codeg, c);
    j3c.ok = j2c.ok && clashes == 0;
    j3c.measured_max = static_cast<double>(clashes);
    j4c.measured_max = static_cast<double>(max_codeg);
    j4c.ok = j2c.ok && static_cast<double>(max_codeg) <= codeg_slack;

    PropertyCheck j5c = named("J5");
    j5c.target = bp.alpha * nd * (nd - 1.0) / 2.0;
    j5c.slack = slack;
    j5c.measured_min = j5c.measured_max = static_cast<double>(j.num_edges());
    j5c.ok = std::abs(j5c.measured_max - j5c.target) <= slack;

    auto range_check = [&](const std::string& name, const std::vector<long long>& values, double target) {
        PropertyCheck c = named(name);
        c.target = target;
        c.slack = slack;
        if (values.empty()) {
            c.ok = false;
            c.detail = "no vertices";
            return c;
        }
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        c.measured_min = static_cast<double>(*lo);
        c.measured_max = static_cast<double>(*hi);
        c.ok = j2c.ok && c.measured_min >= target - slack && c.measured_max <= target + slack;
        return c;
    };
    PropertyCheck j6c = range_check("J6", deg, bp.beta * nd / bp.lambda);
    PropertyCheck f1c = range_check("F1", deg2, bp.d2);
    PropertyCheck f2c = range_check("F2", deg3, bp.d3);

    rep.checks = {j1c, j2c, j3c, j4c, j5c, j6c, f1c, f2c};
    return rep;
}

BaseBuild build_base(long long n, double alpha, double lambda, std::uint64_t seed, const BaseTolerance& tol,
                     int max_attempts) {
    BaseBuild out;
    out.params = make_base_params(n, alpha, lambda);
    for (int a = 0; a < max_attempts; ++a) {
        out.graph = sample_base(out.params, mix_seed(seed, static_cast<std::uint64_t>(a)));
        out.report = validate_base(out.graph, out.params, tol);
        out.attempts = a + 1;
        if (out.report.ok()) return out;
    }
    throw BaseConstructionError("base 3-graph failed validation after " + std::to_string(max_attempts) + " attempts",
                                out.report);
}

void write_base(std::ostream& out, const BaseThreeGraph& j) {
    out << "# U1 " << j.u1_size << " U2 " << j.u2_size << "\n";
    for (const auto& t : j.triples()) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace ssp
