#include "ssp/separator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ssp/connectivity.hpp"

namespace ssp {

OrientedGraph orient_random(const Graph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    OrientedGraph d;
    d.n = g.n();
    d.arcs.reserve(g.m());
    d.out_degree.assign(static_cast<std::size_t>(g.n()), 0);
    d.in_degree.assign(static_cast<std::size_t>(g.n()), 0);
    for (const auto& e : g.edges()) {
        Arc a = coin(rng) ? Arc{e.u, e.v} : Arc{e.v, e.u};
        ++d.out_degree[static_cast<std::size_t>(a.first)];
        ++d.in_degree[static_cast<std::size_t>(a.second)];
        d.arcs.push_back(a);
    }
    return d;
}

std::vector<int> XFamily::members(int i) const {
    std::vector<int> out;
    for (int x = 0; x < n; ++x)
        if (contains(i, x)) out.push_back(x);
    return out;
}

XFamily sample_x_family(int n, const BaseThreeGraph& j, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in [0,1]");
    XFamily f;
    f.n = n;
    f.base_vertices = j.num_vertices();
    const auto nv = static_cast<std::size_t>(f.base_vertices);
    f.y.assign(static_cast<std::size_t>(n), Bitset(nv));
    f.x_size.assign(nv, 0);
    Rng rng(seed);
    std::bernoulli_distribution coin(1.0 - eps);
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t x = 0; x < static_cast<std::size_t>(n); ++x) {
            if (coin(rng)) {
                f.y[x].set(i);
                ++f.x_size[i];
            }
        }
    }
    return f;
}

ImplicitAuxGraph::ImplicitAuxGraph(const OrientedGraph& d, const BaseThreeGraph& j, const XFamily& x)
    : d_(&d), x_(&x), triples_(j.triples()), u1_(j.u1_size) {
    if (x.base_vertices != j.num_vertices() || x.n != d.n) {
        throw std::invalid_argument("X family does not match the base 3-graph or the host graph");
    }
    by_vertex_.resize(static_cast<std::size_t>(j.num_vertices()));
    for (std::size_t t = 0; t < triples_.size(); ++t)
        for (int a : triples_[t]) by_vertex_[static_cast<std::size_t>(a)].push_back(static_cast<int>(t));
}

bool ImplicitAuxGraph::present(int arc, int triple) const {
    auto [x, y] = d_->arcs[static_cast<std::size_t>(arc)];
    for (int a : triples_[static_cast<std::size_t>(triple)])
        if (!x_->contains(a, x) || !x_->contains(a, y)) return false;
    return true;
}

int ImplicitAuxGraph::num_vertices() const {
    return static_cast<int>(d_->arcs.size() + triples_.size()) + 2 * d_->n * x_->base_vertices;
}

std::array<int, 8> ImplicitAuxGraph::vertices(int arc, int triple) const {
    const int m = static_cast<int>(d_->arcs.size());
    const int nv = x_->base_vertices;
    const int tails = m + static_cast<int>(triples_.size());
    const int heads = tails + d_->n * nv;
    auto [x, y] = d_->arcs[static_cast<std::size_t>(arc)];
    const auto& t = triples_[static_cast<std::size_t>(triple)];
    std::array<int, 8> v{arc, m + triple};
    for (int k = 0; k < 3; ++k) {
        v[static_cast<std::size_t>(2 + k)] = tails + x * nv + t[static_cast<std::size_t>(k)];
        v[static_cast<std::size_t>(5 + k)] = heads + y * nv + t[static_cast<std::size_t>(k)];
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<std::pair<int, int>> ImplicitAuxGraph::all_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < static_cast<int>(d_->arcs.size()); ++a)
        for (int t = 0; t < static_cast<int>(triples_.size()); ++t)
            if (present(a, t)) out.emplace_back(a, t);
    return out;
}

int conflict_cycle_limit(double eps_prime) {
    if (!(eps_prime > 0.0 && eps_prime < 1.0)) throw std::domain_error("eps' must lie in (0,1)");
    double r = std::floor(1.0 / eps_prime + 1e-12);
    return static_cast<int>(std::min(r, 1e9));
}

AuxConflictSystem::AuxConflictSystem(const ImplicitAuxGraph& aux, double eps_prime)
    : aux_(&aux), r_(conflict_cycle_limit(eps_prime)), edges_(aux.all_edges()) {}

namespace {

bool triple_has(const std::array<int, 3>& t, int a) { return t[0] == a || t[1] == a || t[2] == a; }

}  // namespace

bool AuxConflictSystem::enumerate(const Visitor& visit, std::uint64_t budget, int only_edge) const {
    const auto& d = aux_->oriented();
    const auto& triples = aux_->triples();
    const int n = d.n;
    const int limit = std::min(r_, n);
    // arc lookup and hyperedge ids per arc
    std::vector<std::vector<std::pair<int, int>>> out(static_cast<std::size_t>(n));  // (head, arc)
    for (int a = 0; a < static_cast<int>(d.arcs.size()); ++a)
        out[static_cast<std::size_t>(d.arcs[static_cast<std::size_t>(a)].first)].emplace_back(
            d.arcs[static_cast<std::size_t>(a)].second, a);
    std::vector<std::vector<int>> by_arc(d.arcs.size());
    for (int h = 0; h < static_cast<int>(edges_.size()); ++h)
        by_arc[static_cast<std::size_t>(edges_[static_cast<std::size_t>(h)].first)].push_back(h);

    std::uint64_t seen = 0;
    bool stopped = false;
    std::vector<int> cycle_arcs;
    std::vector<char> on_path(static_cast<std::size_t>(n), 0);

    // For a fixed directed cycle, every colour i in U1 and every choice of one hyperedge per arc
    // whose triple contains i. Sets whose triples share a smaller common U1 colour are emitted
    // under that colour only; choices repeating a triple can never lie in a matching and are skipped.
    auto emit_cycle = [&]() {
        for (int colour = 0; colour < aux_->u1_size() && !stopped; ++colour) {
            std::vector<std::vector<int>> options;
            bool empty = false;
            for (int a : cycle_arcs) {
                std::vector<int> o;
                for (int h : by_arc[static_cast<std::size_t>(a)])
                    if (triple_has(triples[static_cast<std::size_t>(edges_[static_cast<std::size_t>(h)].second)], colour))
                        o.push_back(h);
                if (o.empty()) {
                    empty = true;
                    break;
                }
                options.push_back(std::move(o));
            }
            if (empty) continue;
            std::vector<std::size_t> idx(options.size(), 0);
            while (!stopped) {
                std::vector<int> members(options.size());
                for (std::size_t k = 0; k < options.size(); ++k) members[k] = options[k][idx[k]];
                std::vector<int> tris(members.size());
                for (std::size_t k = 0; k < members.size(); ++k) tris[k] = edges_[static_cast<std::size_t>(members[k])].second;
                std::vector<int> sorted_tris = tris;
                std::sort(sorted_tris.begin(), sorted_tris.end());
                bool repeated = std::adjacent_find(sorted_tris.begin(), sorted_tris.end()) != sorted_tris.end();
                bool smaller_common = false;
                for (int c = 0; c < colour && !smaller_common; ++c) {
                    bool all = true;
                    for (int t : tris) all = all && triple_has(triples[static_cast<std::size_t>(t)], c);
                    smaller_common = all;
                }
                bool wanted = only_edge < 0 || std::find(members.begin(), members.end(), only_edge) != members.end();
                if (!repeated && !smaller_common && wanted) {
                    ++seen;
                    if (budget != 0 && seen > budget) {
                        stopped = true;
                        return;
                    }
                    std::sort(members.begin(), members.end());
                    if (!visit(members)) {
                        stopped = true;
                        return;
                    }
                }
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
    };

    // Directed simple cycles, each once: rooted at their smallest vertex.
    std::function<void(int, int)> dfs = [&](int root, int v) {
        for (auto [w, a] : out[static_cast<std::size_t>(v)]) {
            if (stopped) return;
            if (w == root && static_cast<int>(cycle_arcs.size()) + 1 >= 3) {
                cycle_arcs.push_back(a);
                emit_cycle();
                cycle_arcs.pop_back();
                continue;
            }
            if (w <= root || on_path[static_cast<std::size_t>(w)]) continue;
            if (static_cast<int>(cycle_arcs.size()) + 2 > limit) continue;
            on_path[static_cast<std::size_t>(w)] = 1;
            cycle_arcs.push_back(a);
            dfs(root, w);
            cycle_arcs.pop_back();
            on_path[static_cast<std::size_t>(w)] = 0;
        }
    };
    for (int root = 0; root < n && !stopped; ++root) {
        on_path[static_cast<std::size_t>(root)] = 1;
        dfs(root, root);
        on_path[static_cast<std::size_t>(root)] = 0;
    }
    return !stopped;
}

void AuxConflictSystem::for_each_conflict_containing(int edge, const Visitor& visit) const {
    enumerate(visit, 0, edge);
}

bool AuxConflictSystem::for_each_conflict(const Visitor& visit, std::uint64_t budget) const {
    return enumerate(visit, budget, -1);
}

bool AuxConflictSystem::closes_cycle(const std::vector<std::pair<int, int>>& chosen, std::pair<int, int> candidate) const {
    const auto& d = aux_->oriented();
    const auto& triples = aux_->triples();
    auto [x, y] = d.arcs[static_cast<std::size_t>(candidate.first)];
    for (int colour : triples[static_cast<std::size_t>(candidate.second)]) {
        if (!aux_->in_u1(colour)) continue;
        // BFS from y along chosen arcs of this colour; a path back to x of at most r-1 arcs closes a short cycle.
        std::vector<std::vector<int>> next(static_cast<std::size_t>(d.n));
        for (auto [a, t] : chosen) {
            if (!triple_has(triples[static_cast<std::size_t>(t)], colour)) continue;
            auto [u, v] = d.arcs[static_cast<std::size_t>(a)];
            next[static_cast<std::size_t>(u)].push_back(v);
        }
        std::vector<int> dist(static_cast<std::size_t>(d.n), -1);
        std::vector<int> queue{y};
        dist[static_cast<std::size_t>(y)] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int u = queue[h];
            if (u == x) {
                if (dist[static_cast<std::size_t>(u)] + 1 <= r_) return true;
                break;
            }
            for (int w : next[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return false;
}

bool AuxConflictSystem::completes_conflict(int edge, const std::function<bool(int)>& is_chosen) const {
    std::vector<std::pair<int, int>> chosen;
    for (int h = 0; h < static_cast<int>(edges_.size()); ++h)
        if (h != edge && is_chosen(h)) chosen.push_back(edges_[static_cast<std::size_t>(h)]);
    return closes_cycle(chosen, edges_[static_cast<std::size_t>(edge)]);
}

namespace {

// One greedy pass. Slots (x, a) on the tail and head side are the only 8-graph vertices shared
// between hyperedges of different arcs and triples, so tracking them plus used arcs and triples
// is the same as vertex-disjointness.
struct GreedyPass {
    const ImplicitAuxGraph& aux;
    int r;
    int n, nv, u1;
    std::vector<Bitset> tail_used, head_used;
    std::vector<char> triple_used;
    // Per colour in U1: for a path endpoint v, the other endpoint and the path length in arcs.
    std::vector<int> other, plen;
    std::vector<std::pair<int, int>> chosen;

    GreedyPass(const ImplicitAuxGraph& a, int limit)
        : aux(a), r(limit), n(a.oriented().n), nv(a.family().base_vertices), u1(a.u1_size()) {
        tail_used.assign(static_cast<std::size_t>(n), Bitset(static_cast<std::size_t>(nv)));
        head_used.assign(static_cast<std::size_t>(n), Bitset(static_cast<std::size_t>(nv)));
        triple_used.assign(a.triples().size(), 0);
        other.resize(static_cast<std::size_t>(u1) * static_cast<std::size_t>(n));
        plen.assign(other.size(), 0);
        for (int c = 0; c < u1; ++c)
            for (int v = 0; v < n; ++v) other[idx(c, v)] = v;
    }

    std::size_t idx(int c, int v) const { return static_cast<std::size_t>(c) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v); }

    // With free slots, x ends a colour-c path and y starts one; joining them closes a cycle
    // exactly when they are the two ends of the same path.
    bool closes_short_cycle(int c, int x, int y) const {
        return other[idx(c, x)] == y && plen[idx(c, x)] + 1 <= r;
    }

    void join(int c, int x, int y) {
        int s = other[idx(c, x)], e = other[idx(c, y)];
        if (s == y) return;  // long cycle closed; x and y stop being endpoints
        int len = plen[idx(c, x)] + plen[idx(c, y)] + 1;
        other[idx(c, s)] = e;
        other[idx(c, e)] = s;
        plen[idx(c, s)] = plen[idx(c, e)] = len;
    }

    void run(std::uint64_t seed) {
        const auto& d = aux.oriented();
        const auto& fam = aux.family();
        const auto& triples = aux.triples();
        Rng rng(seed);
        std::vector<int> order(d.arcs.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        Bitset avail(static_cast<std::size_t>(nv));
        std::vector<int> colours;
        for (int arc : order) {
            auto [x, y] = d.arcs[static_cast<std::size_t>(arc)];
            avail = fam.y[static_cast<std::size_t>(x)];
            avail &= fam.y[static_cast<std::size_t>(y)];
            avail.and_not(tail_used[static_cast<std::size_t>(x)]);
            avail.and_not(head_used[static_cast<std::size_t>(y)]);
            colours.clear();
            avail.for_each([&](std::size_t a) { colours.push_back(static_cast<int>(a)); });
            if (colours.size() < 3) continue;
            const std::size_t c0 = std::uniform_int_distribution<std::size_t>(0, colours.size() - 1)(rng);
            int found = -1;
            for (std::size_t ci = 0; ci < colours.size() && found < 0; ++ci) {
                const int a = colours[(c0 + ci) % colours.size()];
                const auto& list = aux.triples_at(a);
                if (list.empty()) continue;
                const std::size_t t0 = std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng);
                for (std::size_t ti = 0; ti < list.size(); ++ti) {
                    const int t = list[(t0 + ti) % list.size()];
                    if (triple_used[static_cast<std::size_t>(t)]) continue;
                    const auto& tr = triples[static_cast<std::size_t>(t)];
                    if (!avail.test(static_cast<std::size_t>(tr[0])) || !avail.test(static_cast<std::size_t>(tr[1])) ||
                        !avail.test(static_cast<std::size_t>(tr[2])))
                        continue;
                    bool conflict = false;
                    for (int c : tr)
                        if (c < u1 && closes_short_cycle(c, x, y)) conflict = true;
                    if (conflict) continue;
                    found = t;
                    break;
                }
            }
            if (found < 0) continue;
            triple_used[static_cast<std::size_t>(found)] = 1;
            for (int c : triples[static_cast<std::size_t>(found)]) {
                tail_used[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(c));
                head_used[static_cast<std::size_t>(y)].set(static_cast<std::size_t>(c));
                if (c < u1) join(c, x, y);
            }
            chosen.emplace_back(arc, found);
        }
        std::sort(chosen.begin(), chosen.end());
    }
};

template <class V>
void min_max_mean(const V& values, int& lo, int& hi, double& mean) {
    if (values.empty()) {
        lo = hi = 0;
        mean = 0;
        return;
    }
    auto [a, b] = std::minmax_element(values.begin(), values.end());
    lo = *a;
    hi = *b;
    mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

AuxMatching match_auxiliary(const ImplicitAuxGraph& aux, const SeparatorMatchingOptions& opts, std::uint64_t seed) {
    const int restarts = std::max(1, opts.restarts);
    const int r = conflict_cycle_limit(opts.eps_prime);
    std::vector<std::vector<std::pair<int, int>>> results(static_cast<std::size_t>(restarts));
    parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t k) {
        GreedyPass pass(aux, r);
        pass.run(mix_seed(seed, k));
        results[k] = std::move(pass.chosen);
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < results.size(); ++k)
        if (results[k].size() > results[best].size()) best = k;

    AuxMatching m;
    m.chosen = std::move(results[best]);
    m.restart = static_cast<int>(best);
    const auto& d = aux.oriented();
    m.unmatched_arcs = d.arcs.size() - m.chosen.size();
    std::vector<int> tail(static_cast<std::size_t>(d.n), 0), head(static_cast<std::size_t>(d.n), 0);
    std::vector<int> colour(static_cast<std::size_t>(aux.family().base_vertices), 0);
    for (auto [a, t] : m.chosen) {
        ++tail[static_cast<std::size_t>(d.arcs[static_cast<std::size_t>(a)].first)];
        ++head[static_cast<std::size_t>(d.arcs[static_cast<std::size_t>(a)].second)];
        for (int c : aux.triples()[static_cast<std::size_t>(t)]) ++colour[static_cast<std::size_t>(c)];
    }
    auto& z = m.counters;
    min_max_mean(tail, z.tail_min, z.tail_max, z.tail_mean);
    min_max_mean(head, z.head_min, z.head_max, z.head_mean);
    min_max_mean(colour, z.colour_min, z.colour_max, z.colour_mean);
    return m;
}

SeparatorCollection extract_two_matchings(const Graph& g, const std::vector<std::pair<int, int>>& chosen,
                                          const ImplicitAuxGraph& aux) {
    SeparatorCollection s;
    s.t = aux.u1_size();
    s.q.assign(static_cast<std::size_t>(s.t), {});
    for (auto [arc, t] : chosen)
        for (int a : aux.triples()[static_cast<std::size_t>(t)])
            if (aux.in_u1(a)) s.q[static_cast<std::size_t>(a)].push_back(arc);
    std::vector<int> deg(static_cast<std::size_t>(g.n()), 0);
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        auto& q = s.q[i];
        std::sort(q.begin(), q.end());
        for (int e : q) {
            const auto& ed = g.edge(e);
            if (++deg[static_cast<std::size_t>(ed.u)] > 2 || ++deg[static_cast<std::size_t>(ed.v)] > 2) {
                throw std::logic_error("two-matching " + std::to_string(i) + " has a vertex of degree 3; input is not a matching");
            }
        }
        for (int e : q) deg[static_cast<std::size_t>(g.edge(e).u)] = deg[static_cast<std::size_t>(g.edge(e).v)] = 0;
    }
    return s;
}

TwoMatchingShape two_matching_shape(const Graph& g, const std::vector<int>& edge_ids) {
    TwoMatchingShape sh;
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(g.n()));
    std::vector<int> verts;
    for (int e : edge_ids) {
        for (int v : {g.edge(e).u, g.edge(e).v}) {
            if (inc[static_cast<std::size_t>(v)].empty()) verts.push_back(v);
            inc[static_cast<std::size_t>(v)].push_back(e);
        }
    }
    for (int v : verts) sh.max_degree = std::max(sh.max_degree, static_cast<int>(inc[static_cast<std::size_t>(v)].size()));
    if (sh.max_degree > 2) return sh;
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    auto walk = [&](int start, std::vector<int>& edges_out) {
        int prev_edge = -1, v = start;
        seen[static_cast<std::size_t>(v)] = 1;
        while (true) {
            int next_edge = -1;
            for (int e : inc[static_cast<std::size_t>(v)])
                if (e != prev_edge) next_edge = e;
            if (next_edge < 0) break;
            edges_out.push_back(next_edge);
            int w = g.edge(next_edge).u == v ? g.edge(next_edge).v : g.edge(next_edge).u;
            if (seen[static_cast<std::size_t>(w)]) break;
            seen[static_cast<std::size_t>(w)] = 1;
            prev_edge = next_edge;
            v = w;
        }
    };
    for (int v : verts) {
        if (seen[static_cast<std::size_t>(v)] || inc[static_cast<std::size_t>(v)].size() != 1) continue;
        std::vector<int> es;
        walk(v, es);
        ++sh.paths;
    }
    for (int v : verts) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        std::vector<int> es;
        walk(v, es);
        ++sh.cycles;
        int len = static_cast<int>(es.size());
        sh.min_cycle = sh.min_cycle == 0 ? len : std::min(sh.min_cycle, len);
        sh.cycle_edges.push_back(std::move(es));
    }
    return sh;
}

SeparatorReport validate_separator(const Graph& g, const SeparatorCollection& s, const SeparatorValidateOptions& opts,
                                   int expected_t) {
    SeparatorReport rep;
    const double n = g.n();
    const double eps = s.params.eps;
    const double eps_n = eps * n;
    std::vector<std::vector<int>> sig(g.m());
    std::vector<int> endpoints(static_cast<std::size_t>(g.n()), 0);
    std::vector<int> deg(static_cast<std::size_t>(g.n()), 0);
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        const auto& q = s.q[i];
        auto sh = two_matching_shape(g, q);
        if (sh.max_degree > 2) {
            rep.degree_ok = false;
        } else {
            rep.max_paths = std::max(rep.max_paths, sh.paths);
            if (sh.paths > eps_n) rep.compact_ok = false;
            for (const auto& c : sh.cycle_edges) {
                int len = static_cast<int>(c.size());
                rep.min_cycle = rep.min_cycle == 0 ? len : std::min(rep.min_cycle, len);
                if (len * eps < 1.0) {
                    ++rep.short_cycles;
                    rep.compact_ok = false;
                }
            }
        }
        for (int e : q) {
            sig[static_cast<std::size_t>(e)].push_back(static_cast<int>(i));
            ++deg[static_cast<std::size_t>(g.edge(e).u)];
            ++deg[static_cast<std::size_t>(g.edge(e).v)];
        }
        for (int e : q)
            for (int v : {g.edge(e).u, g.edge(e).v}) {
                if (deg[static_cast<std::size_t>(v)] == 1) ++endpoints[static_cast<std::size_t>(v)];
                deg[static_cast<std::size_t>(v)] = 0;
            }
    }
    rep.max_endpoints = endpoints.empty() ? 0 : *std::max_element(endpoints.begin(), endpoints.end());
    rep.endpoints_ok = rep.max_endpoints <= eps_n;

    std::vector<int> covered_deg(static_cast<std::size_t>(g.n()), 0);
    for (std::size_t e = 0; e < g.m(); ++e) {
        const int mult = static_cast<int>(sig[e].size());
        rep.max_multiplicity = std::max(rep.max_multiplicity, mult);
        if (mult > 0) {
            ++rep.covered_edges;
            ++covered_deg[static_cast<std::size_t>(g.edge(static_cast<int>(e)).u)];
            ++covered_deg[static_cast<std::size_t>(g.edge(static_cast<int>(e)).v)];
        }
    }
    rep.multiplicity_ok = rep.max_multiplicity <= 3;
    for (int v = 0; v < g.n(); ++v)
        rep.remainder_max_degree = std::max(rep.remainder_max_degree, g.degree(v) - covered_deg[static_cast<std::size_t>(v)]);
    rep.remainder_ok = rep.remainder_max_degree <= eps_n;

    // Q2: any f with sig(e) contained in sig(f) lies in the smallest member of sig(e).
    for (std::size_t e = 0; e < g.m(); ++e) {
        const auto& se = sig[e];
        if (se.empty()) continue;
        int smallest = se.front();
        for (int i : se)
            if (s.q[static_cast<std::size_t>(i)].size() < s.q[static_cast<std::size_t>(smallest)].size()) smallest = i;
        for (int f : s.q[static_cast<std::size_t>(smallest)]) {
            if (static_cast<std::size_t>(f) == e) continue;
            const auto& sf = sig[static_cast<std::size_t>(f)];
            if (std::includes(sf.begin(), sf.end(), se.begin(), se.end())) ++rep.separation_violations;
        }
    }
    rep.separation_ok = rep.separation_violations == 0;
    if (expected_t >= 0) rep.size_ok = s.t == expected_t && static_cast<int>(s.q.size()) == expected_t;

    if (opts.check_connectivity && s.params.L >= 1 && s.params.L <= kMaxInnerVertices) {
        std::vector<int> candidates;
        for (std::size_t i = 0; i < s.q.size(); ++i)
            if (!s.q[i].empty()) candidates.push_back(static_cast<int>(i));
        Rng rng(opts.seed);
        std::shuffle(candidates.begin(), candidates.end(), rng);
        if (static_cast<int>(candidates.size()) > opts.max_checked_members) candidates.resize(static_cast<std::size_t>(opts.max_checked_members));
        std::sort(candidates.begin(), candidates.end());
        rep.connectivity_checked = !candidates.empty();
        rep.min_connectivity = candidates.empty() ? 0.0 : 1e300;
        for (int i : candidates) {
            std::vector<int> vq;
            for (int e : s.q[static_cast<std::size_t>(i)]) {
                vq.push_back(g.edge(e).u);
                vq.push_back(g.edge(e).v);
            }
            std::sort(vq.begin(), vq.end());
            vq.erase(std::unique(vq.begin(), vq.end()), vq.end());
            CertifyOptions co;
            co.mode = CertMode::sampled;
            co.samples = opts.samples;
            co.seed = mix_seed(opts.seed, static_cast<std::uint64_t>(i));
            co.stop_at_failure = false;
            auto cert = certify_robust_connectivity(g, s.params.delta, s.params.L, co, vq, vq);
            rep.min_connectivity = std::min(rep.min_connectivity, cert.min_ratio);
            if (!cert.ok) rep.connectivity_ok = false;
        }
    }
    return rep;
}

SeparatorBuild build_separator(const Graph& g, double delta, int L, double eps, double eps_prime, std::uint64_t seed,
                               const SeparatorBuildOptions& opts) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0,1)");
    SeparatorBuild out;
    const double alpha = g.density();
    const double beta = std::sqrt(3.0 * alpha + 1.0) - 1.0;
    const double lambda = beta / (1.0 - eps);

    OrientedGraph d = orient_random(g, mix_seed(seed, 1));
    if (g.n() > 0) {
        out.out_min = *std::min_element(d.out_degree.begin(), d.out_degree.end());
        out.out_max = *std::max_element(d.out_degree.begin(), d.out_degree.end());
    }

    BaseBuild base;
    bool have_base = false;
    std::string last_error;
    for (int s = 0; s < std::max(1, opts.stage_retries) && !have_base; ++s) {
        try {
            base = build_base(g.n(), alpha, lambda, mix_seed(seed, 2, static_cast<std::uint64_t>(s)), opts.tolerance,
                              opts.base_attempts);
            out.base_attempts += base.attempts;
            have_base = true;
        } catch (const BaseConstructionError& e) {
            out.base_attempts += opts.base_attempts;
            last_error = e.what();
        }
    }
    if (!have_base) throw StageFailure("base", "base 3-graph stage failed after retries: " + last_error);
    out.base_params = base.params;

    XFamily x = sample_x_family(g.n(), base.graph, eps, mix_seed(seed, 3));
    if (!x.x_size.empty()) {
        out.x_min = *std::min_element(x.x_size.begin(), x.x_size.end());
        out.x_max = *std::max_element(x.x_size.begin(), x.x_size.end());
    }
    ImplicitAuxGraph aux(d, base.graph, x);
    SeparatorMatchingOptions mo;
    mo.restarts = opts.restarts;
    mo.eps_prime = eps_prime;
    AuxMatching m = match_auxiliary(aux, mo, mix_seed(seed, 4));
    out.aux_matched = m.chosen.size();
    out.unmatched_arcs = m.unmatched_arcs;
    out.counters = m.counters;

    out.collection = extract_two_matchings(g, m.chosen, aux);
    out.collection.params = {std::pow(eps, L) * delta / 2.0, L, lambda, eps_prime};
    out.report = validate_separator(g, out.collection, opts.validate, base.params.u1);
    return out;
}

nlohmann::json separator_to_json(const Graph& g, const SeparatorCollection& s) {
    nlohmann::json j;
    j["t"] = s.t;
    j["two_matchings"] = nlohmann::json::array();
    for (const auto& q : s.q) {
        nlohmann::json arr = nlohmann::json::array();
        for (int e : q) arr.push_back({g.edge(e).u, g.edge(e).v});
        j["two_matchings"].push_back(std::move(arr));
    }
    j["params"] = {{"delta", s.params.delta}, {"L", s.params.L}, {"beta", s.params.beta}, {"eps", s.params.eps}};
    return j;
}

SeparatorCollection separator_from_json(const Graph& g, const nlohmann::json& j) {
    SeparatorCollection s;
    s.t = j.at("t").get<int>();
    for (const auto& arr : j.at("two_matchings")) {
        std::vector<int> q;
        for (const auto& e : arr) {
            int id = g.edge_id(e.at(0).get<int>(), e.at(1).get<int>());
            if (id == kNoEdge) throw std::invalid_argument("two-matching edge not in graph");
            q.push_back(id);
        }
        std::sort(q.begin(), q.end());
        s.q.push_back(std::move(q));
    }
    const auto& p = j.at("params");
    s.params = {p.at("delta").get<double>(), p.at("L").get<int>(), p.at("beta").get<double>(), p.at("eps").get<double>()};
    return s;
}

}  // namespace ssp
