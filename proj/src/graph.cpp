#include "ssp/graph.hpp"

#include <algorithm>
#include <random>

#include "ssp/util.hpp"

namespace ssp {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                        std::to_string(e.v));
        }
        if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
        e = make_edge(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) {
        throw std::invalid_argument("duplicate edge " + std::to_string(dup->u) + " " + std::to_string(dup->v));
    }
    edges_ = std::move(edges);

    adj_.assign(static_cast<std::size_t>(n), {});
    adj_ids_.assign(static_cast<std::size_t>(n), {});
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        const auto& e = edges_[id];
        adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    // Neighbor lists are sorted because edges are sorted; ids need a second pass to align.
    for (int v = 0; v < n; ++v) {
        auto& nb = adj_[static_cast<std::size_t>(v)];
        std::sort(nb.begin(), nb.end());
        auto& ids = adj_ids_[static_cast<std::size_t>(v)];
        ids.resize(nb.size());
        for (std::size_t k = 0; k < nb.size(); ++k) {
            Edge key = make_edge(v, nb[k]);
            ids[k] = static_cast<int>(std::lower_bound(edges_.begin(), edges_.end(), key) - edges_.begin());
        }
    }
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
    return d;
}

int Graph::min_degree() const {
    if (adj_.empty()) return 0;
    int d = n_;
    for (const auto& nb : adj_) d = std::min(d, static_cast<int>(nb.size()));
    return d;
}

int Graph::edge_id(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return kNoEdge;
    const auto& nb = adj_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return kNoEdge;
    return adj_ids_[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - nb.begin())];
}

double Graph::density() const {
    if (n_ < 2) return 0.0;
    double pairs = 0.5 * static_cast<double>(n_) * static_cast<double>(n_ - 1);
    return static_cast<double>(edges_.size()) / pairs;
}

Graph Graph::edge_subgraph(std::span<const int> edge_ids) const {
    std::vector<Edge> kept;
    kept.reserve(edge_ids.size());
    for (int id : edge_ids) kept.push_back(edges_[static_cast<std::size_t>(id)]);
    return Graph(n_, std::move(kept));
}

std::uint64_t Graph::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    feed(static_cast<std::uint64_t>(n_));
    for (const auto& e : edges_) {
        feed(static_cast<std::uint64_t>(e.u));
        feed(static_cast<std::uint64_t>(e.v));
    }
    return h;
}

std::vector<int> path_edge_ids(const Graph& g, const Path& p, std::size_t index) {
    const auto& vs = p.vertices;
    if (vs.size() < 2) throw InvalidPathError(index, "fewer than 2 vertices");
    std::vector<char> seen(static_cast<std::size_t>(std::max(g.n(), 0)), 0);
    for (int v : vs) {
        if (v < 0 || v >= g.n()) throw InvalidPathError(index, "vertex " + std::to_string(v) + " out of range");
        if (seen[static_cast<std::size_t>(v)]) throw InvalidPathError(index, "repeated vertex " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<int> ids;
    ids.reserve(vs.size() - 1);
    for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
        int id = g.edge_id(vs[k], vs[k + 1]);
        if (id == kNoEdge) {
            throw InvalidPathError(index, "missing edge " + std::to_string(vs[k]) + " " + std::to_string(vs[k + 1]));
        }
        ids.push_back(id);
    }
    return ids;
}

Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

Graph complete_bipartite_graph(int n) {
    if (n % 2 != 0) throw std::invalid_argument("complete_bipartite_graph needs even n");
    int h = n / 2;
    std::vector<Edge> edges;
    for (int u = 0; u < h; ++u)
        for (int v = h; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

Graph random_regular_graph(int n, int d, std::uint64_t seed) {
    if (d < 0 || d >= n || (static_cast<long long>(n) * d) % 2 != 0) {
        throw std::invalid_argument("no d-regular graph for n=" + std::to_string(n) + ", d=" + std::to_string(d));
    }
    // Circulant start: offsets 1..d/2, plus the antipodal matching when d is odd (n is then even).
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int s = 1; s <= d / 2; ++s) edges.push_back(make_edge(u, (u + s) % n));
        if (d % 2 == 1 && u < n / 2) edges.push_back(make_edge(u, u + n / 2));
    }
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (const auto& e : edges) {
        adj[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
        adj[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
    }
    if (edges.size() < 2) return Graph(n, std::move(edges));

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution coin(0.5);
    const std::size_t swaps = 10 * edges.size();
    for (std::size_t s = 0; s < swaps; ++s) {
        std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        if (i == j) continue;
        int a = edges[i].u, b = edges[i].v, c = edges[j].u, e = edges[j].v;
        if (coin(rng)) std::swap(c, e);
        // Replace ab, ce with ac, be.
        if (a == c || a == e || b == c || b == e) continue;
        if (adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] ||
            adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(e)])
            continue;
        auto flip = [&](int x, int y, char val) {
            adj[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = val;
            adj[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = val;
        };
        flip(a, b, 0);
        flip(c, e, 0);
        flip(a, c, 1);
        flip(b, e, 1);
        edges[i] = make_edge(a, c);
        edges[j] = make_edge(b, e);
    }
    return Graph(n, std::move(edges));
}

}  // namespace ssp
