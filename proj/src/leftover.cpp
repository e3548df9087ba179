#include "ssp/leftover.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "ssp/connectivity.hpp"
#include "ssp/util.hpp"

namespace ssp {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void erase_value(std::vector<int>& v, int x) { v.erase(std::find(v.begin(), v.end(), x)); }

class Resampler {
public:
    Resampler(const Graph& h, int D, std::uint64_t seed)
        : h_(h), D_(D), rng_(seed), labels_(h.m()), by_vertex_(sz(h.n())) {}

    LabelAssignment run(std::uint64_t cap) {
        for (int e = 0; e < static_cast<int>(h_.m()); ++e) {
            draw(e);
            insert(e);
        }
        std::uint64_t resamples = 0;
        while (!violated_.empty()) {
            if (resamples == cap) throw LabelingFailure("label resampling hit its cap of " + std::to_string(cap));
            auto [e, f] = *violated_.begin();
            remove(e);
            remove(f);
            draw(e);
            draw(f);
            insert(e);
            insert(f);
            ++resamples;
        }
        LabelAssignment a;
        a.D = D_;
        a.max_degree = h_.max_degree();
        a.labels = labels_;
        a.resamples = resamples;
        return a;
    }

private:
    std::uint64_t key(int e) const {
        const auto& l = labels_[sz(e)];
        return static_cast<std::uint64_t>(l[0]) * static_cast<std::uint64_t>(D_ + 1) + static_cast<std::uint64_t>(l[1]);
    }

    void draw(int e) {
        std::uniform_int_distribution<int> first(0, D_), second(0, D_ - 1);
        int a = first(rng_), b = second(rng_);
        if (b >= a) ++b;
        labels_[sz(e)] = {std::min(a, b), std::max(a, b)};
    }

    // Edges f != e currently in a violated event with e.
    template <class F>
    void for_each_partner(int e, const F& fn) {
        auto it = by_pair_.find(key(e));
        if (it != by_pair_.end())
            for (int f : it->second)
                if (f != e) fn(f);
        for (int v : {h_.edge(e).u, h_.edge(e).v})
            for (int lab : labels_[sz(e)]) {
                auto jt = by_vertex_[sz(v)].find(lab);
                if (jt == by_vertex_[sz(v)].end()) continue;
                for (int f : jt->second)
                    if (f != e) fn(f);
            }
    }

    void insert(int e) {
        for_each_partner(e, [&](int f) { violated_.insert({std::min(e, f), std::max(e, f)}); });
        by_pair_[key(e)].push_back(e);
        for (int v : {h_.edge(e).u, h_.edge(e).v})
            for (int lab : labels_[sz(e)]) by_vertex_[sz(v)][lab].push_back(e);
    }

    void remove(int e) {
        for_each_partner(e, [&](int f) { violated_.erase({std::min(e, f), std::max(e, f)}); });
        erase_value(by_pair_[key(e)], e);
        for (int v : {h_.edge(e).u, h_.edge(e).v})
            for (int lab : labels_[sz(e)]) erase_value(by_vertex_[sz(v)][lab], e);
    }

    const Graph& h_;
    int D_;
    Rng rng_;
    std::vector<std::array<int, 2>> labels_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_pair_;
    std::vector<std::unordered_map<int, std::vector<int>>> by_vertex_;
    std::set<std::pair<int, int>> violated_;
};

}  // namespace

int default_label_count(int max_degree, int n) {
    int D = static_cast<int>(std::ceil(256.0 * std::sqrt(static_cast<double>(max_degree) * n)));
    return std::max(D, 3);
}

LabelAssignment assign_labels_lll(const Graph& h, std::uint64_t seed, const LabelOptions& opts) {
    int D = opts.D > 0 ? std::max(opts.D, 3) : default_label_count(h.max_degree(), h.n());
    return Resampler(h, D, seed).run(opts.max_resamples);
}

FamilyCheck check_matching_family(const Graph& h, const MatchingFamily& f) {
    FamilyCheck c;
    std::vector<int> count(h.m(), 0);
    std::vector<char> seen(sz(h.n()), 0);
    for (const auto& m : f.matchings) {
        for (int e : m) {
            ++count[sz(e)];
            for (int v : {h.edge(e).u, h.edge(e).v}) {
                if (seen[sz(v)]) c.matchings = false;
                seen[sz(v)] = 1;
            }
        }
        for (int e : m) seen[sz(h.edge(e).u)] = seen[sz(h.edge(e).v)] = 0;
    }
    for (int k : count)
        if (k != 2) c.exactly_two = false;
    // (M2): every edge lies in two matchings, so two shared edges mean two edges with the same pair.
    std::vector<std::vector<int>> where(h.m());
    for (std::size_t i = 0; i < f.matchings.size(); ++i)
        for (int e : f.matchings[i]) where[sz(e)].push_back(static_cast<int>(i));
    std::set<std::vector<int>> pairs;
    for (const auto& w : where)
        if (w.size() >= 2 && !pairs.insert(w).second) c.pairwise = false;
    if (!c.exactly_two) {
        // with irregular multiplicities fall back to the direct pairwise scan
        for (std::size_t i = 0; i < f.matchings.size() && c.pairwise; ++i)
            for (std::size_t j = i + 1; j < f.matchings.size(); ++j) {
                std::vector<int> common;
                std::set_intersection(f.matchings[i].begin(), f.matchings[i].end(), f.matchings[j].begin(),
                                      f.matchings[j].end(), std::back_inserter(common));
                if (common.size() > 1) c.pairwise = false;
            }
    }
    return c;
}

MatchingFamily labels_to_matchings(const Graph& h, const LabelAssignment& a) {
    std::vector<std::vector<int>> by_label(sz(a.D + 1));
    for (std::size_t e = 0; e < a.labels.size(); ++e)
        for (int lab : a.labels[e]) by_label[sz(lab)].push_back(static_cast<int>(e));
    MatchingFamily f;
    for (int lab = 0; lab <= a.D; ++lab) {
        if (by_label[sz(lab)].empty()) continue;
        f.matchings.push_back(std::move(by_label[sz(lab)]));
        f.origin.push_back(lab);
    }
    auto c = check_matching_family(h, f);
    if (!c.matchings || !c.exactly_two || !c.pairwise) throw std::logic_error("labels do not give a separating matching family");
    return f;
}

int split_cap(double delta, int L, int n) {
    return std::max(1, static_cast<int>(std::ceil(delta * n / (4.0 * L) - 1e-12)) - 1);
}

MatchingFamily split_matchings(const MatchingFamily& f, double delta, int L, int n) {
    const auto cap = static_cast<std::size_t>(split_cap(delta, L, n));
    MatchingFamily out;
    for (std::size_t i = 0; i < f.matchings.size(); ++i) {
        const auto& m = f.matchings[i];
        const std::size_t parts = std::max<std::size_t>(1, (m.size() + cap - 1) / cap);
        std::size_t at = 0;
        for (std::size_t p = 0; p < parts; ++p) {
            std::size_t size = m.size() / parts + (p < m.size() % parts ? 1 : 0);
            out.matchings.emplace_back(m.begin() + static_cast<std::ptrdiff_t>(at),
                                       m.begin() + static_cast<std::ptrdiff_t>(at + size));
            out.origin.push_back(static_cast<int>(i));
            at += size;
        }
    }
    return out;
}

std::pair<Path, Path> cover_matching_with_path_pair(const Graph& g, const std::vector<Edge>& mprime, double delta, int L) {
    if (mprime.empty()) throw std::invalid_argument("empty matching");
    if (L < 1) throw std::domain_error("L must be at least 1");
    if (!(2.0 * static_cast<double>(mprime.size()) * (L + 1) < delta * g.n()))
        throw std::invalid_argument("matching too large to route around");
    std::vector<char> blocked(sz(g.n()), 0);
    std::vector<int> xs, ys;
    for (auto e : mprime) {
        if (!g.has_edge(e.u, e.v)) throw std::invalid_argument("matching edge missing from the host graph");
        for (int v : {e.u, e.v}) {
            if (blocked[sz(v)]) throw std::invalid_argument("edges share a vertex");
            blocked[sz(v)] = 1;
        }
        xs.push_back(std::min(e.u, e.v));
        ys.push_back(std::max(e.u, e.v));
    }
    auto any_edge = [](int) { return true; };
    auto connect = [&](int a, int b, std::size_t k, char side) {
        for (int inner = 1; inner <= L; ++inner) {
            if (auto p = find_path_with_inner(g, a, b, inner, blocked, any_edge)) {
                for (std::size_t s = 1; s + 1 < p->vertices.size(); ++s) blocked[sz(p->vertices[s])] = 1;
                return std::vector<int>(p->vertices.begin() + 1, p->vertices.end() - 1);
            }
        }
        throw CoverFailure(std::string("no connector ") + side + "^(" + std::to_string(k + 1) + ") from " +
                           std::to_string(a) + " to " + std::to_string(b));
    };
    Path P{{xs[0], ys[0]}}, Q{{ys[0], xs[0]}};
    for (std::size_t k = 0; k + 1 < mprime.size(); ++k) {
        auto px = connect(xs[k], xs[k + 1], k, 'P');
        auto qy = connect(ys[k], ys[k + 1], k, 'Q');
        // 1-based step k+1: odd steps route P through Q^(k) and Q through P^(k)
        bool odd = k % 2 == 0;
        auto extend = [&](Path& path, const std::vector<int>& inner, int first, int second) {
            path.vertices.insert(path.vertices.end(), inner.begin(), inner.end());
            path.vertices.push_back(first);
            path.vertices.push_back(second);
        };
        if (odd) {
            extend(P, qy, ys[k + 1], xs[k + 1]);
            extend(Q, px, xs[k + 1], ys[k + 1]);
        } else {
            extend(P, px, xs[k + 1], ys[k + 1]);
            extend(Q, qy, ys[k + 1], xs[k + 1]);
        }
    }
    auto ep = path_edge_ids(g, P), eq = path_edge_ids(g, Q);
    std::sort(ep.begin(), ep.end());
    std::sort(eq.begin(), eq.end());
    std::vector<int> common, want;
    std::set_intersection(ep.begin(), ep.end(), eq.begin(), eq.end(), std::back_inserter(common));
    for (auto e : mprime) want.push_back(g.edge_id(e.u, e.v));
    std::sort(want.begin(), want.end());
    if (common != want) throw std::logic_error("path pair does not intersect in the matching");
    return {std::move(P), std::move(Q)};
}

PathPairCover last_few_paths(const Graph& g, const Graph& h, double delta, int L, std::uint64_t seed,
                             const LeftoverOptions& opts) {
    if (h.n() != g.n()) throw std::invalid_argument("remainder must live on the host vertex set");
    PathPairCover out;
    const double n = g.n();
    const int max_deg = h.max_degree();
    const double eps = opts.eps >= 0 ? opts.eps : max_deg / n;
    out.t_bound = 300.0 * std::sqrt(max_deg * n);
    out.r_bound = 600.0 * L * std::sqrt(eps) * n / delta;
    if (h.m() == 0) return out;

    auto labels = assign_labels_lll(h, mix_seed(seed, 1), opts.labels);
    out.D = labels.D;
    out.resamples = labels.resamples;
    auto fam = labels_to_matchings(h, labels);
    out.t = static_cast<int>(fam.matchings.size());
    auto parts = split_matchings(fam, delta, L, g.n());
    out.r = static_cast<int>(parts.matchings.size());
    out.t_bound_ok = out.t <= out.t_bound;
    out.r_bound_ok = out.r <= out.r_bound;

    out.p.resize(parts.matchings.size());
    out.q.resize(parts.matchings.size());
    std::vector<std::exception_ptr> errors(parts.matchings.size());
    parallel_for(parts.matchings.size(), [&](std::size_t k) {
        try {
            std::vector<Edge> mp;
            for (int e : parts.matchings[k]) mp.push_back(h.edge(e));
            auto pq = cover_matching_with_path_pair(g, mp, delta, L);
            out.p[k] = std::move(pq.first);
            out.q[k] = std::move(pq.second);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    });
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    // quadruple intersection for every remainder edge
    std::vector<std::vector<int>> where(h.m());
    for (std::size_t k = 0; k < parts.matchings.size(); ++k)
        for (int e : parts.matchings[k]) where[sz(e)].push_back(static_cast<int>(k));
    auto sorted_ids = [&](const Path& p) {
        auto ids = path_edge_ids(g, p);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    std::vector<std::vector<int>> pe(parts.matchings.size()), qe(parts.matchings.size());
    for (std::size_t k = 0; k < pe.size(); ++k) {
        pe[k] = sorted_ids(out.p[k]);
        qe[k] = sorted_ids(out.q[k]);
    }
    out.witness.resize(h.m());
    for (std::size_t e = 0; e < h.m(); ++e) {
        const auto& w = where[e];
        if (w.size() != 2 || w[0] == w[1]) throw std::logic_error("remainder edge not in two distinct parts");
        const auto i = sz(w[0]), j = sz(w[1]);
        out.witness[e] = {w[0], w[1]};
        std::vector<int> a, b, c;
        std::set_intersection(pe[i].begin(), pe[i].end(), pe[j].begin(), pe[j].end(), std::back_inserter(a));
        std::set_intersection(a.begin(), a.end(), qe[i].begin(), qe[i].end(), std::back_inserter(b));
        std::set_intersection(b.begin(), b.end(), qe[j].begin(), qe[j].end(), std::back_inserter(c));
        const Edge& he = h.edge(static_cast<int>(e));
        if (c != std::vector<int>{g.edge_id(he.u, he.v)}) out.quadruple_ok = false;
    }
    return out;
}

}  // namespace ssp
