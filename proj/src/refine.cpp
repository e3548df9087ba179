#include "ssp/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ssp/connectivity.hpp"
#include "ssp/separation.hpp"
#include "ssp/util.hpp"

namespace ssp {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

int other_end(const Graph& g, int e, int v) { return g.edge(e).u == v ? g.edge(e).v : g.edge(e).u; }

// Vertex sequences of the paths of an acyclic two-matching, each starting at its smaller end,
// ordered by that start.
std::vector<std::vector<int>> fragments(const Graph& g, const std::vector<int>& edge_ids) {
    std::vector<std::vector<int>> inc(sz(g.n()));
    std::vector<int> verts;
    for (int e : edge_ids)
        for (int v : {g.edge(e).u, g.edge(e).v}) {
            if (inc[sz(v)].empty()) verts.push_back(v);
            inc[sz(v)].push_back(e);
        }
    std::sort(verts.begin(), verts.end());
    std::vector<char> seen(sz(g.n()), 0);
    std::vector<std::vector<int>> out;
    std::size_t walked = 0;
    for (int v : verts) {
        if (inc[sz(v)].size() > 2) throw std::invalid_argument("two-matching has a vertex of degree above 2");
        if (seen[sz(v)] || inc[sz(v)].size() != 1) continue;
        std::vector<int> seq{v};
        seen[sz(v)] = 1;
        int prev = -1, cur = v;
        while (true) {
            int next = -1;
            for (int e : inc[sz(cur)])
                if (e != prev) next = e;
            if (next < 0) break;
            ++walked;
            cur = other_end(g, next, cur);
            seen[sz(cur)] = 1;
            seq.push_back(cur);
            prev = next;
        }
        out.push_back(std::move(seq));
    }
    if (walked != edge_ids.size()) throw std::invalid_argument("two-matching contains a cycle");
    return out;
}

}  // namespace

double choose_eps_prime(double delta, int L, double beta) {
    if (!(delta > 0 && delta <= 1) || L < 1 || !(beta > 0)) throw std::domain_error("need delta in (0,1], L >= 1, beta > 0");
    const double a = 4.0 * L * beta;
    const double root = (-2.0 + std::sqrt(4.0 + a * delta)) / (2.0 * a);  // 4 L beta s^2 + 2 s = delta/4
    const double q = delta / (8.0 * (1.0 + a));
    return 0.9 * std::min({delta / (4.0 * L), 1.0 / 16.0, q * q, root * root});
}

BreakCyclesResult break_cycles(const Graph& g, const SeparatorCollection& s, std::uint64_t seed, int max_attempts) {
    std::vector<TwoMatchingShape> shapes;
    shapes.reserve(s.q.size());
    for (const auto& q : s.q) {
        shapes.push_back(two_matching_shape(g, q));
        if (shapes.back().max_degree > 2) throw std::invalid_argument("two-matching has a vertex of degree above 2");
    }
    const double bound = 4.0 * s.params.eps * s.params.beta * g.n();
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        BreakCyclesResult r;
        r.collection = s;
        r.attempts = attempt;
        for (std::size_t i = 0; i < shapes.size(); ++i) {
            for (const auto& cyc : shapes[i].cycle_edges) {
                std::uniform_int_distribution<std::size_t> pick(0, cyc.size() - 1);
                int e = cyc[pick(rng)];
                auto& q = r.collection.q[i];
                q.erase(std::find(q.begin(), q.end(), e));
                r.removed.push_back(e);
            }
        }
        std::sort(r.removed.begin(), r.removed.end());
        std::vector<int> distinct = r.removed;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<int> deg(sz(g.n()), 0);
        for (int e : distinct) {
            r.removed_max_degree = std::max(r.removed_max_degree, ++deg[sz(g.edge(e).u)]);
            r.removed_max_degree = std::max(r.removed_max_degree, ++deg[sz(g.edge(e).v)]);
        }
        if (r.removed_max_degree <= bound) return r;
    }
    throw StageFailure("break_cycles", "removed cycle edges keep exceeding the degree bound");
}

ConnectState::ConnectState(const Graph& g, const SeparatorCollection& s, const ConnectOptions& opts)
    : g_(&g), members_(s.q), original_(s.q), sig_(g.m()), in_e_(g.m(), 0), used_(g.m(), 0),
      d_(sz(g.n()), 0), rem_deg_(sz(g.n()), 0) {
    const double n = g.n();
    free_thr_ = opts.free_threshold >= 0 ? opts.free_threshold : opts.eps * n;
    budget_thr_ = opts.budget_threshold >= 0 ? opts.budget_threshold : std::sqrt(opts.eps_prime) * n;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        std::sort(members_[i].begin(), members_[i].end());
        std::sort(original_[i].begin(), original_[i].end());
        for (int e : members_[i]) sig_[sz(e)].push_back(static_cast<int>(i));
        for (const auto& fr : fragments(g, members_[i])) {
            ++d_[sz(fr.front())];
            ++d_[sz(fr.back())];
        }
    }
    for (std::size_t e = 0; e < g.m(); ++e)
        in_e_[e] = sig_[e].size() <= 3 && is_separated(sig_, members_, static_cast<int>(e)) ? 1 : 0;
    for (int v = 0; v < g.n(); ++v) rem_deg_[sz(v)] = g.degree(v);
    for (std::size_t e = 0; e < g.m(); ++e)
        if (in_e_[e]) {
            --rem_deg_[sz(g.edge(static_cast<int>(e)).u)];
            --rem_deg_[sz(g.edge(static_cast<int>(e)).v)];
        }
}

ConnectOptions calibrate_thresholds(const Graph& g, const SeparatorCollection& s, ConnectOptions base, double slack) {
    ConnectState st(g, s, base);
    int free0 = 0, budget0 = 0;
    for (int u = 0; u < g.n(); ++u) {
        if (st.debt(u) == 0) free0 = std::max(free0, st.remainder_degree(u));
        else budget0 = std::max(budget0, st.remainder_degree(u) + 2 * st.debt(u));
    }
    base.budget_threshold = std::max(std::sqrt(base.eps_prime) * g.n(), budget0 + slack);
    base.free_threshold = std::max({base.eps * g.n(), static_cast<double>(free0) + slack, base.budget_threshold});
    return base;
}

std::vector<int> ConnectState::compute_ef(int f, int i) const {
    const auto& sf = sig_[sz(f)];
    if (std::binary_search(sf.begin(), sf.end(), i)) throw std::invalid_argument("edge already lies in the member");
    std::vector<int> out{f};
    for (int e : original_[sz(i)]) {
        if (!in_e_[sz(e)]) continue;
        bool inside = true;
        for (int a : sig_[sz(e)])
            if (a != i && !std::binary_search(sf.begin(), sf.end(), a)) {
                inside = false;
                break;
            }
        if (inside) out.push_back(e);
    }
    return out;
}

bool ConnectState::is_tight(int u) const {
    const int d = d_[sz(u)];
    const double deg = rem_deg_[sz(u)];
    if (d == 0) return deg > free_thr_ - 2.0;
    return deg > budget_thr_ - 2.0 * d - 2.0;
}

bool ConnectState::available(int f, int i) const {
    if (used_[sz(f)]) return false;
    for (int e : compute_ef(f, i))
        if (is_tight(g_->edge(e).u) || is_tight(g_->edge(e).v)) return false;
    return true;
}

std::optional<Path> find_good_path(const ConnectState& st, int x, int y, int i, const std::vector<char>& blocked, int L) {
    if (x == y) throw std::invalid_argument("connector ends must differ");
    auto ok = [&](int f) {
        const auto& s = st.signature(f);
        return !std::binary_search(s.begin(), s.end(), i) && st.available(f, i);
    };
    for (int inner = 0; inner <= L; ++inner)
        if (auto p = find_path_with_inner(st.graph(), x, y, inner, blocked, ok)) return p;
    return std::nullopt;
}

class Connector {
public:
    Connector(const Graph& g, const SeparatorCollection& s, const ConnectOptions& opts)
        : g_(g), opts_(opts), st_(g, s, opts), conn_count_(sz(g.n()), 0) {}

    AlmostSepSystem run() {
        AlmostSepSystem out;
        const int t = st_.num_members();
        int every = opts_.full_check_every;
        if (every <= 0) every = g_.m() <= 5000 ? 1 : std::max(1, t / 16);
        check_light(out.stats);
        for (int i = 0; i < t; ++i) {
            auto paths = step(i, out.stats);
            for (auto& p : paths) {
                out.paths.paths.push_back(std::move(p));
                out.owner.push_back(i);
            }
            ++out.stats.iterations;
            check_light(out.stats);
            if ((i + 1) % every == 0 || i + 1 == t) check_full(out.stats);
        }
        for (std::size_t e = 0; e < g_.m(); ++e) out.stats.bookkeeping_separated += st_.in_e_[e] ? 1u : 0u;
        out.separated = separated_edges(g_, out.paths);
        for (std::size_t e = 0; e < g_.m(); ++e)
            if (st_.in_e_[e] && !out.separated[e]) out.stats.i1_ok = false;
        std::vector<int> deg(sz(g_.n()), 0);
        for (std::size_t e = 0; e < g_.m(); ++e)
            if (!out.separated[e]) {
                ++deg[sz(g_.edge(static_cast<int>(e)).u)];
                ++deg[sz(g_.edge(static_cast<int>(e)).v)];
            }
        for (int d : deg) out.remainder_max_degree = std::max(out.remainder_max_degree, d);
        return out;
    }

private:
    // Availability memo for the current member: -1 unknown, otherwise |E^f| or 0 when unavailable.
    // E^f and tightness are fixed within an iteration, only the used flags change.
    int damage(int f, int i) {
        if (st_.used_[sz(f)]) return 0;
        int& m = memo_[sz(f)];
        if (m < 0) {
            auto ef = st_.compute_ef(f, i);
            bool ok = true;
            for (int e : ef)
                if (st_.is_tight(g_.edge(e).u) || st_.is_tight(g_.edge(e).v)) ok = false;
            m = ok ? static_cast<int>(ef.size()) : 0;
        }
        return m;
    }

    std::vector<Path> step(int i, ConnectStats& stats) {
        auto frags = fragments(g_, st_.original_[sz(i)]);
        if (frags.empty()) return {};
        memo_.assign(g_.m(), -1);
        std::vector<char> blocked(sz(g_.n()), 0);
        for (const auto& fr : frags)
            for (int v : fr) blocked[sz(v)] = 1;
        std::vector<int> cur = std::move(frags.front());
        std::vector<std::vector<int>> rest(std::make_move_iterator(frags.begin() + 1), std::make_move_iterator(frags.end()));
        std::vector<int> new_edges;
        std::vector<int> demote;
        auto avail = [&](int f) { return damage(f, i) > 0; };

        while (!rest.empty()) {
            std::array<int, 2> ends{cur.front(), cur.back()};
            if (conn_count_[sz(ends[1])] < conn_count_[sz(ends[0])] ||
                (conn_count_[sz(ends[1])] == conn_count_[sz(ends[0])] && ends[1] < ends[0]))
                std::swap(ends[0], ends[1]);
            std::optional<Path> conn;
            std::size_t frag_k = 0;
            int x = -1;
            for (int cand_x : ends) {
                // direct edges first, least damage
                int best = 0;
                for (std::size_t k = 0; k < rest.size(); ++k)
                    for (int y : {rest[k].front(), rest[k].back()}) {
                        int f = g_.edge_id(cand_x, y);
                        if (f == kNoEdge) continue;
                        int dmg = damage(f, i);
                        if (dmg > 0 && (best == 0 || dmg < best)) {
                            best = dmg;
                            conn = Path{{cand_x, y}};
                            frag_k = k;
                        }
                    }
                for (int inner = 1; !conn && inner <= opts_.L; ++inner)
                    for (std::size_t k = 0; !conn && k < rest.size(); ++k)
                        for (int y : {rest[k].front(), rest[k].back()}) {
                            conn = find_path_with_inner(g_, cand_x, y, inner, blocked, avail);
                            if (conn) {
                                frag_k = k;
                                break;
                            }
                        }
                if (conn) {
                    x = cand_x;
                    break;
                }
            }
            if (!conn) break;

            if (cur.front() == x && cur.size() > 1) std::reverse(cur.begin(), cur.end());
            const auto& cv = conn->vertices;
            for (std::size_t k = 0; k + 1 < cv.size(); ++k) {
                int f = g_.edge_id(cv[k], cv[k + 1]);
                for (int e : st_.compute_ef(f, i))
                    if (e != f) demote.push_back(e);
                new_edges.push_back(f);
                st_.used_[sz(f)] = 1;
                ++conn_count_[sz(cv[k])];
                ++conn_count_[sz(cv[k + 1])];
            }
            for (std::size_t k = 1; k + 1 < cv.size(); ++k) {
                blocked[sz(cv[k])] = 1;
                cur.push_back(cv[k]);
            }
            auto frag = std::move(rest[frag_k]);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(frag_k));
            if (frag.front() != cv.back()) std::reverse(frag.begin(), frag.end());
            cur.insert(cur.end(), frag.begin(), frag.end());
            ++stats.connectors;
            stats.connector_edges += cv.size() - 1;
        }

        // E_i: drop E^f members, and connecting edges now lying in four or more members
        for (int f : new_edges) {
            auto& s = st_.sig_[sz(f)];
            s.insert(std::upper_bound(s.begin(), s.end(), i), i);
            st_.members_[sz(i)].push_back(f);
            if (s.size() > 3) demote.push_back(f);
        }
        std::sort(st_.members_[sz(i)].begin(), st_.members_[sz(i)].end());
        std::sort(demote.begin(), demote.end());
        demote.erase(std::unique(demote.begin(), demote.end()), demote.end());
        for (int e : demote) {
            if (!st_.in_e_[sz(e)]) continue;
            st_.in_e_[sz(e)] = 0;
            ++st_.rem_deg_[sz(g_.edge(e).u)];
            ++st_.rem_deg_[sz(g_.edge(e).v)];
            ++stats.demoted;
        }
        for (const auto& fr : fragments(g_, st_.original_[sz(i)])) {
            --st_.d_[sz(fr.front())];
            --st_.d_[sz(fr.back())];
        }

        std::vector<Path> out;
        out.push_back(Path{std::move(cur)});
        for (auto& fr : rest) out.push_back(Path{std::move(fr)});
        if (rest.empty()) {
            ++stats.members_glued;
        } else {
            ++stats.fallback_members;
            stats.extra_paths += static_cast<int>(rest.size());
        }
        return out;
    }

    // (I2) edges of E lie in at most three members; (I3) remainder degrees within budget.
    void check_light(ConnectStats& stats) const {
        for (std::size_t e = 0; e < g_.m(); ++e)
            if (st_.in_e_[e] && st_.sig_[e].size() > 3) stats.i2_ok = false;
        for (int u = 0; u < g_.n(); ++u) {
            const int d = st_.d_[sz(u)];
            const double deg = st_.rem_deg_[sz(u)];
            if (d == 0 ? deg > st_.free_thr_ : deg > st_.budget_thr_ - 2.0 * d) stats.i3_ok = false;
        }
    }

    // (I1) every edge of E is separated from all other edges by the current collection.
    void check_full(ConnectStats& stats) const {
        ++stats.full_checks;
        for (std::size_t e = 0; e < g_.m(); ++e)
            if (st_.in_e_[e] && !is_separated(st_.sig_, st_.members_, static_cast<int>(e))) stats.i1_ok = false;
    }

    const Graph& g_;
    const ConnectOptions& opts_;
    ConnectState st_;
    std::vector<int> conn_count_;
    std::vector<int> memo_;
};

AlmostSepSystem connect_paths(const Graph& g, const SeparatorCollection& s, const ConnectOptions& opts) {
    if (opts.L < 0) throw std::domain_error("L must be non-negative");
    Connector c(g, s, opts);
    return c.run();
}

nlohmann::json almost_sep_to_json(const Graph& g, const AlmostSepSystem& a) {
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& p : a.paths.paths) paths.push_back(p.vertices);
    nlohmann::json sep = nlohmann::json::array();
    for (std::size_t e = 0; e < g.m(); ++e)
        if (a.separated[e]) sep.push_back({g.edge(static_cast<int>(e)).u, g.edge(static_cast<int>(e)).v});
    return {{"paths", paths}, {"separated", sep}};
}

}  // namespace ssp
