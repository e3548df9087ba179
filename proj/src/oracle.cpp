#include "ssp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ssp/separation.hpp"

namespace ssp {

int sperner_lower_bound(std::size_t m) {
    if (m == 0) return 0;
    for (int k = 1;; ++k) {
        // C(k, k/2) grows fast; double is exact well past any m <= 64.
        double c = 1.0;
        for (int i = 1; i <= k / 2; ++i) c = c * (k - k / 2 + i) / i;
        if (c >= static_cast<double>(m)) return k;
    }
}

namespace {

struct Candidate {
    std::uint64_t mask = 0;
    std::vector<int> vertices;
    int length = 0;
};

std::vector<Candidate> enumerate_paths(const Graph& g) {
    std::vector<Candidate> out;
    std::vector<int> stack;
    std::vector<char> on(static_cast<std::size_t>(g.n()), 0);
    auto dfs = [&](auto&& self, int v, std::uint64_t mask) -> void {
        for (std::size_t k = 0; k < g.neighbors(v).size(); ++k) {
            int w = g.neighbors(v)[k];
            if (on[static_cast<std::size_t>(w)]) continue;
            std::uint64_t nm = mask | (std::uint64_t{1} << g.incident_edges(v)[k]);
            stack.push_back(w);
            on[static_cast<std::size_t>(w)] = 1;
            // Each undirected path is found from both ends; keep the copy starting at the smaller end.
            if (stack.front() < w) out.push_back({nm, stack, static_cast<int>(stack.size()) - 1});
            self(self, w, nm);
            on[static_cast<std::size_t>(w)] = 0;
            stack.pop_back();
        }
    };
    for (int s = 0; s < g.n(); ++s) {
        stack = {s};
        on[static_cast<std::size_t>(s)] = 1;
        dfs(dfs, s, 0);
        on[static_cast<std::size_t>(s)] = 0;
    }
    return out;
}

bool is_complete(const Graph& g) {
    long long n = g.n();
    return n >= 3 && static_cast<long long>(g.m()) == n * (n - 1) / 2;
}

class Search {
public:
    Search(const Graph& g, const OracleBudget& budget)
        : budget_(budget), start_(std::chrono::steady_clock::now()), m_(g.m()) {}

    std::uint64_t nodes() const { return nodes_; }
    bool exhausted() const { return out_of_budget_; }

    // Tries to find k paths from `pool` (plus the forced ones) forming a strong-separating system.
    bool run(const std::vector<Candidate>& pool, const std::vector<Candidate>& forced, int k,
             std::vector<const Candidate*>& chosen) {
        pool_ = &pool;
        chosen.clear();
        for (const auto& f : forced) chosen.push_back(&f);
        if (static_cast<int>(chosen.size()) > k) return false;
        max_len_suffix_.assign(pool.size() + 1, 0);
        for (std::size_t i = pool.size(); i-- > 0;)
            max_len_suffix_[i] = std::max(max_len_suffix_[i + 1], pool[i].length);
        return dfs(0, k, chosen);
    }

private:
    bool tick() {
        ++nodes_;
        if (budget_.max_nodes != 0 && nodes_ > budget_.max_nodes) out_of_budget_ = true;
        if (budget_.max_seconds > 0.0 && (nodes_ & 1023U) == 0) {
            std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
            if (el.count() > budget_.max_seconds) out_of_budget_ = true;
        }
        return !out_of_budget_;
    }

    bool separating(const std::vector<const Candidate*>& chosen) const {
        std::vector<std::uint64_t> sig(m_, 0);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            std::uint64_t mk = chosen[i]->mask;
            while (mk) {
                int e = std::countr_zero(mk);
                sig[static_cast<std::size_t>(e)] |= std::uint64_t{1} << i;
                mk &= mk - 1;
            }
        }
        for (std::size_t e = 0; e < m_; ++e) {
            if (sig[e] == 0) return false;
            for (std::size_t f = 0; f < m_; ++f)
                if (f != e && (sig[e] & ~sig[f]) == 0) return false;
        }
        return true;
    }

    bool dfs(std::size_t from, int k, std::vector<const Candidate*>& chosen) {
        if (!tick()) return false;
        int remaining = k - static_cast<int>(chosen.size());
        std::uint64_t covered = 0;
        for (auto* c : chosen) covered |= c->mask;
        int uncovered = static_cast<int>(m_) - std::popcount(covered);
        if (remaining == 0) return uncovered == 0 && separating(chosen);
        if (from >= pool_->size()) return false;
        if (uncovered > remaining * max_len_suffix_[from]) return false;
        for (std::size_t i = from; i + static_cast<std::size_t>(remaining) <= pool_->size(); ++i) {
            if (uncovered > remaining * max_len_suffix_[i]) break;
            chosen.push_back(&(*pool_)[i]);
            if (dfs(i + 1, k, chosen)) return true;
            chosen.pop_back();
            if (out_of_budget_) return false;
        }
        return false;
    }

    OracleBudget budget_;
    std::chrono::steady_clock::time_point start_;
    std::size_t m_;
    const std::vector<Candidate>* pool_ = nullptr;
    std::vector<int> max_len_suffix_;
    std::uint64_t nodes_ = 0;
    bool out_of_budget_ = false;
};

std::uint64_t relabeled_hash(const Graph& g, const std::vector<int>& perm) {
    std::vector<Edge> edges;
    edges.reserve(g.m());
    for (const auto& e : g.edges())
        edges.push_back(make_edge(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]));
    return Graph(g.n(), std::move(edges)).hash();
}

// Returns (key, perm) where perm maps original labels to the labeling the key was computed in.
std::pair<std::uint64_t, std::vector<int>> canonical_key(const Graph& g) {
    std::vector<int> perm(static_cast<std::size_t>(g.n()));
    std::iota(perm.begin(), perm.end(), 0);
    if (g.n() > 8) return {g.hash(), perm};
    std::uint64_t best = relabeled_hash(g, perm);
    std::vector<int> best_perm = perm;
    while (std::next_permutation(perm.begin(), perm.end())) {
        std::uint64_t h = relabeled_hash(g, perm);
        if (h < best) {
            best = h;
            best_perm = perm;
        }
    }
    return {best, best_perm};
}

std::string hex(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex << x;
    return os.str();
}

nlohmann::json load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return nlohmann::json::object();
    try {
        auto j = nlohmann::json::parse(in);
        if (j.is_object()) return j;
    } catch (const nlohmann::json::exception&) {
    }
    return nlohmann::json::object();
}

}  // namespace

OracleResult exact_ssp(const Graph& g, const OracleBudget& budget, const std::string& cache_path) {
    if (g.m() > 64) throw std::invalid_argument("exact_ssp handles at most 64 edges");
    OracleResult res;
    if (g.m() == 0) {
        res.conclusive = true;
        res.value = 0;
        return res;
    }

    std::uint64_t key = 0;
    std::vector<int> perm;
    if (!cache_path.empty()) {
        std::tie(key, perm) = canonical_key(g);
        auto cache = load_cache(cache_path);
        auto it = cache.find(hex(key));
        if (it != cache.end() && it->contains("value") && it->contains("paths")) {
            std::vector<int> inv(perm.size());
            for (std::size_t v = 0; v < perm.size(); ++v) inv[static_cast<std::size_t>(perm[v])] = static_cast<int>(v);
            PathSystem ps;
            for (const auto& p : (*it)["paths"]) {
                Path path;
                for (int v : p.get<std::vector<int>>()) {
                    if (v < 0 || static_cast<std::size_t>(v) >= inv.size()) break;
                    path.vertices.push_back(inv[static_cast<std::size_t>(v)]);
                }
                ps.paths.push_back(std::move(path));
            }
            int value = (*it)["value"].get<int>();
            if (validate_path_system(g, ps).ok && static_cast<int>(ps.size()) == value &&
                verify_separation(g, ps, SeparationMode::strong).ok) {
                res.conclusive = true;
                res.value = value;
                res.refuted_below = value;
                res.witness = std::move(ps);
                res.from_cache = true;
                return res;
            }
        }
    }

    auto all = enumerate_paths(g);
    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.length != b.length) return a.length > b.length;
        return a.vertices < b.vertices;
    });

    Search search(g, budget);
    std::vector<const Candidate*> chosen;
    const bool clique = is_complete(g);
    int max_len = all.empty() ? 0 : all.front().length;

    bool found = false;
    for (int k = sperner_lower_bound(g.m()); k <= static_cast<int>(g.m()) && !found; ++k) {
        if (clique) {
            for (int ell = max_len; ell >= 1 && !found; --ell) {
                Candidate forced;
                forced.length = ell;
                for (int v = 0; v <= ell; ++v) forced.vertices.push_back(v);
                for (int v = 0; v < ell; ++v) forced.mask |= std::uint64_t{1} << g.edge_id(v, v + 1);
                std::vector<Candidate> pool;
                for (const auto& c : all)
                    if (c.length <= ell && c.mask != forced.mask) pool.push_back(c);
                std::vector<Candidate> fixed{forced};
                found = search.run(pool, fixed, k, chosen);
                if (found) {
                    res.witness.paths.clear();
                    for (auto* c : chosen) res.witness.paths.push_back({c->vertices});
                }
                if (search.exhausted()) break;
            }
        } else {
            found = search.run(all, {}, k, chosen);
            if (found) {
                for (auto* c : chosen) res.witness.paths.push_back({c->vertices});
            }
        }
        if (search.exhausted()) break;
        if (found) {
            res.conclusive = true;
            res.value = k;
        }
        res.refuted_below = found ? k : k + 1;
    }
    res.nodes = search.nodes();
    if (!res.conclusive) return res;

    if (!cache_path.empty()) {
        auto cache = load_cache(cache_path);
        nlohmann::json paths = nlohmann::json::array();
        for (const auto& p : res.witness.paths) {
            std::vector<int> relabeled;
            for (int v : p.vertices) relabeled.push_back(perm[static_cast<std::size_t>(v)]);
            paths.push_back(relabeled);
        }
        cache[hex(key)] = {{"n", g.n()}, {"m", g.m()}, {"value", res.value}, {"paths", paths}};
        std::ofstream out(cache_path);
        out << cache.dump(2) << "\n";
    }
    return res;
}

}  // namespace ssp
