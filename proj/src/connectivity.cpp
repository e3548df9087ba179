#include "ssp/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>

namespace ssp {

AdjacencyBits::AdjacencyBits(const Graph& g) : n_(g.n()) {
    rows_.assign(static_cast<std::size_t>(n_), Bitset(static_cast<std::size_t>(n_)));
    for (const auto& e : g.edges()) {
        rows_[static_cast<std::size_t>(e.u)].set(static_cast<std::size_t>(e.v));
        rows_[static_cast<std::size_t>(e.v)].set(static_cast<std::size_t>(e.u));
    }
}

std::uint64_t count_internal_paths(const AdjacencyBits& adj, int x, int y, int ell, const Bitset& forbidden) {
    if (ell < 1 || ell > kMaxInnerVertices) {
        throw std::domain_error("path counting supports 1 to 4 inner vertices, got " + std::to_string(ell));
    }
    if (x == y) throw std::invalid_argument("path endpoints must differ");
    const auto n = static_cast<std::size_t>(adj.n());
    Bitset allowed(n);
    allowed.set_all();
    if (forbidden.size() == n) allowed.and_not(forbidden);
    allowed.reset(static_cast<std::size_t>(x));
    allowed.reset(static_cast<std::size_t>(y));

    const Bitset& ny = adj[y];
    Bitset start = adj[x];
    start &= allowed;
    // to_y[v] = |N(v) & N(y) & A|, the number of ways to finish from v with one more inner vertex.
    auto to_y = [&](int v) { return static_cast<std::uint64_t>(popcount_and(adj[v], ny, allowed)); };

    std::uint64_t total = 0;
    if (ell == 1) return popcount_and(adj[x], ny, allowed);
    if (ell == 2) {
        start.for_each([&](std::size_t a) { total += to_y(static_cast<int>(a)); });
        return total;
    }
    if (ell == 3) {
        start.for_each([&](std::size_t a) {
            const auto deg_a = static_cast<std::uint64_t>(popcount_and(adj[static_cast<int>(a)], allowed));
            std::uint64_t s = 0;
            adj[static_cast<int>(a)].for_each([&](std::size_t b) {
                if (allowed.test(b)) s += to_y(static_cast<int>(b));
            });
            // x-a-b-c-y with c == a is not a path
            if (ny.test(a)) s -= deg_a;
            total += s;
        });
        return total;
    }
    start.for_each([&](std::size_t a) {
        const Bitset& na = adj[static_cast<int>(a)];
        na.for_each([&](std::size_t b) {
            if (!allowed.test(b)) return;
            const bool b_to_y = ny.test(b);
            adj[static_cast<int>(b)].for_each([&](std::size_t c) {
                if (c == a || !allowed.test(c)) return;
                const Bitset& nc = adj[static_cast<int>(c)];
                std::uint64_t d = to_y(static_cast<int>(c));
                if (nc.test(a) && ny.test(a)) --d;
                if (b_to_y) --d;  // b is always a neighbour of c
                total += d;
            });
        });
    });
    return total;
}

std::optional<Path> find_path_with_inner(const Graph& g, int x, int y, int inner, const std::vector<char>& blocked,
                                         const std::function<bool(int)>& edge_ok) {
    if (x == y) throw std::invalid_argument("path ends must differ");
    Path p;
    p.vertices.push_back(x);
    std::vector<char> on(static_cast<std::size_t>(g.n()), 0);
    on[static_cast<std::size_t>(x)] = on[static_cast<std::size_t>(y)] = 1;
    std::function<bool(int, int)> go = [&](int v, int depth) {
        if (depth == inner) {
            int f = g.edge_id(v, y);
            if (f == kNoEdge || !edge_ok(f)) return false;
            p.vertices.push_back(y);
            return true;
        }
        auto nb = g.neighbors(v);
        auto ids = g.incident_edges(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const auto w = static_cast<std::size_t>(nb[k]);
            if (on[w] || blocked[w] || !edge_ok(ids[k])) continue;
            on[w] = 1;
            p.vertices.push_back(nb[k]);
            if (go(nb[k], depth + 1)) return true;
            p.vertices.pop_back();
            on[w] = 0;
        }
        return false;
    };
    if (go(x, 0)) return p;
    return std::nullopt;
}

std::uint64_t count_internal_paths(const Graph& g, int x, int y, int ell, const std::vector<int>& forbidden) {
    AdjacencyBits adj(g);
    Bitset f(static_cast<std::size_t>(g.n()));
    for (int v : forbidden) f.set(static_cast<std::size_t>(v));
    return count_internal_paths(adj, x, y, ell, f);
}

namespace {

struct PairResult {
    PairWitness witness;  // smallest passing ell, or the best ell on failure
    double best_ratio = 0;
    bool ok = false;
};

PairResult check_pair(const AdjacencyBits& adj, int x, int y, int L, double delta, const Bitset& forbidden) {
    PairResult r;
    r.witness = {x, y, 0, 0, -1.0};
    r.best_ratio = -1;
    const double n = adj.n();
    for (int ell = 1; ell <= L; ++ell) {
        auto c = count_internal_paths(adj, x, y, ell, forbidden);
        double ratio = static_cast<double>(c) / std::pow(n, ell);
        if (!r.ok && (ratio >= delta || ratio > r.witness.ratio)) r.witness = {x, y, ell, c, ratio};
        if (ratio >= delta) r.ok = true;
        r.best_ratio = std::max(r.best_ratio, ratio);
    }
    return r;
}

std::vector<std::pair<int, int>> pairs_to_check(const std::vector<int>& vs, const CertifyOptions& opts) {
    std::vector<std::pair<int, int>> pairs;
    const std::size_t k = vs.size();
    if (k < 2) return pairs;
    const std::uint64_t all = static_cast<std::uint64_t>(k) * (k - 1) / 2;
    if (opts.mode == CertMode::exact || opts.samples >= all) {
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) pairs.emplace_back(vs[a], vs[b]);
        return pairs;
    }
    Rng rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        pairs.emplace_back(vs[std::min(a, b)], vs[std::max(a, b)]);
    }
    return pairs;
}

}  // namespace

RobustConnCertificate certify_robust_connectivity(const Graph& g, double delta, int L, const CertifyOptions& opts,
                                                  const std::vector<int>& vertices, const std::vector<int>& forbidden) {
    if (L < 1 || L > kMaxInnerVertices) {
        throw std::domain_error("robust connectivity can be certified for L in [1, 4], got " + std::to_string(L));
    }
    RobustConnCertificate cert;
    cert.delta = delta;
    cert.L = L;
    cert.mode = opts.mode;
    std::vector<int> vs = vertices;
    if (vs.empty()) {
        vs.resize(static_cast<std::size_t>(g.n()));
        for (int v = 0; v < g.n(); ++v) vs[static_cast<std::size_t>(v)] = v;
    }
    AdjacencyBits adj(g);
    Bitset forb(static_cast<std::size_t>(g.n()));
    for (int v : forbidden) forb.set(static_cast<std::size_t>(v));

    auto pairs = pairs_to_check(vs, opts);
    std::vector<PairResult> results(pairs.size());
    // Chunks keep the early exit effective while still spreading work across threads.
    const std::size_t chunk = 256;
    cert.ok = true;
    cert.min_ratio = pairs.empty() ? 0.0 : 1e300;
    for (std::size_t lo = 0; lo < pairs.size(); lo += chunk) {
        const std::size_t hi = std::min(pairs.size(), lo + chunk);
        parallel_for(hi - lo, [&](std::size_t k) {
            auto [x, y] = pairs[lo + k];
            results[lo + k] = check_pair(adj, x, y, L, delta, forb);
        });
        for (std::size_t k = lo; k < hi; ++k) {
            ++cert.pairs_checked;
            const auto& r = results[k];
            cert.min_ratio = std::min(cert.min_ratio, r.best_ratio);
            if (!r.ok) {
                if (!cert.refusal || r.witness.ratio < cert.refusal->ratio) cert.refusal = r.witness;
                cert.ok = false;
            } else {
                cert.worst.push_back(r.witness);
            }
        }
        if (!cert.ok && opts.stop_at_failure) break;
    }
    std::stable_sort(cert.worst.begin(), cert.worst.end(),
                     [](const PairWitness& a, const PairWitness& b) { return a.ratio < b.ratio; });
    if (cert.worst.size() > opts.keep_worst) cert.worst.resize(opts.keep_worst);
    return cert;
}

double measure_robust_delta(const Graph& g, int L, const CertifyOptions& opts) {
    CertifyOptions o = opts;
    o.stop_at_failure = false;
    // delta = 0 makes every pair pass, so min_ratio covers all checked pairs.
    return certify_robust_connectivity(g, 0.0, L, o).min_ratio;
}

namespace {

nlohmann::json witness_json(const PairWitness& w) {
    return {{"x", w.x}, {"y", w.y}, {"ell", w.ell}, {"count", w.count}, {"ratio", w.ratio}};
}

PairWitness witness_from(const nlohmann::json& j) {
    return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("ell").get<int>(), j.at("count").get<std::uint64_t>(),
            j.at("ratio").get<double>()};
}

}  // namespace

nlohmann::json certificate_to_json(const RobustConnCertificate& c) {
    nlohmann::json j;
    j["delta"] = c.delta;
    j["L"] = c.L;
    j["mode"] = c.mode == CertMode::exact ? "exact" : "sampled";
    j["ok"] = c.ok;
    j["pairs_checked"] = c.pairs_checked;
    j["min_ratio"] = c.min_ratio;
    j["worst"] = nlohmann::json::array();
    for (const auto& w : c.worst) j["worst"].push_back(witness_json(w));
    j["refusal"] = c.refusal ? witness_json(*c.refusal) : nlohmann::json(nullptr);
    return j;
}

RobustConnCertificate certificate_from_json(const nlohmann::json& j) {
    RobustConnCertificate c;
    c.delta = j.at("delta").get<double>();
    c.L = j.at("L").get<int>();
    c.mode = j.at("mode").get<std::string>() == "exact" ? CertMode::exact : CertMode::sampled;
    c.ok = j.at("ok").get<bool>();
    c.pairs_checked = j.at("pairs_checked").get<std::uint64_t>();
    c.min_ratio = j.at("min_ratio").get<double>();
    for (const auto& w : j.at("worst")) c.worst.push_back(witness_from(w));
    if (!j.at("refusal").is_null()) c.refusal = witness_from(j.at("refusal"));
    return c;
}

RobustConnCertificate cached_certificate(const Graph& g, double delta, int L, const CertifyOptions& opts,
                                         const std::string& cache_path) {
    nlohmann::json cache = nlohmann::json::object();
    {
        std::ifstream in(cache_path);
        if (in) {
            try {
                in >> cache;
            } catch (const nlohmann::json::exception&) {
                cache = nlohmann::json::object();
            }
        }
    }
    char key[160];
    std::snprintf(key, sizeof key, "%016llx/%.17g/%d/%s/%llu/%llu", static_cast<unsigned long long>(g.hash()), delta, L,
                  opts.mode == CertMode::exact ? "exact" : "sampled", static_cast<unsigned long long>(opts.samples),
                  static_cast<unsigned long long>(opts.seed));
    if (cache.contains(key)) return certificate_from_json(cache[key]);
    auto cert = certify_robust_connectivity(g, delta, L, opts);
    cache[key] = certificate_to_json(cert);
    std::ofstream out(cache_path);
    if (out) out << cache.dump(1) << "\n";
    return cert;
}

std::vector<int> robust_neighbourhood(const Graph& g, const std::vector<int>& s, double nu) {
    std::vector<char> in_s(static_cast<std::size_t>(g.n()), 0);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = 1;
    const double need = nu * g.n();
    std::vector<int> out;
    for (int v = 0; v < g.n(); ++v) {
        int c = 0;
        for (int w : g.neighbors(v)) c += in_s[static_cast<std::size_t>(w)];
        if (c >= need) out.push_back(v);
    }
    return out;
}

ExpanderReport check_robust_expander(const Graph& g, double nu, double tau, CertMode mode, std::uint64_t seed,
                                     std::uint64_t samples) {
    if (!(nu > 0 && nu <= tau && tau <= 1)) throw std::domain_error("expander parameters need 0 < nu <= tau <= 1");
    const int n = g.n();
    const double lo = tau * n, hi = (1.0 - tau) * n;
    ExpanderReport rep;
    rep.worst_margin = 1e300;
    auto consider = [&](const std::vector<int>& s) {
        ++rep.sets_checked;
        double margin = static_cast<double>(robust_neighbourhood(g, s, nu).size()) - static_cast<double>(s.size()) - nu * n;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness = s;
        }
        if (margin < 0) rep.ok = false;
    };
    if (mode == CertMode::exact) {
        if (n > 20) throw std::domain_error("exact expander check enumerates 2^n sets; n must be at most 20");
        std::vector<int> s;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            int k = std::popcount(mask);
            if (k < lo || k > hi) continue;
            s.clear();
            for (int v = 0; v < n; ++v)
                if (mask >> v & 1U) s.push_back(v);
            consider(s);
        }
    } else {
        rep.exhaustive = false;
        const int kmin = static_cast<int>(std::ceil(lo)), kmax = static_cast<int>(std::floor(hi));
        if (kmin <= kmax) {
            Rng rng(seed);
            std::uniform_int_distribution<int> size_dist(kmin, kmax);
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
            for (std::uint64_t t = 0; t < samples; ++t) {
                std::shuffle(perm.begin(), perm.end(), rng);
                std::vector<int> s(perm.begin(), perm.begin() + size_dist(rng));
                std::sort(s.begin(), s.end());
                consider(s);
            }
        }
    }
    if (rep.sets_checked == 0) rep.worst_margin = 0;
    return rep;
}

ConnParams expander_to_connectivity(double nu, double tau) {
    if (!(nu > 0 && nu <= tau && tau <= 1)) throw std::domain_error("expander parameters need 0 < nu <= tau <= 1");
    ConnParams p;
    // The small offset keeps 1/nu from rounding up past an exact integer.
    p.L = static_cast<int>(std::ceil(1.0 / nu - 1e-12));
    p.delta = std::pow(nu / 4.0, p.L) * std::pow(4.0, -static_cast<double>(p.L) * p.L);
    return p;
}

}  // namespace ssp
