#include "ssp/separation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ssp {

const char* to_string(SeparationMode mode) { return mode == SeparationMode::weak ? "weak" : "strong"; }

SeparationMode parse_separation_mode(const std::string& s) {
    if (s == "weak") return SeparationMode::weak;
    if (s == "strong") return SeparationMode::strong;
    throw std::invalid_argument("unknown separation mode: " + s);
}

PathCheck validate_path_system(const Graph& g, const PathSystem& ps) {
    for (std::size_t i = 0; i < ps.paths.size(); ++i) {
        try {
            path_edge_ids(g, ps.paths[i], i);
        } catch (const InvalidPathError& err) {
            return {false, i, err.what()};
        }
    }
    return {};
}

std::vector<std::vector<int>> path_edge_lists(const Graph& g, const PathSystem& ps) {
    std::vector<std::vector<int>> out;
    out.reserve(ps.paths.size());
    for (std::size_t i = 0; i < ps.paths.size(); ++i) out.push_back(path_edge_ids(g, ps.paths[i], i));
    return out;
}

namespace {

Signatures signatures_from_lists(std::size_t m, const std::vector<std::vector<int>>& lists) {
    Signatures sig(m);
    for (std::size_t i = 0; i < lists.size(); ++i)
        for (int e : lists[i]) sig[static_cast<std::size_t>(e)].push_back(static_cast<int>(i));
    return sig;
}

bool contained(const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() <= b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Signatures edge_signatures(const Graph& g, const PathSystem& ps) {
    return signatures_from_lists(g.m(), path_edge_lists(g, ps));
}

bool is_separated(const Signatures& sig, const std::vector<std::vector<int>>& path_edges, int e) {
    const auto& se = sig[static_cast<std::size_t>(e)];
    if (se.empty()) return false;
    int best = se.front();
    for (int p : se)
        if (path_edges[static_cast<std::size_t>(p)].size() < path_edges[static_cast<std::size_t>(best)].size()) best = p;
    for (int f : path_edges[static_cast<std::size_t>(best)]) {
        if (f != e && contained(se, sig[static_cast<std::size_t>(f)])) return false;
    }
    return true;
}

std::vector<char> separated_edges(const Graph& g, const PathSystem& ps) {
    auto lists = path_edge_lists(g, ps);
    auto sig = signatures_from_lists(g.m(), lists);
    std::vector<char> out(g.m(), 0);
    for (std::size_t e = 0; e < g.m(); ++e) out[e] = is_separated(sig, lists, static_cast<int>(e)) ? 1 : 0;
    return out;
}

SeparationReport verify_separation(const Graph& g, const PathSystem& ps, SeparationMode mode, std::size_t max_listed) {
    auto lists = path_edge_lists(g, ps);
    auto sig = signatures_from_lists(g.m(), lists);
    const std::size_t m = g.m();

    SeparationReport rep;
    rep.mode = mode;
    auto record = [&](std::size_t e, std::size_t f) {
        ++rep.violation_count;
        if (rep.violations.size() < max_listed) {
            rep.violations.emplace_back(g.edge(static_cast<int>(e)), g.edge(static_cast<int>(f)));
        } else {
            rep.truncated = true;
        }
    };

    for (std::size_t e = 0; e < m; ++e)
        if (sig[e].empty()) rep.uncovered.push_back(g.edge(static_cast<int>(e)));

    if (mode == SeparationMode::strong) {
        for (std::size_t e = 0; e < m; ++e) {
            const auto& se = sig[e];
            if (se.empty()) {
                // The empty signature sits inside every other one.
                if (m < 2) continue;
                std::size_t listable = max_listed > rep.violations.size() ? max_listed - rep.violations.size() : 0;
                for (std::size_t f = 0; f < m && listable > 0; ++f) {
                    if (f == e) continue;
                    rep.violations.emplace_back(g.edge(static_cast<int>(e)), g.edge(static_cast<int>(f)));
                    --listable;
                }
                rep.violation_count += m - 1;
                continue;
            }
            int best = se.front();
            for (int p : se)
                if (lists[static_cast<std::size_t>(p)].size() < lists[static_cast<std::size_t>(best)].size()) best = p;
            std::vector<int> cand = lists[static_cast<std::size_t>(best)];
            std::sort(cand.begin(), cand.end());
            for (int f : cand) {
                if (static_cast<std::size_t>(f) != e && contained(se, sig[static_cast<std::size_t>(f)])) {
                    record(e, static_cast<std::size_t>(f));
                }
            }
        }
    } else {
        std::map<std::vector<int>, std::vector<std::size_t>> groups;
        for (std::size_t e = 0; e < m; ++e) groups[sig[e]].push_back(e);
        std::vector<std::vector<std::size_t>> clashes;
        for (auto& [key, members] : groups)
            if (members.size() > 1) clashes.push_back(members);
        std::vector<std::vector<std::size_t>*> by_edge(m, nullptr);
        for (auto& c : clashes)
            for (auto e : c) by_edge[e] = &c;
        for (std::size_t e = 0; e < m; ++e) {
            if (!by_edge[e]) continue;
            for (auto f : *by_edge[e])
                if (f != e) record(e, f);
        }
    }
    rep.truncated = rep.violation_count > rep.violations.size();
    rep.ok = rep.violation_count == 0;
    return rep;
}

}  // namespace ssp
