#include "ssp/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "ssp/connectivity.hpp"
#include "ssp/leftover.hpp"
#include "ssp/refine.hpp"
#include "ssp/separator.hpp"
#include "ssp/util.hpp"

namespace ssp {

namespace {

std::vector<int> canonical(const Path& p) {
    std::vector<int> r(p.vertices.rbegin(), p.vertices.rend());
    return std::min(p.vertices, r);
}

void measure_connectivity(const Graph& g, const RunConfig& cfg, StageMetrics& st) {
    if (cfg.delta > 0 && cfg.L > 0) {
        st.delta = cfg.delta;
        st.L = cfg.L;
        return;
    }
    CertifyOptions opts;
    if (g.n() > 300) {
        opts.mode = CertMode::sampled;
        opts.samples = 4000;
        opts.seed = mix_seed(cfg.seed, 20);
    }
    const int lo = cfg.L > 0 ? cfg.L : 1;
    const int hi = cfg.L > 0 ? cfg.L : cfg.max_L;
    for (int L = lo; L <= hi; ++L) {
        double d = measure_robust_delta(g, L, opts);
        if (d > 0) {
            st.delta = d;
            st.L = L;
            st.delta_measured = true;
            return;
        }
    }
    throw StageFailure("connectivity", "no pair-count witness for L <= " + std::to_string(hi));
}

SeparatorBuild separator_stage(const Graph& g, const RunConfig& cfg, StageMetrics& st) {
    st.eps2_default = 1.0 - 1.0 / (1.0 + cfg.eps / 2.0);
    const double alpha = g.density();
    double eps2 = cfg.eps2 > 0 ? cfg.eps2 : st.eps2_default;
    std::string last;
    // The base 3-graph needs beta / lambda = 1 - eps2 small enough for its edge probabilities;
    // small hosts fail that, so eps2 grows until the parameters exist.
    for (int step = 0; step < 12 && eps2 < 0.95; ++step, eps2 = std::min(0.95, eps2 * 1.3)) {
        const double beta = std::sqrt(3.0 * alpha + 1.0) - 1.0;
        const double lambda = beta / (1.0 - eps2);
        const double eps_prime = cfg.eps_prime > 0
                                     ? cfg.eps_prime
                                     : choose_eps_prime(std::pow(eps2, st.L) * st.delta / 2.0, st.L, lambda);
        try {
            SeparatorBuildOptions opts;
            opts.validate.seed = mix_seed(cfg.seed, 13);
            auto b = build_separator(g, st.delta, st.L, eps2, eps_prime, mix_seed(cfg.seed, 10), opts);
            st.eps2 = eps2;
            st.eps_prime = eps_prime;
            st.beta = lambda;
            return b;
        } catch (const std::domain_error& e) {
            last = e.what();
            if (cfg.eps2 > 0) break;
        }
    }
    throw StageFailure("separator", "no feasible separator parameters: " + last);
}

}  // namespace

RunReport construct_ssp(const Graph& g, const RunConfig& cfg) {
    if (!(cfg.eps > 0 && cfg.eps < 1)) throw std::domain_error("eps must lie in (0,1)");
    if (g.n() < 3 || g.m() == 0) throw std::invalid_argument("graph too small");
    RunReport rep;
    rep.n = g.n();
    rep.m = g.m();
    rep.alpha = g.density();
    rep.eps = cfg.eps;
    rep.seed = cfg.seed;
    auto& st = rep.stages;

    measure_connectivity(g, cfg, st);
    auto sep = separator_stage(g, cfg, st);
    st.separator_t = sep.collection.t;
    st.separator_covered = sep.report.covered_edges;
    st.unmatched_arcs = sep.unmatched_arcs;
    st.base_attempts = sep.base_attempts;
    st.separator_structural_ok = sep.report.structural_ok();
    st.separator_targets_ok = sep.report.ok();

    auto broken = break_cycles(g, sep.collection, mix_seed(cfg.seed, 11));
    st.cycles_broken = static_cast<int>(broken.removed.size());

    ConnectOptions co;
    st.refine_eps = std::pow(cfg.eps * st.delta / (2400.0 * st.L), 2.0);
    co.eps = st.refine_eps;
    co.eps_prime = st.eps_prime;
    co.L = st.L;
    if (cfg.desk) co = calibrate_thresholds(g, broken.collection, co, std::ceil(cfg.tight_slack * g.n()) + 2);
    auto almost = connect_paths(g, broken.collection, co);
    st.almost_paths = almost.paths.size();
    st.fallback_members = almost.stats.fallback_members;
    st.connectors = almost.stats.connectors;
    st.invariants_ok = almost.stats.i1_ok && almost.stats.i2_ok && almost.stats.i3_ok;
    std::vector<int> rest;
    for (std::size_t e = 0; e < g.m(); ++e) {
        if (almost.separated[e]) ++st.separated_edges;
        else rest.push_back(static_cast<int>(e));
    }
    Graph j = g.edge_subgraph(rest);
    st.remainder_edges = j.m();
    st.remainder_max_degree = j.max_degree();
    st.remainder_target_ok = st.remainder_max_degree <= st.refine_eps * g.n();

    LeftoverOptions lo;
    lo.eps = st.refine_eps;
    int D = cfg.label_D;
    if (D <= 0 && cfg.desk) D = std::max(3, 8 * j.max_degree());
    PathPairCover cover;
    for (int attempt = 1;; ++attempt) {
        lo.labels.D = D;
        if (cfg.desk && cfg.label_D <= 0) lo.labels.max_resamples = 200000;
        try {
            cover = last_few_paths(g, j, st.delta, st.L, mix_seed(cfg.seed, 12, static_cast<std::uint64_t>(attempt)), lo);
            st.label_attempts = attempt;
            break;
        } catch (const LabelingFailure& e) {
            if (!cfg.desk || cfg.label_D > 0 || attempt == 20) throw StageFailure("leftover", e.what());
            D = static_cast<int>(std::ceil(D * 1.25));
        } catch (const CoverFailure& e) {
            throw StageFailure("leftover", e.what());
        } catch (const std::invalid_argument& e) {
            std::ostringstream msg;
            msg << e.what() << " (delta n = " << st.delta * g.n() << ", L = " << st.L << ")";
            throw StageFailure("leftover", msg.str());
        }
    }
    st.label_D = cover.D;
    st.resamples = cover.resamples;
    st.matchings = cover.t;
    st.parts = cover.r;
    st.quadruple_ok = cover.quadruple_ok;
    st.t_bound_ok = cover.t_bound_ok;
    st.r_bound_ok = cover.r_bound_ok;

    // P' = P cup R1 cup R2 as a set of paths: a repeated path separates nothing its copy does not.
    std::set<std::vector<int>> seen;
    auto add = [&](const Path& p) {
        if (seen.insert(canonical(p)).second) rep.paths.paths.push_back(p);
    };
    for (const auto& p : almost.paths.paths) add(p);
    const std::size_t before = rep.paths.size();
    for (const auto& p : cover.p) add(p);
    for (const auto& p : cover.q) add(p);
    st.leftover_paths = rep.paths.size() - before;

    rep.size = rep.paths.size();
    rep.ratio = static_cast<double>(rep.size) / g.n();
    rep.target_coefficient = std::sqrt(3.0 * rep.alpha + 1.0) - 1.0 + cfg.eps;
    rep.target_met = rep.ratio <= rep.target_coefficient;
    auto v = verify_separation(g, rep.paths, SeparationMode::strong, 0);
    rep.verified = v.ok;
    rep.violations = v.violation_count;
    rep.uncovered = v.uncovered.size();
    return rep;
}

nlohmann::json report_to_json(const RunReport& r) {
    const auto& s = r.stages;
    nlohmann::json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["alpha"] = r.alpha;
    j["eps"] = r.eps;
    j["seed"] = r.seed;
    j["size"] = r.size;
    j["ratio"] = r.ratio;
    j["target_coefficient"] = r.target_coefficient;
    j["target_met"] = r.target_met;
    j["verification"] = {{"mode", "strong"}, {"ok", r.verified}, {"violations", r.violations}, {"uncovered", r.uncovered}};
    j["connectivity"] = {{"delta", s.delta}, {"L", s.L}, {"measured", s.delta_measured}};
    j["separator"] = {{"eps2", s.eps2},
                      {"eps2_default", s.eps2_default},
                      {"eps_prime", s.eps_prime},
                      {"beta", s.beta},
                      {"t", s.separator_t},
                      {"covered_edges", s.separator_covered},
                      {"unmatched_arcs", s.unmatched_arcs},
                      {"base_attempts", s.base_attempts},
                      {"cycles_broken", s.cycles_broken},
                      {"structural_ok", s.separator_structural_ok},
                      {"targets_ok", s.separator_targets_ok}};
    j["refine"] = {{"paths", s.almost_paths},
                   {"fallback_members", s.fallback_members},
                   {"connectors", s.connectors},
                   {"separated_edges", s.separated_edges},
                   {"invariants_ok", s.invariants_ok},
                   {"eps", s.refine_eps},
                   {"remainder_edges", s.remainder_edges},
                   {"remainder_max_degree", s.remainder_max_degree},
                   {"remainder_target_ok", s.remainder_target_ok}};
    j["leftover"] = {{"D", s.label_D},
                     {"label_attempts", s.label_attempts},
                     {"resamples", s.resamples},
                     {"matchings", s.matchings},
                     {"parts", s.parts},
                     {"paths", s.leftover_paths},
                     {"quadruple_ok", s.quadruple_ok},
                     {"t_bound_ok", s.t_bound_ok},
                     {"r_bound_ok", s.r_bound_ok}};
    return j;
}

Graph make_family_graph(const std::string& family, int n, std::uint64_t seed) {
    if (family == "clique") return complete_graph(n);
    if (family == "bipartite") return complete_bipartite_graph(n);
    if (family == "random-regular") {
        int d = n / 2;
        if ((n * d) % 2 == 1) --d;
        return random_regular_graph(n, d, seed);
    }
    if (family == "expander-fixture") {
        int d = (n + 2) / 3;
        if ((n * d) % 2 == 1) ++d;
        return random_regular_graph(n, d, 7);
    }
    throw std::invalid_argument("unknown family: " + family);
}

void bench(const BenchOptions& opts, std::ostream& csv) {
    csv << "family,n,trial,seed,size,ratio,target,verified,violations,delta,L,separator_paths,leftover_paths,"
           "remainder_max_degree,label_D,status";
    if (opts.timing) csv << ",seconds";
    csv << '\n';
    struct Job {
        std::string family;
        int n, trial;
    };
    std::vector<Job> jobs;
    for (const auto& f : opts.families)
        for (int n : opts.sizes)
            for (int t = 0; t < opts.trials; ++t) jobs.push_back({f, n, t});
    std::vector<std::string> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        const auto& job = jobs[k];
        const std::uint64_t seed = mix_seed(opts.seed, static_cast<std::uint64_t>(job.n), static_cast<std::uint64_t>(job.trial));
        std::ostringstream row;
        row << job.family << ',' << job.n << ',' << job.trial << ',' << seed << ',';
        auto t0 = std::chrono::steady_clock::now();
        try {
            Graph g = make_family_graph(job.family, job.n, seed);
            RunConfig cfg;
            cfg.eps = opts.eps;
            cfg.seed = seed;
            auto r = construct_ssp(g, cfg);
            row << r.size << ',' << r.ratio << ',' << r.target_coefficient << ',' << (r.verified ? 1 : 0) << ','
                << r.violations << ',' << r.stages.delta << ',' << r.stages.L << ',' << r.stages.almost_paths << ','
                << r.stages.leftover_paths << ',' << r.stages.remainder_max_degree << ',' << r.stages.label_D << ",ok";
        } catch (const std::exception& e) {
            std::string what = e.what();
            std::replace(what.begin(), what.end(), ',', ';');
            if (const auto* sf = dynamic_cast<const StageFailure*>(&e)) what = sf->stage() + ": " + what;
            row << ",,,,,,,,,,,error: " << what;
        }
        if (opts.timing)
            row << ',' << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows[k] = row.str();
    });
    for (const auto& r : rows) csv << r << '\n';
}

}  // namespace ssp
