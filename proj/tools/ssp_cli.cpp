#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssp/bounds.hpp"
#include "ssp/connectivity.hpp"
#include "ssp/driver.hpp"
#include "ssp/io.hpp"
#include "ssp/oracle.hpp"
#include "ssp/separation.hpp"
#include "ssp/separator.hpp"

using namespace ssp;
using nlohmann::json;

namespace {

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

json edge_json(const Edge& e) { return json::array({e.u, e.v}); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong-separating path systems: construction, verification and bounds"};
    app.require_subcommand(1);

    long long b_n = 0;
    double b_alpha = 1.0, b_eps = 0.0;
    auto* bounds = app.add_subcommand("bounds", "Lower bounds on the size of a strong-separating path system");
    bounds->add_option("--n", b_n, "vertices")->required()->check(CLI::Range(3LL, 1LL << 40));
    bounds->add_option("--alpha", b_alpha, "edge density")->check(CLI::Range(0.0, 1.0));
    bounds->add_option("--eps", b_eps, "slack subtracted from the coefficient")->check(CLI::Range(0.0, 1.0));

    std::string c_graph, c_family, c_out, c_report;
    int c_n = 0;
    RunConfig cfg;
    auto* construct = app.add_subcommand("construct", "Build a strong-separating path system");
    auto* c_graph_opt = construct->add_option("--graph", c_graph, "edge list file");
    auto* c_family_opt = construct->add_option("--family", c_family, "clique|bipartite|random-regular|expander-fixture");
    c_graph_opt->excludes(c_family_opt);
    construct->add_option("--n", c_n, "vertices for --family");
    construct->add_option("--eps", cfg.eps, "target slack")->check(CLI::Range(0.0, 1.0));
    construct->add_option("--seed", cfg.seed, "seed");
    construct->add_option("--out", c_out, "path system JSON output")->required();
    construct->add_option("--report", c_report, "report JSON output (default: stdout)");
    construct->add_option("--delta", cfg.delta, "robust connectivity delta (measured when omitted)");
    construct->add_option("--L", cfg.L, "robust connectivity L");
    construct->add_option("--eps2", cfg.eps2, "separator eps override");
    construct->add_option("--eps-prime", cfg.eps_prime, "refine eps' override");
    construct->add_option("--label-d", cfg.label_D, "fixed label count for the leftover matchings");
    construct->add_flag("!--no-desk", cfg.desk, "use the stated constants without desk calibration");

    std::string v_graph, v_paths, v_mode = "strong";
    auto* verify = app.add_subcommand("verify", "Check a path system against a graph");
    verify->add_option("--graph", v_graph, "edge list file")->required();
    verify->add_option("--paths", v_paths, "path system JSON")->required();
    verify->add_option("--mode", v_mode, "weak|strong")->check(CLI::IsMember({"weak", "strong"}));

    std::string o_graph, o_cache;
    double o_budget = 0;
    auto* oracle = app.add_subcommand("oracle", "Exact minimum by exhaustive search (small graphs)");
    oracle->add_option("--graph", o_graph, "edge list file")->required();
    oracle->add_option("--budget", o_budget, "seconds (0 = unlimited)");
    oracle->add_option("--cache", o_cache, "result cache file");

    BenchOptions bopt;
    std::string b_csv;
    auto* benchc = app.add_subcommand("bench", "Benchmark families and sizes into CSV");
    benchc->add_option("--family", bopt.families, "family list")->delimiter(',');
    benchc->add_option("--sizes", bopt.sizes, "size list")->delimiter(',');
    benchc->add_option("--trials", bopt.trials, "trials per size")->check(CLI::PositiveNumber);
    benchc->add_option("--seed", bopt.seed, "seed");
    benchc->add_option("--eps", bopt.eps, "target slack")->check(CLI::Range(0.0, 1.0));
    benchc->add_option("--csv", b_csv, "CSV output (default: stdout)");
    benchc->add_flag("--timing", bopt.timing, "append wall time per row");

    std::string k_graph;
    double k_delta = 0;
    int k_L = 1;
    std::uint64_t k_sampled = 0, k_seed = 0;
    auto* certify = app.add_subcommand("certify", "Robust connectivity certificate");
    certify->add_option("--graph", k_graph, "edge list file")->required();
    certify->add_option("--delta", k_delta, "delta")->required();
    certify->add_option("--L", k_L, "L")->required()->check(CLI::Range(1, 4));
    certify->add_option("--sampled", k_sampled, "sample this many pairs instead of all");
    certify->add_option("--seed", k_seed, "sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bounds) {
            json j;
            j["n"] = b_n;
            j["alpha"] = b_alpha;
            j["eps"] = b_eps;
            j["clique"] = lower_bound_clique(b_n);
            j["coefficient"] = separation_coefficient(b_alpha);
            j["general"] = lower_bound_general(b_n, b_alpha, b_eps);
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*construct) {
            Graph g;
            if (!c_graph.empty()) {
                g = read_edge_list_file(c_graph);
            } else if (!c_family.empty()) {
                if (c_n <= 0) throw std::invalid_argument("--family needs --n");
                g = make_family_graph(c_family, c_n, cfg.seed);
            } else {
                throw std::invalid_argument("construct needs --graph or --family");
            }
            auto r = construct_ssp(g, cfg);
            write_or_print(c_out, path_system_to_json(g.n(), r.paths).dump() + "\n");
            write_or_print(c_report, report_to_json(r).dump(2) + "\n");
            return r.verified ? 0 : 1;
        }
        if (*verify) {
            Graph g = read_edge_list_file(v_graph);
            int n = 0;
            PathSystem ps = read_path_system_file(v_paths, &n);
            if (n > g.n()) g = read_edge_list_file(v_graph, n);
            json j;
            j["mode"] = v_mode;
            j["paths"] = ps.size();
            auto check = validate_path_system(g, ps);
            if (!check.ok) {
                j["ok"] = false;
                j["invalid_path"] = check.index;
                j["reason"] = check.reason;
                std::cout << j.dump(2) << '\n';
                return 1;
            }
            auto rep = verify_separation(g, ps, parse_separation_mode(v_mode), 20);
            j["ok"] = rep.ok;
            j["violations"] = rep.violation_count;
            j["uncovered"] = rep.uncovered.size();
            json listed = json::array();
            for (const auto& [e, f] : rep.violations) listed.push_back({edge_json(e), edge_json(f)});
            j["examples"] = listed;
            std::cout << j.dump(2) << '\n';
            return rep.ok ? 0 : 1;
        }
        if (*oracle) {
            Graph g = read_edge_list_file(o_graph);
            OracleBudget budget;
            budget.max_seconds = o_budget;
            auto r = exact_ssp(g, budget, o_cache);
            json j;
            j["n"] = g.n();
            j["m"] = g.m();
            j["conclusive"] = r.conclusive;
            if (r.conclusive) {
                j["ssp"] = r.value;
                j["witness"] = path_system_to_json(g.n(), r.witness)["paths"];
            } else {
                j["refuted_below"] = r.refuted_below;
            }
            std::cout << j.dump(2) << '\n';
            return r.conclusive ? 0 : 2;
        }
        if (*benchc) {
            std::ostringstream csv;
            bench(bopt, csv);
            write_or_print(b_csv, csv.str());
            return 0;
        }
        if (*certify) {
            Graph g = read_edge_list_file(k_graph);
            CertifyOptions opts;
            if (k_sampled > 0) {
                opts.mode = CertMode::sampled;
                opts.samples = k_sampled;
                opts.seed = k_seed;
            }
            auto c = certify_robust_connectivity(g, k_delta, k_L, opts);
            std::cout << certificate_to_json(c).dump(2) << '\n';
            return c.ok ? 0 : 1;
        }
    } catch (const StageFailure& e) {
        std::cerr << "error in stage " << e.stage() << ": " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
