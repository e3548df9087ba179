#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssp/graph.hpp"
#include "ssp/separation.hpp"

namespace ssp {

struct RunConfig {
    double eps = 0.2;
    std::uint64_t seed = 0;
    // Overrides; non-positive values mean "derive".
    double delta = 0;      // robust connectivity; measured when unset
    int L = 0;
    double eps2 = 0;       // separator eps; default 1 - 1/(1 + eps/2)
    double eps_prime = 0;  // default from the refine constraints
    int max_L = 3;         // largest L tried when measuring connectivity
    // Desk profile: tightness thresholds fitted to the separator output and a label count
    // grown from 8 Delta instead of 256 sqrt(Delta n). Off: the constants as stated.
    bool desk = true;
    double tight_slack = 0.05;  // fraction of n above the starting degrees
    int label_D = 0;            // fixed label count override
};

struct StageMetrics {
    // connectivity
    double delta = 0;
    int L = 0;
    bool delta_measured = false;
    // separator
    double eps2 = 0, eps2_default = 0;
    double eps_prime = 0;
    double beta = 0;
    int separator_t = 0;
    std::size_t separator_covered = 0;
    std::size_t unmatched_arcs = 0;
    int base_attempts = 0;
    int cycles_broken = 0;
    bool separator_structural_ok = false;
    bool separator_targets_ok = false;
    // refine
    std::size_t almost_paths = 0;
    int fallback_members = 0;
    std::size_t connectors = 0;
    std::size_t separated_edges = 0;
    bool invariants_ok = false;
    double refine_eps = 0;   // (eps delta / (2400 L))^2
    int remainder_max_degree = 0;
    std::size_t remainder_edges = 0;
    bool remainder_target_ok = false;  // Delta(J) <= refine_eps * n
    // leftover
    int label_D = 0;
    int label_attempts = 0;
    std::uint64_t resamples = 0;
    int matchings = 0;
    int parts = 0;
    std::size_t leftover_paths = 0;  // |R1 cup R2| after merging duplicates
    bool quadruple_ok = true;
    bool t_bound_ok = true;
    bool r_bound_ok = true;
};

struct RunReport {
    int n = 0;
    std::size_t m = 0;
    double alpha = 0;
    double eps = 0;
    std::uint64_t seed = 0;
    PathSystem paths;
    std::size_t size = 0;
    double ratio = 0;
    double target_coefficient = 0;  // sqrt(3 alpha + 1) - 1 + eps
    bool target_met = false;
    StageMetrics stages;
    bool verified = false;
    std::uint64_t violations = 0;
    std::size_t uncovered = 0;
};

// Separator, connection, remainder and last few paths; the union is strong-verified from scratch.
// Stage failures propagate as StageFailure with the stage name.
RunReport construct_ssp(const Graph& g, const RunConfig& cfg);

// Deterministic serialization (no timings); paths excluded.
nlohmann::json report_to_json(const RunReport& r);

Graph make_family_graph(const std::string& family, int n, std::uint64_t seed);

struct BenchOptions {
    std::vector<std::string> families;
    std::vector<int> sizes;
    int trials = 1;
    std::uint64_t seed = 0;
    double eps = 0.2;
    bool timing = false;  // adds a wall-time column, which breaks byte-identical output
};

// One CSV row per (family, n, trial) after a header row.
void bench(const BenchOptions& opts, std::ostream& csv);

}  // namespace ssp
