#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssp/hypergraph.hpp"

namespace ssp {

// Parameters of the random base 3-graph for an n-vertex host graph of density alpha.
struct BaseParams {
    long long n = 0;
    double alpha = 0, lambda = 0;
    double beta = 0;  // sqrt(3 alpha + 1) - 1
    double d2 = 0;    // beta^2 n / lambda, target 2-edge degree inside U1
    double d3 = 0;    // 3 (alpha - beta^2) n / (2 lambda), target 3-edge degree inside U1
    double p = 0;     // beta^2 / lambda^2, pair probability
    double q = 0;     // 3 (alpha - beta^2) / ((1-p)^3 lambda^3 n), triangle probability
    int u1 = 0;       // floor(lambda n)
    int u2 = 0;       // floor(lambda n beta / 2)
};

// Throws std::domain_error when beta >= lambda, p is not in (0,1), q > 1 or a part is empty.
BaseParams make_base_params(long long n, double alpha, double lambda);

// Vertices 0..u1-1 form U1, u1..u1+u2-1 form U2. Triples are sorted, so a J2 triple has its
// U2 vertex last.
struct BaseThreeGraph {
    int u1_size = 0;
    int u2_size = 0;
    std::vector<std::array<int, 3>> j1;  // inside U1
    std::vector<std::array<int, 3>> j2;  // two vertices in U1, one in U2
    std::size_t i2_edges = 0;            // size of the random graph the J2 triples came from
    std::size_t i3_edges = 0;

    int num_vertices() const { return u1_size + u2_size; }
    std::size_t num_edges() const { return j1.size() + j2.size(); }
    // J1 triples first, then J2.
    std::vector<std::array<int, 3>> triples() const;
    UniformHypergraph to_hypergraph() const;
};

struct BaseTolerance {
    double multiplier = 3.0;  // applied to n^(2/3) and ln^2 n
};

struct PropertyCheck {
    std::string name;
    bool ok = true;
    double measured_min = 0, measured_max = 0;
    double target = 0, slack = 0;
    std::string detail;
};

struct BaseReport {
    std::vector<PropertyCheck> checks;  // J1..J6, F1, F2 in that order
    bool ok() const;
    const PropertyCheck& get(const std::string& name) const;
};

BaseReport validate_base(const BaseThreeGraph& j, const BaseParams& params, const BaseTolerance& tol = {});

// One draw of the three-stage random construction; no validation.
BaseThreeGraph sample_base(const BaseParams& params, std::uint64_t seed);

class BaseConstructionError : public std::runtime_error {
public:
    BaseConstructionError(const std::string& what, BaseReport last) : std::runtime_error(what), last_(std::move(last)) {}
    const BaseReport& last_report() const { return last_; }

private:
    BaseReport last_;
};

struct BaseBuild {
    BaseThreeGraph graph;
    BaseParams params;
    BaseReport report;
    int attempts = 0;
};

// Samples with sub-seeds of `seed` until validate_base passes (at most max_attempts draws).
BaseBuild build_base(long long n, double alpha, double lambda, std::uint64_t seed, const BaseTolerance& tol = {},
                     int max_attempts = 50);

// "# U1 <a> U2 <b>" followed by one "i j k" line per triple.
void write_base(std::ostream& out, const BaseThreeGraph& j);

}  // namespace ssp
