#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssp/graph.hpp"
#include "ssp/util.hpp"

namespace ssp {

// Neighbourhoods as bitsets, shared by the path counters.
class AdjacencyBits {
public:
    explicit AdjacencyBits(const Graph& g);
    int n() const { return n_; }
    const Bitset& operator[](int v) const { return rows_[static_cast<std::size_t>(v)]; }

private:
    int n_;
    std::vector<Bitset> rows_;
};

inline constexpr int kMaxInnerVertices = 4;

// Number of (x,y)-paths with exactly `ell` inner vertices, all distinct and outside `forbidden`
// (x and y are never inner). `forbidden` may be empty (size 0) for no restriction.
// Throws std::domain_error for ell outside [1, 4].
std::uint64_t count_internal_paths(const AdjacencyBits& adj, int x, int y, int ell, const Bitset& forbidden);
std::uint64_t count_internal_paths(const Graph& g, int x, int y, int ell, const std::vector<int>& forbidden = {});

// First (x,y)-path with exactly `inner` inner vertices, in lexicographic order of the inner
// vertices, avoiding `blocked` vertices inside and using only edges accepted by edge_ok.
std::optional<Path> find_path_with_inner(const Graph& g, int x, int y, int inner, const std::vector<char>& blocked,
                                         const std::function<bool(int)>& edge_ok);

enum class CertMode { exact, sampled };

struct PairWitness {
    int x = 0, y = 0;
    int ell = 0;             // smallest successful ell, or the ell with the best ratio on failure
    std::uint64_t count = 0; // paths with `ell` inner vertices
    double ratio = 0;        // count / n^ell
};

struct RobustConnCertificate {
    double delta = 0;
    int L = 0;
    CertMode mode = CertMode::exact;
    bool ok = false;
    std::uint64_t pairs_checked = 0;
    std::vector<PairWitness> worst;  // smallest ratios among passing pairs, ascending
    std::optional<PairWitness> refusal;
    double min_ratio = 0;            // min over checked pairs of max_ell count/n^ell
};

struct CertifyOptions {
    CertMode mode = CertMode::exact;
    std::uint64_t samples = 2000;  // pairs drawn in sampled mode
    std::uint64_t seed = 0;
    std::size_t keep_worst = 5;
    bool stop_at_failure = true;
};

// Checks that every pair (or a seeded sample of pairs) has some ell <= L with at least
// delta * n^ell paths. Pairs are drawn from `vertices` when given (otherwise all of V(G)),
// and inner vertices must avoid `forbidden`. Throws std::domain_error when L > 4.
RobustConnCertificate certify_robust_connectivity(const Graph& g, double delta, int L, const CertifyOptions& opts = {},
                                                  const std::vector<int>& vertices = {},
                                                  const std::vector<int>& forbidden = {});

// Largest delta for which the checked pairs are (delta, L)-robustly connected, i.e. the
// minimum over pairs of max over ell <= L of count/n^ell.
double measure_robust_delta(const Graph& g, int L, const CertifyOptions& opts = {});

nlohmann::json certificate_to_json(const RobustConnCertificate& c);
RobustConnCertificate certificate_from_json(const nlohmann::json& j);
// Looks up a certificate for (graph hash, delta, L) in a JSON cache file; computes and stores it otherwise.
RobustConnCertificate cached_certificate(const Graph& g, double delta, int L, const CertifyOptions& opts,
                                         const std::string& cache_path);

// Vertices with at least nu*n neighbours in s.
std::vector<int> robust_neighbourhood(const Graph& g, const std::vector<int>& s, double nu);

struct ExpanderReport {
    bool ok = true;
    bool exhaustive = true;
    std::uint64_t sets_checked = 0;
    double worst_margin = 0;  // min over checked S of |RN(S)| - |S| - nu n
    std::vector<int> witness; // the set attaining the worst margin
};

// Exact mode enumerates every S with tau n <= |S| <= (1-tau) n (n <= 20, otherwise domain_error);
// sampled mode draws `samples` random sets of random admissible size.
ExpanderReport check_robust_expander(const Graph& g, double nu, double tau, CertMode mode, std::uint64_t seed = 0,
                                     std::uint64_t samples = 2000);

struct ConnParams {
    int L = 0;
    double delta = 0;
};

// L = ceil(1/nu), delta = (nu/4)^L * 4^(-L^2). Requires 0 < nu <= tau <= 1.
ConnParams expander_to_connectivity(double nu, double tau);

}  // namespace ssp
