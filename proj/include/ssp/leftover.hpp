#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssp/graph.hpp"

namespace ssp {

// phi(e) for every edge id of h: a 2-subset {a, b} (a < b) of the labels 0..D.
struct LabelAssignment {
    int D = 0;
    int max_degree = 0;
    std::vector<std::array<int, 2>> labels;
    std::uint64_t resamples = 0;
};

class LabelingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabelOptions {
    int D = 0;  // 0: ceil(256 sqrt(Delta n)); either way D + 1 is raised to at least 4
    std::uint64_t max_resamples = 1000000;
};

// ceil(256 sqrt(Delta n)), with D + 1 >= 4.
int default_label_count(int max_degree, int n);

// Resampling over the events phi(e) = phi(f) (any two edges) and phi(e) meets phi(f) (adjacent
// edges): while some event holds, redraw both edges of the lexicographically smallest violated
// pair. The result is injective and disjoint at every vertex. Throws LabelingFailure at the cap.
LabelAssignment assign_labels_lll(const Graph& h, std::uint64_t seed, const LabelOptions& opts = {});

struct MatchingFamily {
    std::vector<std::vector<int>> matchings;  // edge ids of h, sorted
    std::vector<int> origin;                  // label (or, after splitting, parent matching) per matching
};

// M_i = {e : i in phi(e)} with empty M_i dropped; origin[k] is the label of matching k.
// Throws std::logic_error if the result is not a matching family with (M1) and (M2).
MatchingFamily labels_to_matchings(const Graph& h, const LabelAssignment& a);

struct FamilyCheck {
    bool matchings = true;    // every member is a matching
    bool exactly_two = true;  // (M1)
    bool pairwise = true;     // (M2): at most one common edge
};
FamilyCheck check_matching_family(const Graph& h, const MatchingFamily& f);

// Largest part size below delta n / (4L): ceil(delta n / (4L)) - 1, at least 1.
int split_cap(double delta, int L, int n);

// Splits every matching into ceil(|M| / cap) parts of near-equal size in edge order;
// origin[k] is the index of the matching part k came from.
MatchingFamily split_matchings(const MatchingFamily& f, double delta, int L, int n);

class CoverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Paths P, Q in g with E(P) cap E(Q) = mprime. With mprime = x_k y_k (x_k < y_k), connectors
// P^(k) join x_k to x_{k+1} and Q^(k) join y_k to y_{k+1}, each with 1..L inner vertices
// (shortest first, lexicographic), internally disjoint from V(mprime) and from each other.
// P = x1 y1 Q1 y2 x2 P2 x3 y3 Q3 ..., Q = y1 x1 P1 x2 y2 Q2 y3 x3 P3 ...
// Throws std::invalid_argument unless mprime is a matching of g with 2|mprime|(L+1) < delta n,
// and CoverFailure naming k when a connector search is exhausted.
std::pair<Path, Path> cover_matching_with_path_pair(const Graph& g, const std::vector<Edge>& mprime, double delta, int L);

struct LeftoverOptions {
    LabelOptions labels{};
    double eps = -1;  // caller's eps for the r bound; negative: Delta(h) / n
};

struct PathPairCover {
    std::vector<Path> p, q;  // R1 and R2, indexed alike
    std::vector<std::pair<int, int>> witness;  // per edge id of h: i < j with {e} = P_i cap P_j cap Q_i cap Q_j
    int D = 0;
    std::uint64_t resamples = 0;
    int t = 0;  // matchings before splitting
    int r = 0;
    bool quadruple_ok = true;
    bool t_bound_ok = true;  // t <= 300 sqrt(Delta n)
    bool r_bound_ok = true;  // r <= 600 L sqrt(eps) n / delta
    double t_bound = 0, r_bound = 0;
};

// Labels, matchings, splitting and one path pair per part; the quadruple-intersection property
// is verified for every edge of h before returning. h lives on the vertex set of g.
PathPairCover last_few_paths(const Graph& g, const Graph& h, double delta, int L, std::uint64_t seed,
                             const LeftoverOptions& opts = {});

}  // namespace ssp
