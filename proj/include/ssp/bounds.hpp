#pragma once

namespace ssp {

// sqrt(3*alpha + 1) - 1, the leading coefficient of the general lower bound.
double separation_coefficient(double alpha);

// Every strong-separating path system of K_n has at least n paths. Requires n >= 3.
long long lower_bound_clique(long long n);

// (sqrt(3*alpha+1) - 1 - eps) * n for a graph with alpha*C(n,2) edges.
// alpha in (0,1]; eps in [0,1] (eps = 0 gives the bare coefficient).
double lower_bound_general(long long n, double alpha, double eps);

}  // namespace ssp
