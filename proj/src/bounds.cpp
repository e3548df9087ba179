#include "ssp/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssp {

double separation_coefficient(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0,1]");
    return std::sqrt(3.0 * alpha + 1.0) - 1.0;
}

long long lower_bound_clique(long long n) {
    if (n < 3) throw std::domain_error("clique lower bound needs n >= 3, got " + std::to_string(n));
    return n;
}

double lower_bound_general(long long n, double alpha, double eps) {
    if (n < 1) throw std::domain_error("n must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0,1]");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in [0,1]");
    return (separation_coefficient(alpha) - eps) * static_cast<double>(n);
}

}  // namespace ssp
