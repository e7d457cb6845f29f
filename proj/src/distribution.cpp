#include "bosegrid/distribution.hpp"

#include <numeric>

namespace bosegrid {

double Distribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double tail_sum(const std::vector<double>& p, int n_b) {
    double s = 0.0;
    for (int n = static_cast<int>(p.size()) - 1; n >= n_b && n >= 0; --n) s += p[static_cast<size_t>(n)];
    return s;
}

int cutoff_from_probs(const std::vector<double>& p, double eps) {
    // Accumulate from the top so small tails keep their relative accuracy.
    double s = 0.0;
    int nb = static_cast<int>(p.size());
    for (int n = static_cast<int>(p.size()) - 1; n >= 0; --n) {
        s += p[static_cast<size_t>(n)];
        if (s > eps) break;
        nb = n;
    }
    return nb;
}

}  // namespace bosegrid
