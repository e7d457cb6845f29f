#pragma once

#include <vector>

namespace bosegrid {

// Discrete probability distribution: support[i] carries probs[i].
struct Distribution {
    std::vector<double> support;
    std::vector<double> probs;

    double total() const;
};

// Smallest N_b with sum_{n >= N_b} p(n) <= eps, for p indexed by n = 0, 1, ...
// Weight beyond the end of the list is taken as zero.
int cutoff_from_probs(const std::vector<double>& p, double eps);

// sum_{n >= n_b} p(n).
double tail_sum(const std::vector<double>& p, int n_b);

}  // namespace bosegrid
