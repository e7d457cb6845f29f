#pragma once

#include <functional>

namespace bosegrid::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod on a finite interval. Relative tolerance `rtol`,
// absolute floor `atol`. Throws NumericalError if neither is met.
Result finite(const std::function<double(double)>& f, double a, double b,
              double rtol = 1e-12, double atol = 0.0, int max_depth = 18);

// Integral over [a, inf) for integrands that decay at least like a Gaussian
// beyond some point. Uses a double-exponential rule in t = x - a.
Result half_line(const std::function<double(double)>& f, double a,
                 double rtol = 1e-12);

}  // namespace bosegrid::quad
