#include "bosegrid/quad.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "bosegrid/errors.hpp"

namespace bosegrid::quad {

Result finite(const std::function<double(double)>& f, double a, double b,
              double rtol, double atol, int max_depth) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == b) return {};
    double err = 0.0;
    double l1 = 0.0;
    double v = gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rtol, &err, &l1);
    if (!std::isfinite(v)) throw NumericalError("gauss-kronrod produced a non-finite value", err);
    if (err > std::max(rtol * std::abs(v), atol) && err > rtol * l1)
        throw NumericalError("gauss-kronrod did not converge", err);
    return {v, err};
}

Result half_line(const std::function<double(double)>& f, double a, double rtol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    double v = integrator.integrate([&](double t) { return f(a + t); }, rtol, &err, &l1);
    if (!std::isfinite(v)) throw NumericalError("exp-sinh produced a non-finite value", err);
    if (err > 100 * rtol * std::max(std::abs(v), l1))
        throw NumericalError("exp-sinh did not converge", err);
    return {v, err};
}

}  // namespace bosegrid::quad
