#pragma once

#include <stdexcept>
#include <string>

namespace bosegrid {

// Bad user input: odd grid sizes, negative masses, out-of-range orders.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine did not reach its target accuracy. `achieved` carries
// the best error estimate it got to.
struct NumericalError : std::runtime_error {
    double achieved = 0.0;
    NumericalError(const std::string& what, double achieved_err)
        : std::runtime_error(what), achieved(achieved_err) {}
};

// Memory/size guard tripped (e.g. two-site dimension too large).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bosegrid
