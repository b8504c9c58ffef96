#pragma once

#include <stdexcept>

namespace afbm {

// Argument outside the domain of a function (branch cut, forbidden parameter).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation at a pole of Gamma or of a Möbius map.
struct pole_error : domain_error {
    using domain_error::domain_error;
};

// A connection formula needs a Gamma value at a pole (integer parameter difference).
struct degenerate_parameters : domain_error {
    using domain_error::domain_error;
};

// Series or quadrature failed to reach its tolerance within its budget.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace afbm
