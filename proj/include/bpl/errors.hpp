#pragma once

#include <stdexcept>
#include <string>

namespace bpl {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A generated Taylor coefficient is NaN or infinite (recurrence blow-up).
struct NonFiniteCoefficient : Error {
    using Error::Error;
};

/// Every input coefficient of a Padé solve is numerically zero.
struct DegenerateInput : Error {
    using Error::Error;
};

/// The quadrature eigensolver did not converge.
struct ConvergenceFailure : Error {
    using Error::Error;
};

/// A Padé denominator vanishes on the Laplace ray inside the quadrature support.
struct PoleOnRay : Error {
    using Error::Error;
};

/// No admissible step above dt_min satisfies the residue tolerance.
struct StepUnderflow : Error {
    StepUnderflow(const std::string& what, double at_time)
        : Error(what), time(at_time) {}
    double time;
};

/// Newton iteration failed to converge in an implicit solve.
struct NewtonDivergence : Error {
    using Error::Error;
};

/// The solution norm exploded beyond any plausible bound.
struct Divergence : Error {
    using Error::Error;
};

/// Query time outside the trajectory's covered interval.
struct OutOfRange : Error {
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace bpl
