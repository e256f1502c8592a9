#ifndef SMECTIC_ERRORS_HPP
#define SMECTIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smectic {

/// Bad argument: non-finite value, non-unit director, nonpositive scale, ...
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A formula has no real solution for the given inputs.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Parameter set violates a required chain of inequalities.
class ConstraintError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Sampling grid too coarse for the requested number of modes.
class AliasingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The minimizer produced a non-finite energy.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Linear-algebra failure (eigen-solve did not converge).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Not enough records to perform a fit.
class InsufficientData : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Too many points of a sweep failed to converge.
class SweepError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, written or renamed.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace smectic

#endif
