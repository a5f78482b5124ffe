#pragma once

#include <stdexcept>
#include <string>

namespace finorth {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma (or a Gamma-backed expression) evaluated at a nonpositive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Series hit its term cap before meeting the stopping rule.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// A denominator in a polynomial coefficient product vanished.
class SingularParamError : public Error {
public:
    using Error::Error;
};

// Parameter validation failed and no override was requested.
class ConstraintError : public Error {
public:
    using Error::Error;
};

// Leading coefficient vanished; no monic form exists.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Quadrature reached its refinement cap with the error estimate above tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
};

// Sampled function values contradict the declared even/odd parity.
class ParityViolation : public Error {
public:
    using Error::Error;
};

} // namespace finorth
