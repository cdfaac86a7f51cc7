#ifndef QTRACE_ERRORS_HPP
#define QTRACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qtrace {

// Base class for all qtrace errors so callers can catch the library as a whole.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad or degenerate input values (excluded points, even levels, branch cuts...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Argument outside the strip of validity of the quantum dilogarithm integral.
class StripViolation : public DomainError {
public:
    explicit StripViolation(const std::string& what) : DomainError(what) {}
};

// Evaluation point too close to a pole of the extended quantum dilogarithm.
class PoleProximity : public DomainError {
public:
    explicit PoleProximity(const std::string& what) : DomainError(what) {}
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& what) : Error(what) {}
};

// A closed-form solution failed its defining residual check.
class ResidualFailure : public Error {
public:
    explicit ResidualFailure(const std::string& what) : Error(what) {}
};

// Result magnitude would exceed the double-precision range guard.
class OverflowGuard : public Error {
public:
    explicit OverflowGuard(const std::string& what) : Error(what) {}
};

// Resource guard (term-cloud size caps and similar).
class ResourceGuard : public Error {
public:
    explicit ResourceGuard(const std::string& what) : Error(what) {}
};

} // namespace qtrace

#endif
