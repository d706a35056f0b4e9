#ifndef MVFRAC_ERRORS_HPP
#define MVFRAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mvfrac {

/// Base of every exception thrown by the library. `kind()` is a stable tag
/// used in the CLI's JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A parameter lies outside the region where the requested quantity is
/// defined (e.g. alpha <= (p-1)/2 for the matrix gamma).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

/// Rank-deficient or non positive definite input.
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& what) : Error("degenerate", what) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error("convergence", what) {}
};

class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

}  // namespace mvfrac

#endif  // MVFRAC_ERRORS_HPP
