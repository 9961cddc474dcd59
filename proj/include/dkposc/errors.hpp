#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dkposc {

/// Base of all solver errors. `kind()` is a stable identifier ("NoRootError",
/// "DomainError", ...) used verbatim in sweep gap rows and CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// An argument or parameter violates a documented invariant.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

/// A spectrum operation was requested on a degenerate configuration
/// (confinement scale lambda = delta1*M*omega not strictly positive).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error("DegenerateError", what) {}
};

/// Root bracketing exhausted its search window without a sign change.
class NoRootError : public Error {
public:
    explicit NoRootError(const std::string& what) : Error("NoRootError", what) {}
};

/// Finite-difference grid violates its invariants.
class GridError : public Error {
public:
    explicit GridError(const std::string& what) : Error("GridError", what) {}
};

/// Oracle adjudication could not single out exactly one quantization mode.
class AdjudicationError : public Error {
public:
    explicit AdjudicationError(const std::string& what) : Error("AdjudicationError", what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
    explicit QuadratureError(const std::string& what) : Error("QuadratureError", what) {}
};

/// A sweep specification is malformed (empty range, out-of-domain bounds, ...).
class SpecError : public Error {
public:
    explicit SpecError(const std::string& what) : Error("SpecError", what) {}
};

/// Configuration file could not be parsed.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace dkposc
