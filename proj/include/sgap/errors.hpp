#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgap {

/// Violated precondition on an input parameter (bad K, n, d, resolution, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative procedure (integrator, bisection scan, eigensolver) gave up.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A searched-for feature (e.g. a critical point) is absent on the given range.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally invalid mesh (non-manifold edge, zero-area face, ...).
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity that must stay positive (heat solution, log argument) did not.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sgap
