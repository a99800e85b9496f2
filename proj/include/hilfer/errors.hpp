#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hilfer {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive refinement exhausted its evaluation budget.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Declared constants or configuration contradict measured behaviour.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A least-squares fit had too few usable points.
class DegenerateFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression source could not be parsed. `offset()` is a byte offset into the source.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace hilfer
