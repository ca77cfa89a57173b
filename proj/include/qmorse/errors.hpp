#pragma once

#include <stdexcept>
#include <string>

namespace qmorse {

// Base for all toolkit errors. Everything user-facing derives from this so the
// CLI can map failures to exit codes in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed expression text or spec file. Carries the byte offset of the
// offending token so the CLI can point at it.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Input violates a documented precondition (point outside domain, zero
// denominator, lambda list not sorted, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A matrix that must be invertible / nondegenerate is numerically singular.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature failed to reach its target accuracy within the node
// budget.
class QuadratureError : public Error {
public:
    explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

}  // namespace qmorse
