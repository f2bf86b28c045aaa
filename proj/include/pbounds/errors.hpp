#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbounds {

/// Index out of range, malformed argument, or any other caller mistake.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a posterior is requested for an observation of probability zero.
class UnreachableObservation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A model whose kernels violate the probability invariants.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lexical, syntactic or semantic error in a `.pomdp` document.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace pbounds
