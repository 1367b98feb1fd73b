#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dioph {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (equations, tower strings, system files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// An argument violates an operation's precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

// The request is well formed but too large to carry out (caps, non-materializable values).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

}  // namespace dioph
