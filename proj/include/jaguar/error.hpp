#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jaguar {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A variable set argument is not compatible with a relation schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Malformed query, statistics, or data text. `position` is a byte offset
// (or a 1-based line number for line-oriented formats).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Well-formed input that fails validation against a query or instance.
class InputError : public Error {
public:
    using Error::Error;
};

// A configured size limit was exceeded.
class LimitError : public Error {
public:
    using Error::Error;
};

// An internal invariant does not hold. Indicates a bug, not bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace jaguar
