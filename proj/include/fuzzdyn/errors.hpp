#pragma once

#include <stdexcept>
#include <string>

namespace fuzzdyn {

/// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, mismatched spaces, unparsable documents.
class InputError : public Error {
public:
    using Error::Error;
};

/// An enumeration or table would exceed a configured resource bound.
class BoundError : public Error {
public:
    BoundError(const std::string& bound, const std::string& what)
        : Error(what + " (bound: " + bound + ")"), bound_(bound) {}
    const std::string& bound() const noexcept { return bound_; }

private:
    std::string bound_;
};

}  // namespace fuzzdyn
