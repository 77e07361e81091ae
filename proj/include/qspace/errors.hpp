#pragma once

#include <stdexcept>
#include <string>

namespace qspace {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input: bad scalar text, invalid q-matrix,
// schema violations, mismatched fields or dimensions.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// A configurable resource cap was exceeded (search dimension, matching
// count, census budget, polynomial degree).
class CapExceededError : public Error {
public:
    explicit CapExceededError(const std::string& what) : Error(what) {}
};

} // namespace qspace
