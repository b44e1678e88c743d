#pragma once

#include <stdexcept>
#include <string>

namespace abdkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid input (bad file, dangling edge, self-loop, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// An exhaustive engine was asked to handle an input above its size limit.
class SizeGuardError : public Error {
public:
    using Error::Error;
};

}  // namespace abdkit
