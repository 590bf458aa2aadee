#pragma once

#include <stdexcept>
#include <string>

namespace paperrec {

// Base for all library errors. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters or lookups of unknown ids (exit code 1).
class ParamError : public Error {
public:
    using Error::Error;
};

// Malformed input data or cache files (exit code 2).
class FormatError : public Error {
public:
    using Error::Error;
};

// I/O and other runtime failures (exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace paperrec
