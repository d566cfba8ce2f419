#pragma once

#include <stdexcept>
#include <string>

namespace polarec {

// Error hierarchy mirrored by the CLI exit codes:
//   validation_error (and subclasses) -> 1
//   io_error / parse_error            -> 2
//   numerical_error                   -> 3
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class validation_error : public error {
public:
    using error::error;
};

// Raised when X^hbar is not contained in P (equivalently AB <= I fails),
// i.e. no admissible state exists for the given regions.
class polarity_error : public validation_error {
public:
    using validation_error::validation_error;
};

class dimension_error : public validation_error {
public:
    using validation_error::validation_error;
};

class io_error : public error {
public:
    using error::error;
};

class parse_error : public io_error {
public:
    using io_error::io_error;
};

class numerical_error : public error {
public:
    using error::error;
};

} // namespace polarec
