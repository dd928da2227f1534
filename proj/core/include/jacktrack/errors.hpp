#pragma once

#include <stdexcept>
#include <string>

namespace jacktrack {

// Exit-code policy: InputError -> 2, ConfigError/InconsistencyError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or unparseable input data (files, streams, sentences).
class InputError : public Error {
public:
    using Error::Error;
};

// Bad configuration: impossible parameters, missing columns, infeasible scripts.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Internally contradictory results, e.g. negative transit residual.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// Operation needs more data than the input provides.
class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

}  // namespace jacktrack
