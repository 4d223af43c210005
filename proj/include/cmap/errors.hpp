#pragma once

#include <stdexcept>
#include <string>

namespace cmap {

// Base class for everything the engine throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data: unreadable files, malformed rows, infeasible corpora.
// The CLI maps this to exit code 1.
struct DataError : Error {
    using Error::Error;
};

// Bad configuration: unknown keys, invalid values, missing required fields.
// The CLI maps this to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace cmap
