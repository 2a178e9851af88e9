#pragma once

#include <stdexcept>
#include <string>

namespace kdv5 {

// Typed failures. Config/domain problems map to CLI exit 2,
// numerical failures to exit 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ResolutionError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct IllConditionedError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace kdv5
