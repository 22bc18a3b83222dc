#pragma once

#include <stdexcept>
#include <string>

namespace cftlab {

/// Bad inputs: shapes, ranges, malformed configs. Maps to CLI exit code 2.
struct ArgumentError : std::runtime_error {
    explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request exceeds a documented size ceiling. Maps to CLI exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: tolerance violations, non-convergence, ill-conditioned
/// fits. Maps to CLI exit code 4.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConstructionError : ArgumentError {
    explicit ConstructionError(const std::string& msg) : ArgumentError(msg) {}
};

struct ContentError : ArgumentError {
    explicit ContentError(const std::string& msg) : ArgumentError(msg) {}
};

struct LabelingError : NumericalError {
    explicit LabelingError(const std::string& msg) : NumericalError(msg) {}
};

struct FitError : NumericalError {
    explicit FitError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace cftlab
