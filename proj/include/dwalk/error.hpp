#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dwalk {

// Exit-code classes used by the CLI: 1 validation, 2 runtime, 3 invariant breach.

/// Bad input: malformed files, out-of-range parameters, unknown spec keys.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not complete (step cap, iteration cap, sink vertex...).
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A checked mathematical invariant did not hold.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Power iteration ran out of iterations.
class StationaryCapError : public RuntimeError {
public:
    StationaryCapError(const std::string& what, double last_residual)
        : RuntimeError(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// The mixing threshold was not met within the step cap.
class MixingCapError : public RuntimeError {
public:
    MixingCapError(const std::string& what, std::vector<double> d_trace)
        : RuntimeError(what), d_trace_(std::move(d_trace)) {}
    const std::vector<double>& d_trace() const noexcept { return d_trace_; }

private:
    std::vector<double> d_trace_;
};

} // namespace dwalk
