// Error types shared across the library. The CLI maps these onto its exit
// code contract: validation/parse failures -> 2, undefined quantities -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace emergence {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: invalid distribution, bad partition, negative weight, ...
class validation_error : public error {
public:
    using error::error;
};

// Malformed file contents; carries a 1-based line number when known.
class parse_error : public validation_error {
public:
    parse_error(const std::string& msg, long line = -1)
        : validation_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Query conditioned on a zero-probability event.
class undefined_conditional : public error {
public:
    using error::error;
};

// A quantity that is mathematically undefined for the given input
// (e.g. effectiveness of a 1-state system).
class domain_error : public error {
public:
    using error::error;
};

// Local lattice decomposition aborted for a zero-probability realization.
class undefined_realization : public error {
public:
    using error::error;
};

// Iterative routine failed to converge; carries the final residual.
class numeric_error : public error {
public:
    numeric_error(const std::string& msg, double residual)
        : error(msg + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace emergence
