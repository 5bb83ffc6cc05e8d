#pragma once

#include <stdexcept>
#include <string>

namespace wirepol {

/// Base of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation
/// (negative wavelength, x <= 0 for Y_m, missing geometry field, ...).
class domain_error : public error {
public:
    using error::error;
};

/// The result cannot be represented (overflow guard, order ceiling,
/// temperature outside the supported snap window).
class range_error : public error {
public:
    using error::error;
};

/// An iterative or truncated computation missed its tolerance.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double last_term)
        : error(what), last_term_(last_term) {}
    double last_term() const noexcept { return last_term_; }

private:
    double last_term_;
};

/// Degenerate input for a ratio-type quantity (zero emissivity, perfect
/// mirror, A_a + A_b = 0).
class degenerate_error : public error {
public:
    using error::error;
};

/// Not enough information in the data to determine the fit.
class identifiability_error : public error {
public:
    using error::error;
};

/// Malformed text input. line() is 1-based, 0 when unknown.
class parse_error : public error {
public:
    parse_error(const std::string& what, int line)
        : error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace wirepol
