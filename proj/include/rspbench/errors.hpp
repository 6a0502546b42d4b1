// errors.hpp
// Exception hierarchy shared by every rspbench module.
//
// The CLI maps the three top-level families onto exit codes:
//   validation_error      -> 2
//   combinatorial_error   -> 3
//   io_error              -> 4

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rspbench {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data or arguments.
class validation_error : public error {
public:
    using error::error;
};

class normalization_error : public validation_error {
public:
    using validation_error::validation_error;
};

class dimension_error : public validation_error {
public:
    using validation_error::validation_error;
};

class non_hermitian_error : public validation_error {
public:
    using validation_error::validation_error;
};

class probability_error : public validation_error {
public:
    using validation_error::validation_error;
};

// Raised when an algorithm needs an assumption the input does not satisfy,
// e.g. the composition bound requires equiprobable targets.
class unsupported_assumption_error : public validation_error {
public:
    using validation_error::validation_error;
};

// Derivative of the binary fidelity is unbounded at q = 0 and q = 1.
class boundary_derivative_error : public validation_error {
public:
    using validation_error::validation_error;
};

// Parse failure with a 1-based line (and optional column) position.
// A line of 0 means the position is a structural path instead (see what()).
class parse_error : public validation_error {
public:
    parse_error(const std::string& source, std::size_t line, std::size_t column,
                const std::string& message)
        : validation_error(format(source, line, column, message)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& source, std::size_t line,
                              std::size_t column, const std::string& message) {
        std::string out = source;
        if (line > 0) {
            out += ":" + std::to_string(line);
            if (column > 0) out += ":" + std::to_string(column);
        }
        return out + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

// The requested exhaustive search is too large to run.
class combinatorial_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

// Jacobi iteration did not reach tolerance within the sweep cap.
class convergence_error : public error {
public:
    using error::error;
};

} // namespace rspbench
