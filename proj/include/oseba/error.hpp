#ifndef OSEBA_ERROR_HPP_
#define OSEBA_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace oseba {

// Base of every error raised by the library. Validation failures (bad input
// values, violated invariants) and I/O failures are kept apart so callers can
// map them onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed CSV content; carries the 1-based line number and column name.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, std::string column, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ", column '" + column + "': " + what),
          line_(line),
          column_(std::move(column)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::string column_;
};

}  // namespace oseba

#endif  // OSEBA_ERROR_HPP_
