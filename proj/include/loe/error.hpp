#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data (malformed record, invariant violation in a file, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// A record-level problem in a line-oriented file.
class RecordError : public DataError {
public:
    RecordError(std::string path, std::size_t line, const std::string& what)
        : DataError(path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Caller violated an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace loe
