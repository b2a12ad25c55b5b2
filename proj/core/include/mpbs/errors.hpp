#pragma once

#include <stdexcept>
#include <string>

namespace mpbs {

// Failure categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { config, stability, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class StabilityError : public Error {
public:
    explicit StabilityError(const std::string& what) : Error(ErrorKind::stability, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

}  // namespace mpbs
