#pragma once

#include <stdexcept>
#include <string>

namespace fz {

// Error categories map onto the CLI exit codes and C API status values:
// config -> 1, data -> 2, numeric -> 3.
class Error : public std::runtime_error {
public:
    enum class Kind { config, data, numeric, internal };

    Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Argument outside its valid domain (threshold out of [0,1], p >= 1, ...).
class DomainError : public Error {
public:
    explicit DomainError(std::string msg) : Error(Kind::config, std::move(msg)) {}
};

// Incompatible matrix/layer dimensions.
class ShapeError : public Error {
public:
    explicit ShapeError(std::string msg) : Error(Kind::data, std::move(msg)) {}
};

// Operation invoked on a layer in the wrong mask mode.
class ModeError : public Error {
public:
    explicit ModeError(std::string msg) : Error(Kind::config, std::move(msg)) {}
};

// Config file problems: bad JSON, unknown keys, invalid values.
class ConfigError : public Error {
public:
    explicit ConfigError(std::string msg) : Error(Kind::config, std::move(msg)) {}
};

// On-disk format violations: bad magic, truncation, size mismatches, CSV parse.
class FormatError : public Error {
public:
    explicit FormatError(std::string msg) : Error(Kind::data, std::move(msg)) {}
};

// Filesystem failures.
class IoError : public Error {
public:
    explicit IoError(std::string msg) : Error(Kind::data, std::move(msg)) {}
};

// Non-finite values where finite ones are required (NaN loss, ...).
class NumericError : public Error {
public:
    explicit NumericError(std::string msg) : Error(Kind::numeric, std::move(msg)) {}
};

} // namespace fz
