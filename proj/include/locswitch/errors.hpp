#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace locswitch {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario or command-line configuration. Raised before a run starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Two positions (or a position and a log) live in different coordinate frames.
class FrameMismatch : public Error {
public:
    using Error::Error;
};

class EmptyLog : public Error {
public:
    EmptyLog() : Error("access-point log has no entries") {}
};

class NonPositiveSpeed : public Error {
public:
    explicit NonPositiveSpeed(double v)
        : Error("user speed must be positive, got " + std::to_string(v)) {}
};

class NegativeDuration : public Error {
public:
    explicit NegativeDuration(double dt)
        : Error("duration must be non-negative, got " + std::to_string(dt)) {}
};

class ZeroEnergy : public Error {
public:
    ZeroEnergy() : Error("efficiency is undefined for zero energy") {}
};

class MissingCell : public Error {
public:
    using Error::Error;
};

/// A scheme asked to run in a frame its location sensor cannot serve.
class SchemeFrameMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace locswitch
