#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidPosition : public Error {
public:
    using Error::Error;
};

class NotAnApplication : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class RuleRestrictionViolated : public Error {
public:
    using Error::Error;
};

class InvalidDepPair : public Error {
public:
    InvalidDepPair(std::size_t entry, const std::string& msg)
        : Error("invalid-dep-pair(" + std::to_string(entry) + "): " + msg), entry_(entry) {}
    std::size_t entry() const { return entry_; }

private:
    std::size_t entry_;
};

class WidthMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

/// Syntax or validation error in an input file; `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace rdp
