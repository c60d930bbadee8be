#pragma once

#include <stdexcept>
#include <string>

namespace wmd {

// Base of all library failures. Each subclass maps to one CLI exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (JSON syntax, missing field, wrong type).
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what, long line = 0)
        : Error(format(field, what, line)), field_(field), line_(line) {}

    const std::string& field() const { return field_; }
    long line() const { return line_; }

private:
    static std::string format(const std::string& field, const std::string& what, long line) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + what;
    }

    std::string field_;
    long line_;
};

// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its precondition (wrong tower kind, bad range).
class DomainError : public Error {
public:
    using Error::Error;
};

// A distance enclosure straddles a threshold the caller needs decided.
class UnresolvedComparison : public Error {
public:
    using Error::Error;
};

}  // namespace wmd
