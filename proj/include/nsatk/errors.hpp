#pragma once

#include <stdexcept>
#include <string>

namespace nsatk {

// Function evaluation produced NaN or otherwise faulted.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Cauchy tail failed to settle, or an integrand was infinite off its
// declared singular set.
class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownEntryError : public std::runtime_error {
public:
    explicit UnknownEntryError(const std::string& what) : std::runtime_error(what) {}
};

// An operation mode was requested that needs a closed-form oracle the
// entry does not carry.
class MissingOracleError : public std::runtime_error {
public:
    explicit MissingOracleError(const std::string& what) : std::runtime_error(what) {}
};

// Function-definition file errors; message carries file:line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace nsatk
