#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pipedrive {

struct Diagnostic {
    std::string field;
    std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

// Everything that maps to exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoRootError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotSettledError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OutOfValidityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace pipedrive
