#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace optodicke {

// Bad input: parameters outside their domain, malformed config, missing fields.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to converge or diverged. Carries named
// diagnostics (bracket ends, residuals, step counts) for error reports.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::map<std::string, double> diagnostics = {})
        : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

    const std::map<std::string, double>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::map<std::string, double> diagnostics_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

} // namespace optodicke
