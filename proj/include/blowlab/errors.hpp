#pragma once

#include <stdexcept>
#include <string>

namespace blowlab {

/// Invalid model constants or operation preconditions (p <= 3, s <= 0, ...).
struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Grid does not cover the required support, or a quadrature tail is truncated.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time stepping produced a field above the blow-up guard (or non-finite values).
struct DivergenceError : std::runtime_error {
    double s_fail;
    DivergenceError(const std::string& what, double s) : std::runtime_error(what), s_fail(s) {}
};

/// Config-file parse failure; line is 1-based, 0 when not line-specific.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(const std::string& what, int line_ = 0) : std::runtime_error(what), line(line_) {}
};

/// Stored trajectory cadence too coarse for the requested differencing.
struct CadenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace blowlab
