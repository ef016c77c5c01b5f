/// @file errors.hpp
/// @brief Exception hierarchy for the flow laboratory.
///
/// All recoverable failures are reported as exceptions derived from
/// gcf::Error so callers can distinguish physics failures (convexity loss)
/// from usage failures (bad configs, bad arguments) at the catch site.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcf {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Grid construction / resolution failures (e.g. N below the minimum).
class GridError : public Error {
public:
    explicit GridError(const std::string& what) : Error(what) {}
};

/// Domain violation when evaluating a speed (K <= 0) or non-finite
/// derivative values from a custom speed.
class SpeedDomainError : public Error {
public:
    explicit SpeedDomainError(const std::string& what) : Error(what) {}
};

/// A principal radius dropped to or below the convexity tolerance.
/// Carries the offending node so diagnostics can point at the surface
/// location where the body degenerated.
class ConvexityLostError : public Error {
public:
    ConvexityLostError(std::size_t node, double lambda_min, const std::string& what)
        : Error(what), node_(node), lambda_min_(lambda_min) {}

    std::size_t node() const { return node_; }
    double lambda_min() const { return lambda_min_; }

private:
    std::size_t node_;
    double lambda_min_;
};

/// Requested center lies outside the body (support extremes undefined).
class InvalidCenterError : public Error {
public:
    explicit InvalidCenterError(const std::string& what) : Error(what) {}
};

/// Unknown column name passed to a series verifier.
class KeyError : public Error {
public:
    explicit KeyError(const std::string& what) : Error(what) {}
};

/// Configuration problems: malformed JSON, unknown keys, type mismatches,
/// invalid values.  Carries a line/column anchor into the config text when
/// one is known (0 means "no anchor").
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0, int column = 0)
        : Error(what), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace gcf
