#pragma once

#include <stdexcept>
#include <string>

namespace pseudonet {

// Numerical failures raised by the estimation routines. CLI maps these to
// exit code 3, data problems (ParseError) to 2 and ValidationError to 1.

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroDiagonal : std::runtime_error {
    explicit ZeroDiagonal(const std::string& what) : std::runtime_error(what) {}
};

struct LineSearchFailed : std::runtime_error {
    explicit LineSearchFailed(const std::string& what) : std::runtime_error(what) {}
};

struct MaxIterationsExceeded : std::runtime_error {
    explicit MaxIterationsExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateRss : std::runtime_error {
    explicit DegenerateRss(const std::string& what) : std::runtime_error(what) {}
};

struct SingularRestrictedCovariance : std::runtime_error {
    SingularRestrictedCovariance(long column, const std::string& what)
        : std::runtime_error(what), column(column) {}
    long column;
};

struct DegenerateAllocation : std::runtime_error {
    explicit DegenerateAllocation(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroRisk : std::runtime_error {
    explicit ZeroRisk(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroPortfolio : std::runtime_error {
    explicit ZeroPortfolio(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientHistory : std::runtime_error {
    explicit InsufficientHistory(const std::string& what) : std::runtime_error(what) {}
};

// CSV / input data problems; message carries row and column context.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration problems; message lists every violated constraint.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pseudonet
