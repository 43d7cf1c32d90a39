#pragma once

#include <stdexcept>
#include <string>

namespace lintest {

// Base class for every error this library raises on purpose.  Precondition
// violations (null sizes, out-of-range sites, ...) use std::invalid_argument
// instead: those are caller bugs, not runtime conditions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A tester was handed an epsilon outside (0, 2/3) or a zero iteration count.
class InvalidBudget : public Error {
public:
    explicit InvalidBudget(const std::string& what) : Error(what) {}
};

// chernoff_trials was asked about a success probability outside (0, 1].
class InvalidProbability : public Error {
public:
    explicit InvalidProbability(const std::string& what) : Error(what) {}
};

// A fault specification cannot be realized exactly on the given domain,
// e.g. fraction * 2^n is not an integer, or a paired scheme was asked for
// more pairs than the domain has.
class UnrealizableFraction : public Error {
public:
    explicit UnrealizableFraction(const std::string& what) : Error(what) {}
};

// A vector-domain operation received a point of the wrong dimension.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// The exact analysis engine refuses to enumerate a domain this large.
// Limits are configurable; see ScanLimits in analysis.hpp.
class DomainTooLarge : public Error {
public:
    explicit DomainTooLarge(const std::string& what) : Error(what) {}
};

// The oracle under test misbehaved as a program: threw, or was asked for a
// point it does not support (such as 2^n without domain-extension support).
class OracleError : public Error {
public:
    explicit OracleError(const std::string& what) : Error(what) {}
};

}  // namespace lintest
