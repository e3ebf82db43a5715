#pragma once

#include <stdexcept>
#include <string>

namespace ttcalc {

/// Malformed input document (CLI exit code 2).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size cap was exceeded (CLI exit code 3).
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that is well-formed but violates a mathematical precondition,
/// e.g. a non-multiplicative map or an infinite-dimensional path algebra.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed: a boundary outside the cycle space,
/// a trace map that is not a chain map, a representative that is not a cycle.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ttcalc
