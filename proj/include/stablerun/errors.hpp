#pragma once

#include <stdexcept>
#include <string>

namespace stablerun {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A clause was instantiated with a substitution that misses a variable.
struct UnboundVariableError : Error {
    using Error::Error;
};

/// least_model was asked to process a program with negative body literals.
struct NotHornError : Error {
    using Error::Error;
};

/// relational_ground was given a program that is not domain-restricted.
struct NotDomainRestrictedError : Error {
    using Error::Error;
};

/// An extensional predicate in an EdbSplit is defined by non-fact clauses.
struct InvalidEdbSplitError : Error {
    using Error::Error;
};

/// Exhaustive enumeration over the Herbrand base was requested but the base
/// is too large.
struct BaseTooLargeError : Error {
    using Error::Error;
};

/// The run enumerator was asked for a horizon beyond its configured bound.
struct BoundExceededError : Error {
    using Error::Error;
};

/// The input word does not fit on a tape of length p(n).
struct InputTooLongError : Error {
    using Error::Error;
};

/// run_to_model received a sequence that is not a valid run.
struct InvalidRunError : Error {
    using Error::Error;
};

/// model_to_run received an interpretation that does not have the shape of a
/// stable model of an encoded instance.
struct MalformedModelError : Error {
    using Error::Error;
};

/// Parse error in a program or machine file, with 1-based position.
struct SyntaxError : Error {
    int line;
    int column;
    SyntaxError(const std::string& msg, int line_, int column_)
        : Error(msg), line(line_), column(column_) {}
};

/// Well-formed file whose content violates a semantic constraint.
struct SemanticError : Error {
    using Error::Error;
};

}  // namespace stablerun
