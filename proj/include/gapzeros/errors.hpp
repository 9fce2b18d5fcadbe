#pragma once

#include <stdexcept>
#include <string>

namespace gapzeros {

/// A documented precondition of an operation does not hold for its inputs.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A coefficient-sequence description could not be parsed.
class SpecError : public std::invalid_argument {
public:
    explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

/// An unscaled quantity left the representable double range.
class OverflowError : public std::overflow_error {
public:
    explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// A computed result contradicts a classical fact or a certified bound.
/// Only reachable with an incorrect support model or a numerical defect.
class TheoremViolation : public std::logic_error {
public:
    explicit TheoremViolation(const std::string& what) : std::logic_error(what) {}
};

} // namespace gapzeros
