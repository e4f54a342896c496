#pragma once

#include <stdexcept>
#include <string>

namespace beamstab {

/// Malformed input: a field that cannot be evaluated, bad JSON, unknown name.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request outside an operation's domain (bad index, x outside [0, l], ...).
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Factorization or solve failure; signals an assembly bug for valid problems.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace beamstab
