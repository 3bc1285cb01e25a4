#pragma once

/// \file
/// Exception types shared by every module of the library.
///
/// The command-line front end maps these onto process exit codes:
/// InvalidArgument / DomainError / MissingSign / ResourceError -> 3,
/// IoError -> 4.

#include <stdexcept>
#include <string>

namespace rmf {

/// A parameter violates an operation's precondition (range, ordering, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A complex or real argument lies outside the analytic domain of the
/// requested object (pole of zeta, Re s <= 1/2 for Euler products,
/// divergent Mellin kernel).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An EXPLICIT sign assignment was queried at a prime it does not define.
class MissingSign : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Memory could not be obtained for a table.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rmf
