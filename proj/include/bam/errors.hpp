#ifndef BAM_ERRORS_HPP
#define BAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bam {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    DimensionMismatch(const std::string& what, long expected, long actual)
        : InvalidArgument(what + ": expected dimension " + std::to_string(expected) +
                          ", got " + std::to_string(actual)) {}
};

class EmptyInput : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed or unreadable input data (feature dumps, monitor files, CSV).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Wrong magic, format tag, or schema version.
class SchemaError : public FormatError {
public:
    using FormatError::FormatError;
};

/// A structural invariant of a domain type does not hold.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void check_dimension(const char* what, long expected, long actual) {
    if (expected != actual) {
        throw DimensionMismatch(what, expected, actual);
    }
}

} // namespace detail
} // namespace bam

#endif // BAM_ERRORS_HPP
