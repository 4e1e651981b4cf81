#ifndef AIRHEAT_ERROR_HPP
#define AIRHEAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace airheat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An input is outside the mathematical domain of an operation
/// (non-positive pressure, temperature ordering violation, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Parameters violate a physical feasibility constraint
/// (expansion ratio beyond its bound, infeasible target mass, ...).
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// gamma and c_v were supplied together but do not describe the same gas.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Input file does not match the expected schema (missing column, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Input data is structurally valid but internally inconsistent
/// (non-monotonic time, mismatched profile sampling, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure; message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace airheat

#endif
