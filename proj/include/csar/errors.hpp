#pragma once

#include <stdexcept>
#include <string>

namespace csar {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (bad parameters, inconsistent shapes).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure: cannot open, read or write.
class IoError : public Error {
public:
    using Error::Error;
};

enum class FormatErrorKind {
    BadMagic,
    UnsupportedVersion,
    Truncated,
    NonFinite,
    Malformed,
};

/// A file exists and was read but its content is not acceptable.
class FormatError : public Error {
public:
    FormatError(FormatErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    FormatErrorKind kind() const noexcept { return kind_; }

private:
    FormatErrorKind kind_;
};

} // namespace csar
