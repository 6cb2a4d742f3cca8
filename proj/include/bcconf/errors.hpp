#pragma once

#include <stdexcept>
#include <string>

namespace bcconf {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The scenario document does not match the schema. `field()` names the offending key.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A well-formed value violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation was called with arguments outside its feasible region.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// A search grid is larger than the configured cap.
class RefusalError : public Error {
public:
    using Error::Error;
};

/// Simulated and analytic latency disagree beyond tolerance.
class ModelMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace bcconf
