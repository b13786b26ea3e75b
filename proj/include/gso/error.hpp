#pragma once

#include <stdexcept>
#include <string>

namespace gso {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto exit codes (usage 1, validation 2, numerical 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input document or parameter set violates a stated invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Series did not converge, integration lost accuracy, truncation failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed. `offset` is the byte position.
class SyntaxError : public ValidationError {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : ValidationError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace gso
