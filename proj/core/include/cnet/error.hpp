#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape mismatch between two operands; the message names both shapes.
class DimensionError : public Error {
public:
    DimensionError(const std::string& op, const std::string& lhs_shape,
                   const std::string& rhs_shape)
        : Error(op + ": dimension mismatch, " + lhs_shape + " vs " + rhs_shape),
          op_(op) {}

    const std::string& op() const { return op_; }

private:
    std::string op_;
};

/// Value outside a function's open domain (e.g. inverse sigmoid at 0 or 1).
class DomainError : public Error {
public:
    DomainError(const std::string& what, double value, std::ptrdiff_t component = -1)
        : Error(what), value_(value), component_(component) {}

    double value() const { return value_; }
    /// Index of the failing vector component, or -1 for scalar calls.
    std::ptrdiff_t component() const { return component_; }

private:
    double value_;
    std::ptrdiff_t component_;
};

/// Input data violates a stated precondition; carries the offending indices.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what,
                             std::vector<std::size_t> indices = {})
        : Error(what), indices_(std::move(indices)) {}

    const std::vector<std::size_t>& indices() const { return indices_; }

private:
    std::vector<std::size_t> indices_;
};

/// Missing or inconsistent configuration (e.g. training the pre-image cost
/// on a dataset that was never preprocessed).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem or network failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed IDX payload. Each failure mode is a distinct kind and the byte
/// offset of the problem is recorded.
class IdxError : public Error {
public:
    enum class Kind { BadMagic, Truncated, DimMismatch, BadLabel };

    IdxError(Kind kind, std::size_t offset, const std::string& what)
        : Error(what), kind_(kind), offset_(offset) {}

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Training produced a non-finite weight or cost. Reports where.
class DivergenceError : public Error {
public:
    DivergenceError(int epoch, double learning_rate, const std::string& what)
        : Error(what), epoch_(epoch), learning_rate_(learning_rate) {}

    int epoch() const { return epoch_; }
    double learning_rate() const { return learning_rate_; }

private:
    int epoch_;
    double learning_rate_;
};

} // namespace cnet
