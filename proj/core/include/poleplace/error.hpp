#pragma once

#include <stdexcept>
#include <string>

namespace poleplace {

/// Outcome classes shared by every operation. The CLI maps them onto exit
/// codes (validation 2, numerical 3, non-convergence 4).
enum class ErrorKind { validation, numerical, non_convergence };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed input: shapes, self-conjugacy, plan structure, parse failures.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what)
        : Error(ErrorKind::validation, what) {}
};

/// The input is well formed but the computation cannot proceed reliably
/// (singular or rank-deficient matrices, ill-conditioned block swaps).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what)
        : Error(ErrorKind::numerical, what) {}
};

class SingularMatrixError : public NumericalError {
public:
    SingularMatrixError(const std::string& what, std::size_t column)
        : NumericalError(what), column_(column) {}

    /// First column whose pivot fell below the singularity threshold.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class UncontrollableError : public NumericalError {
public:
    UncontrollableError(const std::string& what, std::size_t rank)
        : NumericalError(what), rank_(rank) {}

    std::size_t rank() const noexcept { return rank_; }

private:
    std::size_t rank_;
};

} // namespace poleplace
