#pragma once

#include "poleplace/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poleplace {

/// Single-input pair (A, b) of x' = A x + b u.
class StateSpace {
public:
    /// Throws ValidationError on inconsistent shapes, non-finite entries or
    /// b == 0. Controllability is checked by the operations that need it.
    StateSpace(Matrix a, Vector b);

    const Matrix& A() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }
    std::size_t n() const noexcept { return b_.size(); }

private:
    Matrix a_;
    Vector b_;
};

enum class Method { eigenpair, bass_gura, ackermann, general, simon_mitter, partial, sequential };

std::string method_name(Method m);

struct Warning {
    std::string tag;
    std::string message;
};

/// Condition numbers above this value raise an `ill_conditioned_controllability` warning.
inline constexpr double kConditionWarning = 1e8;

struct Diagnostics {
    double kappa_c = 0.0;              // 2-norm condition of Con(A, b)
    std::vector<double> kappa_steps;   // projected controllability per step
    std::size_t max_inverted_size = 0; // largest matrix factorised during placement
    std::optional<double> charpoly_residual;
    std::optional<double> spectrum_residual;
    std::vector<Warning> warnings;

    bool has_warning(const std::string& tag) const;
};

/// Feedback u = k^T x; the closed loop is A + b k^T.
struct Gain {
    Vector k;
    Method method = Method::ackermann;
    std::size_t pulled = 0; // r for Method::general
    Diagnostics diagnostics;
};

} // namespace poleplace
