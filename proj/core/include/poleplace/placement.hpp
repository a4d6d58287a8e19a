#pragma once

#include "poleplace/linalg.hpp"
#include "poleplace/poly.hpp"
#include "poleplace/system.hpp"

namespace poleplace {

/// Controller canonical realisation (A_c, b_c) with x = T xi.
struct CanonicalForm {
    Matrix Ac;     // companion: ones on the superdiagonal, last row -[a_n ... a_1]
    Vector bc;     // e_n
    Matrix T;      // C * C_c^{-1}
    Matrix C;      // Con(A, b)
    Matrix Cc;     // Con(A_c, b_c)
    Polynomial p;  // det(xI - A)
};

namespace placement {

/// [b, A b, ..., A^(cols-1) b].
Matrix krylov_matrix(const Matrix& a, const Vector& b, std::size_t cols);

Matrix controllability_matrix(const StateSpace& sys);

CanonicalForm controller_canonical(const StateSpace& sys);

/// Ascending coefficients of a monic q of degree < n, zero-padded to length n.
Vector gamma_vector(const Polynomial& q, std::size_t n);

/// gamma_{n-1} from the coefficient recursion g_i = alpha_i + g_{i-1} * lambda1,
/// g_0 = 1, returned in the same ascending layout as gamma_vector.
Vector gamma_recursion(const Polynomial& alphas, double lambda1);

/// Ascending coefficients of p - q_n (length n): the Bass-Gura vector.
Vector gamma_full(const Polynomial& p, const Polynomial& q_n);

/// omega^T = gamma^T C_c C^{-1}, solved against the factored C.
Vector omega_vector(const StateSpace& sys, const Vector& gamma);

/// Assigns the left eigenpair (lambda1, omega) to A + b k^T:
/// k^T = omega^T (lambda1 I - A) after rescaling omega so omega^T b = 1.
Gain place_eigenpair(const StateSpace& sys, const Vector& omega, double lambda1);

/// Full placement through a single eigenpair: gamma_{n-1} from the recursion
/// on q_n at the real target lambda1, then place_eigenpair.
Gain place_initial(const StateSpace& sys, const Spectrum& targets, double lambda1);

Gain place_bass_gura(const StateSpace& sys, const Spectrum& targets);

Gain place_ackermann(const StateSpace& sys, const Spectrum& targets);

/// k^T = -gamma_{n-r}^T C_c C^{-1} m_r(A), with m_r the monic polynomial of
/// `pulled` and gamma_{n-r} the coefficients of the remaining factor. The
/// result does not depend on which targets are pulled.
Gain place_general(const StateSpace& sys, const Spectrum& targets, const Spectrum& pulled);

} // namespace placement
} // namespace poleplace
