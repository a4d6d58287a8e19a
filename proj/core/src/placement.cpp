#include "poleplace/placement.hpp"

#include "poleplace/verify.hpp"

#include <cmath>
#include <string>

// Sign convention: u = +k^T x, closed loop A + b k^T. With m_r(A) the monic
// product of (A - lambda_i I), every formula below is checked against the
// characteristic polynomial of the closed loop.

namespace poleplace::placement {

namespace {

LuDecomposition factor_controllability(const Matrix& c) {
    try {
        return LuDecomposition(c);
    } catch (const SingularMatrixError& e) {
        const std::size_t n = c.rows();
        const std::size_t rank = linalg::pivot_rank(c, static_cast<double>(n) * kUlp * c.max_abs());
        throw UncontrollableError("(A, b) is not controllable: Con(A, b) has numerical rank " +
                                      std::to_string(rank) + " < " + std::to_string(n),
                                  rank);
    }
}

void require_full_targets(const StateSpace& sys, const Spectrum& targets) {
    if (targets.size() != sys.n()) {
        throw ValidationError("expected " + std::to_string(sys.n()) + " target eigenvalues, got " +
                              std::to_string(targets.size()));
    }
}

Matrix companion(const Polynomial& p) {
    const std::size_t n = p.degree();
    Matrix ac(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) ac(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) ac(n - 1, j) = -p[j];
    return ac;
}

Gain finish(const StateSpace& sys, Vector k, Method method, std::size_t inverted, const Spectrum& targets,
            std::size_t pulled = 0) {
    Gain g;
    g.k = std::move(k);
    g.method = method;
    g.pulled = pulled;
    g.diagnostics.max_inverted_size = inverted;
    g.diagnostics = verify::diagnostics(sys, g, targets);
    return g;
}

} // namespace

Matrix krylov_matrix(const Matrix& a, const Vector& b, std::size_t cols) {
    Matrix k(b.size(), cols);
    Vector v = b;
    for (std::size_t j = 0; j < cols; ++j) {
        if (j) v = a * v;
        k.set_column(j, v);
    }
    return k;
}

Matrix controllability_matrix(const StateSpace& sys) { return krylov_matrix(sys.A(), sys.b(), sys.n()); }

CanonicalForm controller_canonical(const StateSpace& sys) {
    const std::size_t n = sys.n();
    CanonicalForm cf;
    cf.C = controllability_matrix(sys);
    factor_controllability(cf.C);
    cf.p = poly::char_poly(sys.A());
    cf.Ac = companion(cf.p);
    cf.bc = Vector::unit(n, n - 1);
    cf.Cc = krylov_matrix(cf.Ac, cf.bc, n);
    // T C_c = C  <=>  C_c^T T^T = C^T
    cf.T = linalg::solve_linear(cf.Cc.transposed(), cf.C.transposed()).transposed();
    return cf;
}

Vector gamma_vector(const Polynomial& q, std::size_t n) {
    if (!q.is_monic()) throw ValidationError("gamma_vector: polynomial must be monic");
    if (q.degree() >= n) {
        throw ValidationError("gamma_vector: degree " + std::to_string(q.degree()) + " does not fit length " +
                              std::to_string(n));
    }
    Vector g(n);
    for (std::size_t j = 0; j <= q.degree(); ++j) g[j] = q[j];
    return g;
}

Vector gamma_recursion(const Polynomial& alphas, double lambda1) {
    if (!alphas.is_monic() || alphas.degree() < 1) {
        throw ValidationError("gamma_recursion: expected a monic polynomial of degree >= 1");
    }
    const std::size_t n = alphas.degree();
    // alpha_i multiplies x^(n-i); g_i multiplies x^(n-1-i) in the quotient.
    Vector g(n);
    double prev = 1.0;
    g[n - 1] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        prev = alphas[n - i] + prev * lambda1;
        g[n - 1 - i] = prev;
    }
    return g;
}

Vector gamma_full(const Polynomial& p, const Polynomial& q_n) {
    if (p.degree() != q_n.degree()) {
        throw ValidationError("gamma_full: degree mismatch (" + std::to_string(p.degree()) + " vs " +
                              std::to_string(q_n.degree()) + ")");
    }
    if (!p.is_monic() || !q_n.is_monic()) throw ValidationError("gamma_full: polynomials must be monic");
    const std::size_t n = p.degree();
    Vector g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = p[j] - q_n[j];
    return g;
}

Vector omega_vector(const StateSpace& sys, const Vector& gamma) {
    const std::size_t n = sys.n();
    if (gamma.size() != n) throw ValidationError("omega_vector: gamma must have length n");
    const Matrix c = controllability_matrix(sys);
    const LuDecomposition lu = factor_controllability(c);
    const Matrix cc = krylov_matrix(companion(poly::char_poly(sys.A())), Vector::unit(n, n - 1), n);
    // omega = C^{-T} C_c^T gamma
    return lu.solve_transposed(row_times(gamma, cc));
}

Gain place_eigenpair(const StateSpace& sys, const Vector& omega, double lambda1) {
    const std::size_t n = sys.n();
    if (omega.size() != n) throw ValidationError("place_eigenpair: omega must have length n");
    if (!std::isfinite(lambda1)) throw ValidationError("place_eigenpair: lambda1 must be finite");
    const double wb = dot(omega, sys.b());
    if (!(std::abs(wb) >= 1e-9 * omega.norm() * sys.b().norm())) {
        throw NumericalError("place_eigenpair: omega^T b = " + std::to_string(wb) +
                             " vanishes, the eigenvalue cannot be moved by feedback");
    }
    const Vector w = (1.0 / wb) * omega;
    Matrix shifted = lambda1 * Matrix::identity(n) - sys.A();
    Gain g;
    g.k = row_times(w, shifted);
    g.method = Method::eigenpair;
    g.diagnostics.kappa_c = linalg::condition_number(controllability_matrix(sys));
    if (g.diagnostics.kappa_c > kConditionWarning) {
        g.diagnostics.warnings.push_back({"ill_conditioned_controllability",
                                          "cond(Con(A,b)) = " + std::to_string(g.diagnostics.kappa_c)});
    }
    return g;
}

Gain place_initial(const StateSpace& sys, const Spectrum& targets, double lambda1) {
    require_full_targets(sys, targets);
    if (!targets.contains(Spectrum{Complex(lambda1, 0.0)})) {
        throw ValidationError("place_initial: lambda1 must be one of the real targets");
    }
    const Polynomial q_n = poly::monic_from_roots(targets);
    const Vector omega = omega_vector(sys, gamma_recursion(q_n, lambda1));
    Gain g = place_eigenpair(sys, omega, lambda1);
    return finish(sys, std::move(g.k), Method::eigenpair, sys.n(), targets);
}

Gain place_bass_gura(const StateSpace& sys, const Spectrum& targets) {
    require_full_targets(sys, targets);
    const Polynomial p = poly::char_poly(sys.A());
    const Vector gamma = gamma_full(p, poly::monic_from_roots(targets));
    return finish(sys, omega_vector(sys, gamma), Method::bass_gura, sys.n(), targets);
}

Gain place_ackermann(const StateSpace& sys, const Spectrum& targets) {
    require_full_targets(sys, targets);
    const std::size_t n = sys.n();
    const LuDecomposition lu = factor_controllability(controllability_matrix(sys));
    const Vector last_row = lu.solve_transposed(Vector::unit(n, n - 1));
    const Matrix m = poly::eval_matrix(poly::monic_from_roots(targets), sys.A());
    return finish(sys, -1.0 * row_times(last_row, m), Method::ackermann, n, targets);
}

Gain place_general(const StateSpace& sys, const Spectrum& targets, const Spectrum& pulled) {
    require_full_targets(sys, targets);
    const std::size_t n = sys.n();
    const std::size_t r = pulled.size();
    const PolynomialSplit parts = poly::split(poly::monic_from_roots(targets), pulled, targets);
    if (r == 0) {
        Gain g = place_bass_gura(sys, targets);
        g.method = Method::general;
        g.pulled = 0;
        return g;
    }
    const Vector omega = omega_vector(sys, gamma_vector(parts.rest, n));
    const Matrix m = poly::eval_matrix(parts.pulled, sys.A());
    return finish(sys, -1.0 * row_times(omega, m), Method::general, n, targets, r);
}

} // namespace poleplace::placement
