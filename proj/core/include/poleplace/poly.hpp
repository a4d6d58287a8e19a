#pragma once

#include "poleplace/linalg.hpp"
#include "poleplace/spectrum.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace poleplace {

/// Real polynomial with ascending coefficients: coeffs()[j] multiplies x^j.
///
/// Padded to length n, the coefficient vector g satisfies
/// g . [1, x, ..., x^(n-1)] == value at x, which is how the gamma vectors of
/// the placement formulas are stored.
class Polynomial {
public:
    Polynomial() : coeffs_{1.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    double operator[](std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : 0.0; }
    double leading() const noexcept { return coeffs_.back(); }
    bool is_monic() const noexcept { return coeffs_.back() == 1.0; }
    double max_abs_coeff() const noexcept;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

Polynomial operator*(const Polynomial& a, const Polynomial& b);

struct Deflation {
    Polynomial quotient;
    double remainder = 0.0;
};

struct QuadraticDeflation {
    Polynomial quotient;
    double remainder_linear = 0.0;   // coefficient of x in the remainder
    double remainder_constant = 0.0;
};

struct PolynomialSplit {
    Polynomial rest;   // q_{n-r}: roots of full minus subset
    Polynomial pulled; // q_r: roots of subset
};

namespace poly {

/// Monic polynomial with the given roots; conjugate pairs enter as real
/// quadratic factors x^2 - 2 Re(z) x + |z|^2.
Polynomial monic_from_roots(const Spectrum& roots);

/// det(xI - A) by the Faddeev-LeVerrier recurrence; no eigen-solver involved.
Polynomial char_poly(const Matrix& a);

/// det(xI - (A + b k^T)) with the rank-one update formed in extended
/// precision rather than rounded to a double matrix first.
Polynomial char_poly(const Matrix& a, const Vector& b, const Vector& k);

/// Synthetic division by (x - root).
Deflation deflate(const Polynomial& q, double root);

/// Long division by x^2 + c1 x + c0.
QuadraticDeflation deflate_quadratic(const Polynomial& q, double c1, double c0);

PolynomialSplit split(const Polynomial& full_poly, const Spectrum& subset, const Spectrum& full);

/// Horner evaluation of q(A).
Matrix eval_matrix(const Polynomial& q, const Matrix& a);

Complex eval_scalar(const Polynomial& q, Complex z);

} // namespace poly
} // namespace poleplace
