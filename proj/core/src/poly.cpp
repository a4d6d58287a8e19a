#include "poleplace/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace poleplace {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("polynomial needs at least one coefficient");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw ValidationError("polynomial coefficient is not finite");
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(a.coeffs().size() + b.coeffs().size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
    return Polynomial(std::move(out));
}

namespace poly {

Polynomial monic_from_roots(const Spectrum& roots) {
    std::vector<double> c{1.0};
    auto multiply = [&c](std::initializer_list<double> factor) {
        std::vector<double> out(c.size() + factor.size() - 1, 0.0);
        std::size_t j = 0;
        for (double f : factor) {
            for (std::size_t i = 0; i < c.size(); ++i) out[i + j] += c[i] * f;
            ++j;
        }
        c = std::move(out);
    };
    for (const auto& z : roots) {
        if (z.imag() == 0.0) {
            multiply({-z.real(), 1.0});
        } else if (z.imag() > 0.0) {
            multiply({z.real() * z.real() + z.imag() * z.imag(), -2.0 * z.real(), 1.0});
        }
        // The negative-imaginary partner is covered by the quadratic factor.
    }
    return Polynomial(std::move(c));
}

namespace {

// The trace recurrence cancels heavily once |A| grows (closed loops with
// gains around 1e4 lose every digit of a long double), so it runs in quad
// precision where the compiler has it and rounds only at the end.
#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 Wide;
#else
typedef long double Wide;
#endif

// Faddeev-LeVerrier on a row-major n x n matrix held in Wide.
Polynomial faddeev_leverrier(const std::vector<Wide>& aw, std::size_t n) {
    std::vector<Wide> m(n * n, Wide(0)), next(n * n);
    std::vector<Wide> c(n + 1, Wide(0));
    c[n] = Wide(1);
    // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k,  M_0 = 0.
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Wide s = 0;
                for (std::size_t l = 0; l < n; ++l) s += aw[i * n + l] * m[l * n + j];
                next[i * n + j] = s;
            }
        for (std::size_t i = 0; i < n; ++i) next[i * n + i] += c[n - k + 1];
        std::swap(m, next);
        Wide trace = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) trace += aw[i * n + j] * m[j * n + i];
        c[n - k] = -trace / static_cast<Wide>(k);
    }
    std::vector<double> out(n + 1);
    for (std::size_t j = 0; j <= n; ++j) out[j] = static_cast<double>(c[j]);
    return Polynomial(std::move(out));
}

} // namespace

Polynomial char_poly(const Matrix& a) {
    if (!a.is_square()) throw ValidationError("char_poly: matrix must be square");
    std::vector<Wide> aw(a.data().size());
    for (std::size_t i = 0; i < aw.size(); ++i) aw[i] = a.data()[i];
    return faddeev_leverrier(aw, a.rows());
}

Polynomial char_poly(const Matrix& a, const Vector& b, const Vector& k) {
    if (!a.is_square()) throw ValidationError("char_poly: matrix must be square");
    const std::size_t n = a.rows();
    if (b.size() != n || k.size() != n) throw ValidationError("char_poly: update vectors must have length n");
    // Forming A + b k^T in double would round away digits that the
    // coefficients are sensitive to when k is large; in quad precision the
    // products b_i k_j are exact.
    std::vector<Wide> aw(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            aw[i * n + j] = static_cast<Wide>(a(i, j)) + static_cast<Wide>(b[i]) * static_cast<Wide>(k[j]);
    return faddeev_leverrier(aw, n);
}

Deflation deflate(const Polynomial& q, double root) {
    if (q.degree() < 1) throw ValidationError("deflate: polynomial must have degree >= 1");
    const auto& c = q.coeffs();
    const std::size_t d = q.degree();
    std::vector<double> out(d);
    double acc = c[d];
    for (std::size_t j = d; j-- > 0;) {
        out[j] = acc;
        acc = c[j] + acc * root;
    }
    return {Polynomial(std::move(out)), acc};
}

QuadraticDeflation deflate_quadratic(const Polynomial& q, double c1, double c0) {
    if (q.degree() < 2) throw ValidationError("deflate_quadratic: polynomial must have degree >= 2");
    std::vector<double> rem = q.coeffs();
    const std::size_t d = q.degree();
    std::vector<double> out(d - 1, 0.0);
    for (std::size_t j = d; j >= 2; --j) {
        const double f = rem[j];
        out[j - 2] = f;
        rem[j] = 0.0;
        rem[j - 1] -= f * c1;
        rem[j - 2] -= f * c0;
    }
    return {Polynomial(std::move(out)), rem[1], rem[0]};
}

PolynomialSplit split(const Polynomial& full_poly, const Spectrum& subset, const Spectrum& full) {
    if (full_poly.degree() != full.size()) {
        throw ValidationError("split: polynomial degree " + std::to_string(full_poly.degree()) +
                              " does not match " + std::to_string(full.size()) + " roots");
    }
    if (!full.contains(subset)) {
        throw ValidationError("split: " + subset.to_string() + " is not a sub-multiset of " + full.to_string());
    }
    return {monic_from_roots(full.without(subset)), monic_from_roots(subset)};
}

Matrix eval_matrix(const Polynomial& q, const Matrix& a) {
    if (!a.is_square()) throw ValidationError("eval_matrix: matrix must be square");
    const std::size_t n = a.rows();
    const auto& c = q.coeffs();
    Matrix r = c.back() * Matrix::identity(n);
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        r = r * a;
        for (std::size_t i = 0; i < n; ++i) r(i, i) += c[j];
    }
    return r;
}

Complex eval_scalar(const Polynomial& q, Complex z) {
    const auto& c = q.coeffs();
    Complex acc = c.back();
    for (std::size_t j = c.size() - 1; j-- > 0;) acc = acc * z + c[j];
    return acc;
}

} // namespace poly
} // namespace poleplace
