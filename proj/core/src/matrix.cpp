#include "poleplace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace poleplace {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

} // namespace

// --- Vector -----------------------------------------------------------------

Vector Vector::unit(std::size_t n, std::size_t i) {
    Vector v(n);
    v[i] = 1.0;
    return v;
}

double Vector::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Vector::norm() const noexcept {
    double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : data_) s += (x / scale) * (x / scale);
    return scale * std::sqrt(s);
}

bool Vector::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vector& Vector::operator+=(const Vector& other) {
    require(size() == other.size(), "vector size mismatch");
    for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require(size() == other.size(), "vector size mismatch");
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// --- Matrix -----------------------------------------------------------------

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "ragged matrix initialiser");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    Matrix m(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
    require(r0 + src.rows() <= rows_ && c0 + src.cols() <= cols_, "set_block out of range");
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
}

Vector Matrix::column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

Vector Matrix::row(std::size_t i) const {
    Vector v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
    require(v.size() == rows_, "set_column: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const Matrix& m, const Vector& v) {
    require(m.cols() == v.size(), "matrix-vector product: size mismatch");
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Vector row_times(const Vector& v, const Matrix& m) {
    require(m.rows() == v.size(), "row-vector product: size mismatch");
    Vector out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    return out;
}

Matrix outer(const Vector& a, const Vector& b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }
double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).max_abs(); }

// --- LU ---------------------------------------------------------------------

LuDecomposition::LuDecomposition(const Matrix& m) : lu_(m), perm_(m.rows()) {
    if (!m.is_square()) throw ValidationError("LU: matrix must be square");
    const std::size_t n = m.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double threshold = static_cast<double>(n) * kUlp * m.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
        if (std::abs(lu_(piv, k)) <= threshold || lu_(piv, k) == 0.0) {
            throw SingularMatrixError("matrix is singular to working precision (column " +
                                          std::to_string(k) + ")",
                                      k);
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
            sign_ = -sign_;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / lu_(k, k);
            lu_(i, k) = f;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vector LuDecomposition::solve(const Vector& rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw ValidationError("LU solve: size mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

Matrix LuDecomposition::solve(const Matrix& rhs) const {
    if (rhs.rows() != size()) throw ValidationError("LU solve: size mismatch");
    Matrix out(rhs.rows(), rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j) out.set_column(j, solve(rhs.column(j)));
    return out;
}

Vector LuDecomposition::solve_transposed(const Vector& rhs) const {
    // P M = L U  =>  M^T = U^T L^T P, so solve U^T y = rhs, L^T z = y, x = P^T z.
    const std::size_t n = size();
    if (rhs.size() != n) throw ValidationError("LU solve: size mismatch");
    Vector y = rhs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) y[i] -= lu_(j, i) * y[j];
        y[i] /= lu_(i, i);
    }
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu_(j, i) * y[j];
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = y[i];
    return x;
}

double LuDecomposition::determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < size(); ++i) d *= lu_(i, i);
    return d;
}

namespace linalg {

Matrix solve_linear(const Matrix& m, const Matrix& rhs) {
    if (!m.is_square()) throw ValidationError("solve_linear: matrix must be square");
    return LuDecomposition(m).solve(rhs);
}

double determinant(const Matrix& m) {
    if (!m.is_square()) throw ValidationError("determinant: matrix must be square");
    Matrix a = m;
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

std::vector<double> singular_values(const Matrix& m) {
    // One-sided Jacobi on the columns of M (or M^T when wide).
    Matrix a = m.rows() >= m.cols() ? m : m.transposed();
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += a(i, p) * a(i, p);
                    beta += a(i, q) * a(i, q);
                    gamma += a(i, p) * a(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= kUlp * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double ap = a(i, p);
                    const double aq = a(i, q);
                    a(i, p) = c * ap - s * aq;
                    a(i, q) = s * ap + c * aq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(cols);
    for (std::size_t j = 0; j < cols; ++j) sv[j] = a.column(j).norm();
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

double condition_number(const Matrix& m) {
    if (!m.is_square()) throw ValidationError("condition_number: matrix must be square");
    if (m.rows() == 0) return 1.0;
    const auto sv = singular_values(m);
    const double smax = sv.front();
    const double smin = sv.back();
    if (smax == 0.0 || smin == 0.0 || smin < std::numeric_limits<double>::min()) {
        return std::numeric_limits<double>::infinity();
    }
    const double k = smax / smin;
    return std::isfinite(k) ? k : std::numeric_limits<double>::infinity();
}

std::size_t pivot_rank(const Matrix& m, double threshold) {
    Matrix a = m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t rank = 0;
    for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
        std::size_t pr = k, pc = k;
        double best = 0.0;
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j)
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pr = i;
                    pc = j;
                }
        if (best <= threshold || best == 0.0) break;
        ++rank;
        for (std::size_t j = 0; j < cols; ++j) std::swap(a(k, j), a(pr, j));
        for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, k), a(i, pc));
        for (std::size_t i = k + 1; i < rows; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < cols; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return rank;
}

} // namespace linalg
} // namespace poleplace
