#pragma once

#include "poleplace/error.hpp"
#include "poleplace/spectrum.hpp"

#include <array>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace poleplace {

/// Unit roundoff used in every tolerance: ulp(1) = 2^-52.
inline constexpr double kUlp = std::numeric_limits<double>::epsilon();

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    static Vector unit(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    double max_abs() const noexcept;
    double norm() const noexcept;
    bool all_finite() const noexcept;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s);

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);
double dot(const Vector& a, const Vector& b);

/// Dense row-major real matrix. Zero-sized dimensions are permitted so that
/// degenerate splits (for example an n x 0 basis) stay representable.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix from_columns(std::span<const Vector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& src);
    Vector column(std::size_t j) const;
    Vector row(std::size_t i) const;
    void set_column(std::size_t j, const Vector& v);

    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix m);
Vector operator*(const Matrix& m, const Vector& v);
/// Row vector times matrix: returns (v^T M)^T.
Vector row_times(const Vector& v, const Matrix& m);
Matrix outer(const Vector& a, const Vector& b);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

/// Row-pivoted LU factorisation. Construction throws SingularMatrixError when
/// a pivot drops below n * ulp * max|M|.
class LuDecomposition {
public:
    explicit LuDecomposition(const Matrix& m);

    std::size_t size() const noexcept { return lu_.rows(); }
    Matrix solve(const Matrix& rhs) const;
    Vector solve(const Vector& rhs) const;
    /// Solves M^T x = rhs.
    Vector solve_transposed(const Vector& rhs) const;
    double determinant() const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
};

struct HessenbergReduction {
    Matrix Q;
    Matrix H; // lower Hessenberg: H(i,j) == 0 for j > i+1
};

struct SchurBlock {
    std::size_t start = 0;
    std::size_t size = 1; // 1 or 2
    std::array<Complex, 2> eigenvalues{};
};

/// A = Q T Q^T with Q orthogonal and T lower quasi-triangular. 2x2 diagonal
/// blocks are standardised (equal diagonal, off-diagonals of opposite sign).
struct SchurDecomposition {
    Matrix Q;
    Matrix T;
    std::vector<SchurBlock> blocks;

    Spectrum spectrum() const;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, SchurDecomposition partial, std::size_t sweeps)
        : Error(ErrorKind::non_convergence, what), partial_(std::move(partial)), sweeps_(sweeps) {}

    /// Q and the partially reduced T at the point the sweep cap was hit.
    const SchurDecomposition& partial() const noexcept { return partial_; }
    std::size_t sweeps() const noexcept { return sweeps_; }

private:
    SchurDecomposition partial_;
    std::size_t sweeps_;
};

/// Thrown when the user-supplied eigenvalues cannot be paired with the
/// computed ones.
class MatchingError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A (U, V) = (U, V) [[X, 0], [*, Y]] with [U V] orthogonal; range(V) is
/// A-invariant and carries `kept`, X carries `moved`.
struct InvariantSplit {
    Matrix U;
    Matrix V;
    Matrix X;
    Matrix Y;
    Spectrum moved;
    Spectrum kept;
};

namespace linalg {

HessenbergReduction hessenberg(const Matrix& a);

/// Francis double-shift QR on A^T, transposed back to lower form. Throws
/// NonConvergenceError after 40 n sweeps.
SchurDecomposition real_schur(const Matrix& a);

/// Same with an explicit sweep budget.
SchurDecomposition real_schur(const Matrix& a, std::size_t max_sweeps);

/// Moves the selected blocks (indices into dec.blocks) to the leading
/// diagonal positions, keeping their relative order.
SchurDecomposition reorder_schur(const SchurDecomposition& dec, std::span<const std::size_t> select_blocks);

/// Same, selecting by eigenvalue index (position in dec.spectrum()). A
/// selection containing only one eigenvalue of a 2x2 block is rejected.
SchurDecomposition reorder_schur_by_eigenvalue(const SchurDecomposition& dec,
                                               std::span<const std::size_t> select_eigenvalues);

/// Absolute tolerance used when pairing user eigenvalues with computed ones.
double matching_tolerance(const Matrix& a);

/// Greedy nearest-first matching. Returns, for every target, the index of the
/// candidate assigned to it.
std::vector<std::size_t> match_eigenvalues(std::span<const Complex> targets,
                                           std::span<const Complex> candidates, double tol);

InvariantSplit invariant_split(const Matrix& a, const Spectrum& moved);

Spectrum eigenvalues(const Matrix& a);

Matrix solve_linear(const Matrix& m, const Matrix& rhs);

double determinant(const Matrix& m);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const Matrix& m);

/// sigma_max / sigma_min, +inf when sigma_min is zero or the ratio overflows.
double condition_number(const Matrix& m);

/// Number of pivots above `threshold` under complete-pivoting elimination.
std::size_t pivot_rank(const Matrix& m, double threshold);

/// Eigenvalues of a real 2x2 block via trace/determinant. A negative
/// discriminant within rounding of zero is clamped to a repeated real pair.
std::array<Complex, 2> block_eigenvalues(double a, double b, double c, double d);

} // namespace linalg
} // namespace poleplace
