#include "poleplace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

// All iteration happens on the upper (textbook) form of A^T; the public
// lower quasi-triangular T is its transpose and shares the same Q.

namespace poleplace {

namespace {

struct Rotation {
    double cs = 1.0;
    double sn = 0.0;
};

// x' = cs x + sn y, y' = cs y - sn x on rows r0, r1 for columns [c0, c1).
void rotate_rows(Matrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1, Rotation g) {
    for (std::size_t j = c0; j < c1; ++j) {
        const double x = m(r0, j);
        const double y = m(r1, j);
        m(r0, j) = g.cs * x + g.sn * y;
        m(r1, j) = g.cs * y - g.sn * x;
    }
}

void rotate_cols(Matrix& m, std::size_t c0, std::size_t c1, std::size_t r0, std::size_t r1, Rotation g) {
    for (std::size_t i = r0; i < r1; ++i) {
        const double x = m(i, c0);
        const double y = m(i, c1);
        m(i, c0) = g.cs * x + g.sn * y;
        m(i, c1) = g.cs * y - g.sn * x;
    }
}

// Standardises the real 2x2 block [[a, b], [c, d]] in place and returns the
// rotation R with old = R new R^T, R = [[cs, -sn], [sn, cs]]. On return
// either c == 0 (real eigenvalues) or a == d with b * c < 0.
Rotation standardize_2x2(double& a, double& b, double& c, double& d) {
    constexpr double multpl = 4.0;
    Rotation g;
    if (c == 0.0) {
        return g;
    }
    if (b == 0.0) {
        g = {0.0, 1.0};
        std::swap(a, d);
        b = -c;
        c = 0.0;
        return g;
    }
    if (a - d == 0.0 && std::signbit(b) != std::signbit(c)) {
        return g;
    }
    double temp = a - d;
    double p = 0.5 * temp;
    const double bcmax = std::max(std::abs(b), std::abs(c));
    const double bcmis = std::min(std::abs(b), std::abs(c)) * std::copysign(1.0, b) * std::copysign(1.0, c);
    double scale = std::max(std::abs(p), bcmax);
    double z = (p / scale) * p + (bcmax / scale) * bcmis;
    if (z >= multpl * kUlp) {
        // Real eigenvalues.
        z = p + std::copysign(std::sqrt(scale) * std::sqrt(z), p);
        a = d + z;
        d = d - (bcmax / z) * bcmis;
        const double tau = std::hypot(c, z);
        g = {z / tau, c / tau};
        b = b - c;
        c = 0.0;
        return g;
    }
    // Complex or nearly equal real eigenvalues: equalise the diagonal.
    const double sigma = b + c;
    const double tau = std::hypot(sigma, temp);
    g.cs = std::sqrt(0.5 * (1.0 + std::abs(sigma) / tau));
    g.sn = -(p / (tau * g.cs)) * std::copysign(1.0, sigma);
    const double aa = a * g.cs + b * g.sn;
    const double bb = -a * g.sn + b * g.cs;
    const double cc = c * g.cs + d * g.sn;
    const double dd = -c * g.sn + d * g.cs;
    a = aa * g.cs + cc * g.sn;
    b = bb * g.cs + dd * g.sn;
    c = -aa * g.sn + cc * g.cs;
    d = -bb * g.sn + dd * g.cs;
    temp = 0.5 * (a + d);
    a = temp;
    d = temp;
    if (c != 0.0) {
        if (b != 0.0) {
            if (std::signbit(b) == std::signbit(c)) {
                // Real eigenvalues after all: reduce to triangular form.
                const double sab = std::sqrt(std::abs(b));
                const double sac = std::sqrt(std::abs(c));
                p = std::copysign(sab * sac, c);
                const double t = 1.0 / std::sqrt(std::abs(b + c));
                a = temp + p;
                d = temp - p;
                b = b - c;
                c = 0.0;
                const double cs1 = sab * t;
                const double sn1 = sac * t;
                const double cs = g.cs * cs1 - g.sn * sn1;
                g.sn = g.cs * sn1 + g.sn * cs1;
                g.cs = cs;
            }
        } else {
            b = -c;
            c = 0.0;
            const double cs = g.cs;
            g.cs = -g.sn;
            g.sn = cs;
        }
    }
    return g;
}

// Standardises the 2x2 diagonal block of the upper form at (j, j) and
// propagates the rotation to the rest of t and to z. Returns true when the
// block still carries a complex pair.
bool standardize_block(Matrix& t, Matrix& z, std::size_t j) {
    const std::size_t n = t.rows();
    double a = t(j, j), b = t(j, j + 1), c = t(j + 1, j), d = t(j + 1, j + 1);
    const Rotation g = standardize_2x2(a, b, c, d);
    t(j, j) = a;
    t(j, j + 1) = b;
    t(j + 1, j) = c;
    t(j + 1, j + 1) = d;
    rotate_rows(t, j, j + 1, j + 2, n, g);
    rotate_cols(t, j, j + 1, 0, j, g);
    rotate_cols(z, j, j + 1, 0, n, g);
    return c != 0.0;
}

void reduce_upper_hessenberg(Matrix& h, Matrix& z) {
    const std::size_t n = h.rows();
    std::vector<double> v;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        bool tail_zero = true;
        for (std::size_t i = k + 2; i < n; ++i)
            if (h(i, k) != 0.0) {
                tail_zero = false;
                break;
            }
        if (tail_zero) continue;

        const std::size_t m = n - k - 1;
        v.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) v[i] = h(k + 1 + i, k);
        double scale = 0.0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        double norm = 0.0;
        for (double x : v) norm += (x / scale) * (x / scale);
        norm = scale * std::sqrt(norm);
        const double alpha = -std::copysign(norm, v[0]);
        v[0] -= alpha;
        double vtv = 0.0;
        for (double x : v) vtv += x * x;
        const double beta = 2.0 / vtv;

        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += v[i] * h(k + 1 + i, j);
            s *= beta;
            for (std::size_t i = 0; i < m; ++i) h(k + 1 + i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += h(i, k + 1 + j) * v[j];
            s *= beta;
            for (std::size_t j = 0; j < m; ++j) h(i, k + 1 + j) -= s * v[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += z(i, k + 1 + j) * v[j];
            s *= beta;
            for (std::size_t j = 0; j < m; ++j) z(i, k + 1 + j) -= s * v[j];
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

std::vector<SchurBlock> collect_blocks(const Matrix& upper) {
    const std::size_t n = upper.rows();
    std::vector<SchurBlock> blocks;
    for (std::size_t i = 0; i < n;) {
        SchurBlock b;
        b.start = i;
        if (i + 1 < n && upper(i + 1, i) != 0.0) {
            b.size = 2;
            b.eigenvalues = linalg::block_eigenvalues(upper(i, i), upper(i, i + 1), upper(i + 1, i), upper(i + 1, i + 1));
        } else {
            b.size = 1;
            b.eigenvalues = {Complex(upper(i, i), 0.0), Complex()};
        }
        blocks.push_back(b);
        i += b.size;
    }
    return blocks;
}

// Francis double-shift iteration on an upper Hessenberg matrix, applied to
// the whole matrix so that h converges to the real Schur form.
void francis_iteration(Matrix& h, Matrix& z, std::size_t max_sweeps) {
    const int n = static_cast<int>(h.rows());
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));

    std::size_t sweeps = 0;
    int stalled = 0;
    int hi = n - 1;
    while (hi >= 0) {
        int l = hi;
        for (; l > 0; --l) {
            double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) s = anorm;
            if (std::abs(h(l, l - 1)) <= kUlp * s) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            --hi;
            stalled = 0;
            continue;
        }
        if (l == hi - 1) {
            standardize_block(h, z, static_cast<std::size_t>(hi - 1));
            hi -= 2;
            stalled = 0;
            continue;
        }
        if (sweeps >= max_sweeps) {
            SchurDecomposition partial{z, h.transposed(), {}};
            throw NonConvergenceError("real Schur: QR iteration did not converge within " +
                                          std::to_string(max_sweeps) + " sweeps",
                                      std::move(partial), sweeps);
        }
        ++sweeps;
        ++stalled;

        double x = h(hi, hi);
        double y = h(hi - 1, hi - 1);
        double w = h(hi, hi - 1) * h(hi - 1, hi);
        if (stalled % 10 == 0) {
            // Exceptional shift.
            const double s = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
            x = y = 0.75 * s + h(hi, hi);
            w = -0.4375 * s * s;
        }

        int m = hi - 2;
        double p = 0.0, q = 0.0, r = 0.0;
        for (; m >= l; --m) {
            const double zz = h(m, m);
            const double rr = x - zz;
            const double ss = y - zz;
            p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - zz - rr - ss;
            r = h(m + 2, m + 1);
            const double s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(zz) + std::abs(h(m + 1, m + 1)));
            if (u <= kUlp * v) break;
        }
        for (int i = m; i < hi - 1; ++i) {
            h(i + 2, i) = 0.0;
            if (i != m) h(i + 2, i - 1) = 0.0;
        }

        for (int k = m; k < hi; ++k) {
            double scale = 1.0;
            if (k != m) {
                p = h(k, k - 1);
                q = h(k + 1, k - 1);
                r = (k + 1 != hi) ? h(k + 2, k - 1) : 0.0;
                scale = std::abs(p) + std::abs(q) + std::abs(r);
                if (scale != 0.0) {
                    p /= scale;
                    q /= scale;
                    r /= scale;
                }
            }
            const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            p += s;
            const double rx = p / s;
            const double ry = q / s;
            const double rz = r / s;
            q /= p;
            r /= p;
            if (k == m) {
                if (l != m) h(k, k - 1) *= (1.0 - rx);
            } else {
                h(k, k - 1) = -s * scale;
                h(k + 1, k - 1) = 0.0;
                if (k + 1 != hi) h(k + 2, k - 1) = 0.0;
            }
            const bool three = (k + 1 != hi);
            for (int j = k; j < n; ++j) {
                double t = h(k, j) + q * h(k + 1, j);
                if (three) {
                    t += r * h(k + 2, j);
                    h(k + 2, j) -= t * rz;
                }
                h(k + 1, j) -= t * ry;
                h(k, j) -= t * rx;
            }
            const int last = std::min(hi, k + 3);
            for (int i = 0; i <= last; ++i) {
                double t = rx * h(i, k) + ry * h(i, k + 1);
                if (three) {
                    t += rz * h(i, k + 2);
                    h(i, k + 2) -= t * r;
                }
                h(i, k + 1) -= t * q;
                h(i, k) -= t;
            }
            for (int i = 0; i < n; ++i) {
                double t = rx * z(i, k) + ry * z(i, k + 1);
                if (three) {
                    t += rz * z(i, k + 2);
                    z(i, k + 2) -= t * r;
                }
                z(i, k + 1) -= t * q;
                z(i, k) -= t;
            }
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < i; ++j) h(i, j) = 0.0;
}

// Householder QR of the tall matrix m; returns the full orthogonal factor.
Matrix orthogonal_factor(Matrix m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Matrix q = Matrix::identity(rows);
    std::vector<double> v;
    for (std::size_t k = 0; k < cols && k + 1 < rows; ++k) {
        const std::size_t len = rows - k;
        v.assign(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) v[i] = m(k + i, k);
        double norm = 0.0;
        for (double x : v) norm = std::hypot(norm, x);
        if (norm == 0.0) continue;
        const double alpha = -std::copysign(norm, v[0]);
        v[0] -= alpha;
        double vtv = 0.0;
        for (double x : v) vtv += x * x;
        if (vtv == 0.0) continue;
        const double beta = 2.0 / vtv;
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += v[i] * m(k + i, j);
            s *= beta;
            for (std::size_t i = 0; i < len; ++i) m(k + i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < len; ++j) s += q(i, k + j) * v[j];
            s *= beta;
            for (std::size_t j = 0; j < len; ++j) q(i, k + j) -= s * v[j];
        }
    }
    return q;
}

double one_norm(const Matrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

std::string pair_name(std::size_t first, std::size_t second) {
    return "blocks " + std::to_string(first) + " and " + std::to_string(second);
}

// Swaps the adjacent diagonal blocks of sizes p (at j) and q (at j + p) of
// the upper form by solving A11 S - S A22 = A12 and orthogonalising [-S; I].
void swap_adjacent(Matrix& t, Matrix& z, std::size_t j, std::size_t p, std::size_t q, std::size_t first_block) {
    const std::size_t n = t.rows();
    const std::size_t w = p + q;
    const Matrix d = t.block(j, j, w, w);
    const Matrix a11 = d.block(0, 0, p, p);
    const Matrix a12 = d.block(0, p, p, q);
    const Matrix a22 = d.block(p, p, q, q);

    // Column-major vec: S(i, c) -> i + p * c.
    const std::size_t k = p * q;
    Matrix kron(k, k);
    Vector rhs(k);
    for (std::size_t c = 0; c < q; ++c)
        for (std::size_t i = 0; i < p; ++i) {
            const std::size_t row = i + p * c;
            rhs[row] = a12(i, c);
            for (std::size_t i2 = 0; i2 < p; ++i2) kron(row, i2 + p * c) += a11(i, i2);
            for (std::size_t c2 = 0; c2 < q; ++c2) kron(row, i + p * c2) -= a22(c2, c);
        }

    const std::string where = pair_name(first_block, first_block + 1);
    Matrix s(p, q);
    try {
        const LuDecomposition lu(kron);
        Matrix inv = lu.solve(Matrix::identity(k));
        const double cond = one_norm(kron) * one_norm(inv);
        if (!(cond <= 1.0 / kUlp)) {
            throw NumericalError("Schur reordering: swap of " + where +
                                 " is ill-conditioned (Sylvester condition " + std::to_string(cond) + ")");
        }
        const Vector sol = lu.solve(rhs);
        for (std::size_t c = 0; c < q; ++c)
            for (std::size_t i = 0; i < p; ++i) s(i, c) = sol[i + p * c];
    } catch (const SingularMatrixError&) {
        throw NumericalError("Schur reordering: swap of " + where +
                             " failed, blocks share an eigenvalue (singular Sylvester system)");
    }

    Matrix basis(w, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t c = 0; c < q; ++c) basis(i, c) = -s(i, c);
    for (std::size_t c = 0; c < q; ++c) basis(p + c, c) = 1.0;
    const Matrix qs = orthogonal_factor(basis);
    const Matrix qst = qs.transposed();

    // Rows j..j+w of t (columns left of j vanish there), then columns.
    const Matrix rows = t.block(j, j, w, n - j);
    t.set_block(j, j, qst * rows);
    const Matrix cols = t.block(0, j, n, w);
    t.set_block(0, j, cols * qs);
    const Matrix zcols = z.block(0, j, n, w);
    z.set_block(0, j, zcols * qs);

    const double thresh = std::max(100.0 * kUlp * d.max_abs(), std::numeric_limits<double>::min());
    double residual = 0.0;
    for (std::size_t i = q; i < w; ++i)
        for (std::size_t c = 0; c < q; ++c) residual = std::max(residual, std::abs(t(j + i, j + c)));
    if (residual > thresh) {
        throw NumericalError("Schur reordering: swap of " + where + " lost block-triangular structure (residual " +
                             std::to_string(residual) + ")");
    }
    for (std::size_t i = q; i < w; ++i)
        for (std::size_t c = 0; c < q; ++c) t(j + i, j + c) = 0.0;

    if (q == 2 && !standardize_block(t, z, j)) {
        throw NumericalError("Schur reordering: complex block split during swap of " + where);
    }
    if (p == 2 && !standardize_block(t, z, j + q)) {
        throw NumericalError("Schur reordering: complex block split during swap of " + where);
    }
}

} // namespace

Spectrum SchurDecomposition::spectrum() const {
    std::vector<Complex> values;
    values.reserve(T.rows());
    for (const auto& b : blocks) {
        values.push_back(b.eigenvalues[0]);
        if (b.size == 2) values.push_back(b.eigenvalues[1]);
    }
    return Spectrum(std::move(values));
}

namespace linalg {

std::array<Complex, 2> block_eigenvalues(double a, double b, double c, double d) {
    const double half_trace = 0.5 * (a + d);
    const double half_diff = 0.5 * (a - d);
    const double disc = half_diff * half_diff + b * c;
    const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    const double tol = 4.0 * kUlp * scale * scale;
    if (disc >= 0.0 || disc >= -tol) {
        const double root = std::sqrt(std::max(disc, 0.0));
        return {Complex(half_trace + root, 0.0), Complex(half_trace - root, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {Complex(half_trace, im), Complex(half_trace, -im)};
}

HessenbergReduction hessenberg(const Matrix& a) {
    if (!a.is_square()) throw ValidationError("hessenberg: matrix must be square");
    Matrix h = a.transposed();
    Matrix z = Matrix::identity(a.rows());
    reduce_upper_hessenberg(h, z);
    return {std::move(z), h.transposed()};
}

SchurDecomposition real_schur(const Matrix& a) { return real_schur(a, 40 * a.rows()); }

SchurDecomposition real_schur(const Matrix& a, std::size_t max_sweeps) {
    if (!a.is_square()) throw ValidationError("real_schur: matrix must be square");
    if (!a.all_finite()) throw ValidationError("real_schur: matrix has non-finite entries");
    Matrix h = a.transposed();
    Matrix z = Matrix::identity(a.rows());
    reduce_upper_hessenberg(h, z);
    francis_iteration(h, z, max_sweeps);
    auto blocks = collect_blocks(h);
    return {std::move(z), h.transposed(), std::move(blocks)};
}

SchurDecomposition reorder_schur(const SchurDecomposition& dec, std::span<const std::size_t> select_blocks) {
    const std::size_t nb = dec.blocks.size();
    std::vector<bool> selected(nb, false);
    for (std::size_t idx : select_blocks) {
        if (idx >= nb) {
            throw ValidationError("reorder_schur: block index " + std::to_string(idx) + " out of range");
        }
        selected[idx] = true;
    }

    Matrix t = dec.T.transposed();
    Matrix z = dec.Q;
    std::vector<std::size_t> sizes(nb);
    for (std::size_t i = 0; i < nb; ++i) sizes[i] = dec.blocks[i].size;

    bool moved_any = false;
    std::size_t dest = 0;
    for (std::size_t idx = 0; idx < nb; ++idx) {
        if (!selected[idx]) continue;
        for (std::size_t pos = idx; pos > dest; --pos) {
            std::size_t start = 0;
            for (std::size_t b = 0; b + 1 < pos; ++b) start += sizes[b];
            swap_adjacent(t, z, start, sizes[pos - 1], sizes[pos], pos - 1);
            std::swap(sizes[pos - 1], sizes[pos]);
            std::swap(selected[pos - 1], selected[pos]);
            moved_any = true;
        }
        ++dest;
    }
    if (!moved_any) return dec;

    auto blocks = collect_blocks(t);
    if (blocks.size() != nb) {
        throw NumericalError("reorder_schur: block structure changed during reordering");
    }
    return {std::move(z), t.transposed(), std::move(blocks)};
}

SchurDecomposition reorder_schur_by_eigenvalue(const SchurDecomposition& dec,
                                               std::span<const std::size_t> select_eigenvalues) {
    std::vector<std::size_t> owner;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b)
        for (std::size_t k = 0; k < dec.blocks[b].size; ++k) owner.push_back(b);

    std::vector<std::size_t> hits(dec.blocks.size(), 0);
    for (std::size_t e : select_eigenvalues) {
        if (e >= owner.size()) {
            throw ValidationError("reorder_schur: eigenvalue index " + std::to_string(e) + " out of range");
        }
        ++hits[owner[e]];
    }
    std::vector<std::size_t> blocks;
    for (std::size_t b = 0; b < hits.size(); ++b) {
        if (hits[b] == 0) continue;
        if (hits[b] != dec.blocks[b].size) {
            throw ValidationError("selection splits the 2x2 block " + std::to_string(b) + " holding " +
                                  format_complex(dec.blocks[b].eigenvalues[0]) + " and " +
                                  format_complex(dec.blocks[b].eigenvalues[1]));
        }
        blocks.push_back(b);
    }
    return reorder_schur(dec, blocks);
}

double matching_tolerance(const Matrix& a) { return 1e-6 * std::max(1.0, a.max_abs()); }

std::vector<std::size_t> match_eigenvalues(std::span<const Complex> targets, std::span<const Complex> candidates,
                                           double tol) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);

    // Two candidates near one target are ambiguous only if they are
    // themselves distinguishable at the same tolerance.
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::vector<std::size_t> near;
        for (std::size_t c = 0; c < candidates.size(); ++c)
            if (std::abs(targets[t] - candidates[c]) <= tol) near.push_back(c);
        for (std::size_t i = 0; i < near.size(); ++i)
            for (std::size_t j = i + 1; j < near.size(); ++j)
                if (std::abs(candidates[near[i]] - candidates[near[j]]) > tol) {
                    throw MatchingError("eigenvalue " + format_complex(targets[t]) + " is ambiguous: both " +
                                        format_complex(candidates[near[i]]) + " and " +
                                        format_complex(candidates[near[j]]) + " lie within " +
                                        std::to_string(tol));
                }
    }

    struct Pair {
        double dist;
        std::size_t target;
        std::size_t cand;
    };
    std::vector<Pair> pairs;
    for (std::size_t t = 0; t < targets.size(); ++t)
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double dist = std::abs(targets[t] - candidates[c]);
            if (dist <= tol) pairs.push_back({dist, t, c});
        }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });

    std::vector<std::size_t> assignment(targets.size(), none);
    std::vector<bool> taken(candidates.size(), false);
    for (const auto& pr : pairs) {
        if (assignment[pr.target] != none || taken[pr.cand]) continue;
        assignment[pr.target] = pr.cand;
        taken[pr.cand] = true;
    }

    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (assignment[t] != none) continue;
        std::vector<std::size_t> order(candidates.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::abs(targets[t] - candidates[x]) < std::abs(targets[t] - candidates[y]);
        });
        std::ostringstream os;
        os << "eigenvalue " << format_complex(targets[t]) << " does not match the computed spectrum within "
           << tol << " (or its multiplicity is exceeded); nearest:";
        for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i) {
            os << ' ' << format_complex(candidates[order[i]]) << (taken[order[i]] ? " (taken)" : "");
        }
        throw MatchingError(os.str());
    }
    return assignment;
}

InvariantSplit invariant_split(const Matrix& a, const Spectrum& moved) {
    if (!a.is_square()) throw ValidationError("invariant_split: matrix must be square");
    const std::size_t n = a.rows();
    if (moved.size() > n) throw ValidationError("invariant_split: more eigenvalues to move than the dimension");

    const SchurDecomposition dec = real_schur(a);
    const Spectrum computed = dec.spectrum();
    const auto assignment = match_eigenvalues(moved.values(), computed.values(), matching_tolerance(a));
    const SchurDecomposition ordered = reorder_schur_by_eigenvalue(dec, assignment);

    const std::size_t r = moved.size();
    std::vector<Complex> moved_values;
    std::vector<Complex> kept_values;
    for (const auto& b : ordered.blocks) {
        auto& dest = b.start < r ? moved_values : kept_values;
        dest.push_back(b.eigenvalues[0]);
        if (b.size == 2) dest.push_back(b.eigenvalues[1]);
    }
    if (moved_values.size() != r) {
        throw NumericalError("invariant_split: leading blocks do not align with the moved set");
    }

    InvariantSplit split;
    split.U = ordered.Q.block(0, 0, n, r);
    split.V = ordered.Q.block(0, r, n, n - r);
    split.X = ordered.T.block(0, 0, r, r);
    split.Y = ordered.T.block(r, r, n - r, n - r);
    split.moved = Spectrum(std::move(moved_values));
    split.kept = Spectrum(std::move(kept_values));
    return split;
}

Spectrum eigenvalues(const Matrix& a) { return real_schur(a).spectrum(); }

} // namespace linalg
} // namespace poleplace
