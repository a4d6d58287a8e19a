#include "support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace testing {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
    Matrix a(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
    return a;
}

bool has_matching(const std::vector<Complex>& a, const std::vector<Complex>& b, double limit,
                  std::vector<int>& owner) {
    const std::size_t n = a.size();
    owner.assign(n, -1);
    std::vector<char> seen;
    std::function<bool(std::size_t)> try_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j] || std::abs(a[i] - b[j]) > limit) continue;
            seen[j] = 1;
            if (owner[j] < 0 || try_row(static_cast<std::size_t>(owner[j]))) {
                owner[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        seen.assign(n, 0);
        if (!try_row(i)) return false;
    }
    return true;
}

} // namespace

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

Vector random_vector(Rng& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

Matrix random_orthogonal(Rng& rng, std::size_t n) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(to_eigen(random_matrix(rng, n, n)));
    return from_eigen(qr.householderQ() * Eigen::MatrixXd::Identity(n, n));
}

StateSpace random_controllable(Rng& rng, std::size_t n, double max_kappa) {
    while (true) {
        StateSpace sys(random_matrix(rng, n, n), random_vector(rng, n));
        const double kappa = linalg::condition_number(placement::controllability_matrix(sys));
        if (kappa <= max_kappa) return sys;
    }
}

Spectrum random_targets(Rng& rng, std::size_t n, double re_lo, double re_hi) {
    const std::size_t pairs = rng.index(n / 2 + 1);
    std::vector<Complex> values;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double re = rng.uniform(re_lo, re_hi);
        const double im = rng.uniform(0.1, 3.0);
        values.emplace_back(re, im);
        values.emplace_back(re, -im);
    }
    while (values.size() < n) values.emplace_back(rng.uniform(re_lo, re_hi), 0.0);
    std::shuffle(values.begin(), values.end(), rng.engine());
    return Spectrum(std::move(values));
}

Spectrum random_separated_spectrum(Rng& rng, std::size_t n, double gap, std::size_t pairs) {
    while (true) {
        std::vector<Complex> values;
        for (std::size_t i = 0; i < pairs && values.size() + 2 <= n; ++i) {
            const double re = rng.uniform(-3.0, 3.0);
            const double im = rng.uniform(gap, 3.0);
            values.emplace_back(re, im);
            values.emplace_back(re, -im);
        }
        while (values.size() < n) values.emplace_back(rng.uniform(-3.0, 3.0), 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j) ok = std::abs(values[i] - values[j]) >= gap;
        if (ok) return Spectrum(std::move(values));
    }
}

Matrix matrix_with_spectrum(Rng& rng, const Spectrum& spectrum, double coupling) {
    const std::size_t n = spectrum.size();
    Matrix t(n, n);
    std::size_t i = 0;
    std::vector<bool> used(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (used[s]) continue;
        const Complex z = spectrum[s];
        used[s] = true;
        if (z.imag() == 0.0) {
            t(i, i) = z.real();
            i += 1;
            continue;
        }
        for (std::size_t p = s + 1; p < n; ++p) {
            if (!used[p] && spectrum[p] == std::conj(z)) {
                used[p] = true;
                break;
            }
        }
        // [[re, -w/g], [w*g, re]] has eigenvalues re +- i w for any g > 0.
        const double w = std::abs(z.imag());
        const double g = rng.uniform(0.5, 2.0);
        t(i, i) = z.real();
        t(i + 1, i + 1) = z.real();
        t(i, i + 1) = -w / g;
        t(i + 1, i) = w * g;
        i += 2;
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < r; ++c)
            if (t(r, c) == 0.0 && !(c + 1 == r && t(c, r) != 0.0)) t(r, c) = coupling * rng.uniform(-1.0, 1.0);
    const Matrix q = random_orthogonal(rng, n);
    return q * t * q.transposed();
}

StateSpace controllable_with_spectrum(Rng& rng, const Spectrum& spectrum, double max_kappa) {
    while (true) {
        StateSpace sys(matrix_with_spectrum(rng, spectrum), random_vector(rng, spectrum.size()));
        if (linalg::condition_number(placement::controllability_matrix(sys)) <= max_kappa) return sys;
    }
}

std::vector<Complex> oracle_eigenvalues(const Matrix& a) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a), false);
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

std::vector<Complex> oracle_closed_loop_eigenvalues(const StateSpace& sys, const Vector& k) {
    using Wide = long double;
    const std::size_t n = sys.n();
    Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = static_cast<Wide>(sys.A()(i, j)) + static_cast<Wide>(sys.b()[i]) * static_cast<Wide>(k[j]);
    const Eigen::EigenSolver<decltype(m)> es(m, false);
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto z = es.eigenvalues()[i];
        out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return out;
}

double bottleneck(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.empty()) return 0.0;
    std::vector<double> levels;
    for (const auto& x : a)
        for (const auto& y : b) levels.push_back(std::abs(x - y));
    std::sort(levels.begin(), levels.end());
    std::vector<int> owner;
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (has_matching(a, b, levels[mid], owner)) hi = mid;
        else lo = mid + 1;
    }
    return levels[lo];
}

std::vector<double> matched_distances(const std::vector<Complex>& wanted, const std::vector<Complex>& actual) {
    std::vector<int> owner;
    has_matching(wanted, actual, bottleneck(wanted, actual), owner);
    std::vector<double> out(wanted.size());
    for (std::size_t j = 0; j < actual.size(); ++j) {
        const auto i = static_cast<std::size_t>(owner[j]);
        out[i] = std::abs(wanted[i] - actual[j]);
    }
    return out;
}

std::vector<Spectrum> conjugate_closed_subsets(const Spectrum& s) {
    // Units: single reals, or a value with positive imaginary part plus its partner.
    std::vector<std::vector<Complex>> units;
    for (const auto& z : s) {
        if (z.imag() == 0.0) units.push_back({z});
        else if (z.imag() > 0.0) units.push_back({z, std::conj(z)});
    }
    std::vector<Spectrum> out;
    const std::size_t count = std::size_t{1} << units.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<Complex> values;
        for (std::size_t u = 0; u < units.size(); ++u)
            if (mask & (std::size_t{1} << u)) values.insert(values.end(), units[u].begin(), units[u].end());
        out.emplace_back(std::move(values));
    }
    return out;
}

double rel_diff(const Vector& a, const Vector& b) {
    const double scale = std::max(a.max_abs(), b.max_abs());
    if (scale == 0.0) return 0.0;
    return max_abs_diff(a, b) / scale;
}

double orthogonality_error(const Matrix& q) {
    return max_abs_diff(q.transposed() * q, Matrix::identity(q.cols()));
}

bool is_lower_quasi_triangular(const SchurDecomposition& dec) {
    const std::size_t n = dec.T.rows();
    std::vector<bool> pair_start(n, false);
    for (const auto& b : dec.blocks)
        if (b.size == 2) pair_start[b.start] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool inside_block = j == i + 1 && pair_start[i];
            if (!inside_block && dec.T(i, j) != 0.0) return false;
        }
    return true;
}

} // namespace testing
