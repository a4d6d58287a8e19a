#pragma once

// Shared fixtures for the test binaries: seeded generators and oracles that
// do not go through the library's own eigen-solver.

#include <poleplace/poleplace.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using namespace poleplace;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0);
Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0);
Matrix random_orthogonal(Rng& rng, std::size_t n);

/// Dense pair with entries in [-1, 1], resampled until cond(Con(A, b)) <= max_kappa.
StateSpace random_controllable(Rng& rng, std::size_t n, double max_kappa = 1e8);

/// Self-conjugate set of n values with real parts in [re_lo, re_hi] and
/// imaginary parts (of pairs) in [0.1, 3].
Spectrum random_targets(Rng& rng, std::size_t n, double re_lo = -3.0, double re_hi = -0.1);

/// Self-conjugate set whose elements are pairwise at least `gap` apart.
Spectrum random_separated_spectrum(Rng& rng, std::size_t n, double gap, std::size_t pairs);

/// Q T Q^T with T lower quasi-triangular carrying `spectrum` on its
/// diagonal blocks and random couplings below; Q random orthogonal.
Matrix matrix_with_spectrum(Rng& rng, const Spectrum& spectrum, double coupling = 1.0);

/// Controllable pair with the prescribed open-loop spectrum.
StateSpace controllable_with_spectrum(Rng& rng, const Spectrum& spectrum, double max_kappa = 1e8);

/// Eigenvalues from Eigen's EigenSolver: the independent eigenvalue oracle.
std::vector<Complex> oracle_eigenvalues(const Matrix& a);

/// Eigenvalues of A + b k^T with the update and the eigen-solve carried out
/// in long double, so large gains do not drown the measurement in rounding.
std::vector<Complex> oracle_closed_loop_eigenvalues(const StateSpace& sys, const Vector& k);

/// Bottleneck distance between two equally sized lists, by exhaustive
/// threshold search with bipartite matching (independent of verify::).
double bottleneck(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// For each element of `wanted`, the distance to its partner in an optimal
/// bottleneck matching against `actual`.
std::vector<double> matched_distances(const std::vector<Complex>& wanted, const std::vector<Complex>& actual);

/// All sub-multisets that keep conjugate pairs together.
std::vector<Spectrum> conjugate_closed_subsets(const Spectrum& s);

/// max|a - b| / max(max|a|, max|b|); 0 when both are zero.
double rel_diff(const Vector& a, const Vector& b);

double orthogonality_error(const Matrix& q);

/// Lower Hessenberg, quasi-triangular checks on exact zeros.
bool is_lower_quasi_triangular(const SchurDecomposition& dec);

} // namespace testing
