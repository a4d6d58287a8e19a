#pragma once

#include "poleplace/linalg.hpp"
#include "poleplace/system.hpp"

#include <span>
#include <vector>

namespace poleplace {

struct SpectrumMatch {
    double distance = 0.0;              // max |a_i - b_assignment[i]|
    std::vector<std::size_t> assignment; // index into the second list for each element of the first
};

struct AdjugateCheck {
    /// max over samples of |det(sI - Abar) - (s - lambda1) w^T adj(sI - A) b| / max(1, |det(sI - Abar)|)
    double residual = 0.0;
    /// Same with adj(sI - A^T), the transposed placement of the adjugate.
    double transposed_residual = 0.0;
    bool transposed_form_holds = false;
};

namespace verify {

/// A + b k^T.
Matrix closed_loop(const StateSpace& sys, const Vector& k);

/// Max relative coefficient deviation between char_poly(A + b k^T) and the
/// monic polynomial of `targets` (denominator max(1, |target coefficient|)).
double charpoly_residual(const StateSpace& sys, const Vector& k, const Spectrum& targets);

/// Bottleneck matching: minimises the largest pairwise distance. Exact for
/// up to 12 elements, greedy nearest-first beyond.
SpectrumMatch match_spectra(std::span<const Complex> a, std::span<const Complex> b);

double spectrum_distance(const Spectrum& a, const Spectrum& b);

/// Numerical check of det(sI - Abar) = (s - lambda1) w^T adj(sI - A) b with
/// Abar from place_eigenpair(sys, omega, lambda1).
AdjugateCheck adjugate_identity_check(const StateSpace& sys, const Vector& omega, double lambda1,
                                      std::span<const double> samples);

/// Recomputes condition numbers, both oracle residuals and warnings for a
/// gain; step-level entries already present in gain.diagnostics are kept.
Diagnostics diagnostics(const StateSpace& sys, const Gain& gain, const Spectrum& targets);

} // namespace verify
} // namespace poleplace
