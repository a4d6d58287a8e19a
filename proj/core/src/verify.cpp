#include "poleplace/verify.hpp"

#include "poleplace/placement.hpp"
#include "poleplace/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace poleplace::verify {

namespace {

constexpr std::size_t kExactMatchingLimit = 12;

// Kuhn's augmenting paths on the bipartite graph {i -> j : |a_i - b_j| <= limit}.
bool perfect_matching(std::span<const Complex> a, std::span<const Complex> b, double limit,
                      std::vector<std::size_t>& match_of_b) {
    const std::size_t n = a.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    match_of_b.assign(n, none);
    std::vector<bool> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j] || std::abs(a[i] - b[j]) > limit) continue;
            seen[j] = true;
            if (match_of_b[j] == none || augment(match_of_b[j])) {
                match_of_b[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        seen.assign(n, false);
        if (!augment(i)) return false;
    }
    return true;
}

} // namespace

Matrix closed_loop(const StateSpace& sys, const Vector& k) {
    if (k.size() != sys.n()) throw ValidationError("closed_loop: gain length does not match the state dimension");
    return sys.A() + outer(sys.b(), k);
}

double charpoly_residual(const StateSpace& sys, const Vector& k, const Spectrum& targets) {
    if (targets.size() != sys.n()) throw ValidationError("charpoly_residual: need n target eigenvalues");
    if (k.size() != sys.n()) throw ValidationError("charpoly_residual: gain length does not match the state dimension");
    const Polynomial actual = poly::char_poly(sys.A(), sys.b(), k);
    const Polynomial wanted = poly::monic_from_roots(targets);
    double worst = 0.0;
    for (std::size_t j = 0; j <= wanted.degree(); ++j) {
        worst = std::max(worst, std::abs(actual[j] - wanted[j]) / std::max(1.0, std::abs(wanted[j])));
    }
    return worst;
}

SpectrumMatch match_spectra(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw ValidationError("spectrum_distance: sizes differ (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    const std::size_t n = a.size();
    SpectrumMatch out;
    out.assignment.assign(n, 0);
    if (n == 0) return out;

    if (n <= kExactMatchingLimit) {
        std::vector<double> levels;
        levels.reserve(n * n);
        for (const auto& x : a)
            for (const auto& y : b) levels.push_back(std::abs(x - y));
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::size_t lo = 0, hi = levels.size() - 1;
        std::vector<std::size_t> match_of_b;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (perfect_matching(a, b, levels[mid], match_of_b)) hi = mid;
            else lo = mid + 1;
        }
        perfect_matching(a, b, levels[lo], match_of_b);
        for (std::size_t j = 0; j < n; ++j) out.assignment[match_of_b[j]] = j;
        out.distance = levels[lo];
        return out;
    }

    struct Pair {
        double dist;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });
    std::vector<bool> used_a(n, false), used_b(n, false);
    for (const auto& p : pairs) {
        if (used_a[p.i] || used_b[p.j]) continue;
        used_a[p.i] = used_b[p.j] = true;
        out.assignment[p.i] = p.j;
        out.distance = std::max(out.distance, p.dist);
    }
    return out;
}

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
    return match_spectra(a.values(), b.values()).distance;
}

AdjugateCheck adjugate_identity_check(const StateSpace& sys, const Vector& omega, double lambda1,
                                      std::span<const double> samples) {
    const std::size_t n = sys.n();
    const Gain gain = placement::place_eigenpair(sys, omega, lambda1);
    const Vector w = (1.0 / dot(omega, sys.b())) * omega;
    const Matrix closed = closed_loop(sys, gain.k);
    const Matrix eye = Matrix::identity(n);

    AdjugateCheck out;
    for (double s : samples) {
        const Matrix m = s * eye - sys.A();
        const double det_m = linalg::determinant(m);
        if (!(std::abs(det_m) >= 1e-9)) {
            throw ValidationError("adjugate_identity_check: sample " + std::to_string(s) +
                                  " is too close to an eigenvalue of A");
        }
        const Matrix adj = det_m * linalg::solve_linear(m, eye);
        const double lhs = linalg::determinant(s * eye - closed);
        const double scale = std::max(1.0, std::abs(lhs));
        const double direct = (s - lambda1) * dot(w, adj * sys.b());
        const double transposed = (s - lambda1) * dot(w, adj.transposed() * sys.b());
        out.residual = std::max(out.residual, std::abs(lhs - direct) / scale);
        out.transposed_residual = std::max(out.transposed_residual, std::abs(lhs - transposed) / scale);
    }
    out.transposed_form_holds = out.transposed_residual <= 1e-8;
    return out;
}

Diagnostics diagnostics(const StateSpace& sys, const Gain& gain, const Spectrum& targets) {
    Diagnostics d = gain.diagnostics;
    d.warnings.clear();
    d.kappa_c = linalg::condition_number(placement::controllability_matrix(sys));
    d.charpoly_residual = charpoly_residual(sys, gain.k, targets);
    try {
        d.spectrum_residual = spectrum_distance(linalg::eigenvalues(closed_loop(sys, gain.k)), targets);
    } catch (const NonConvergenceError& e) {
        d.spectrum_residual.reset();
        d.warnings.push_back({"eigenvalues_unavailable", e.what()});
    }
    if (d.kappa_c > kConditionWarning) {
        d.warnings.push_back({"ill_conditioned_controllability", "cond(Con(A,b)) = " + std::to_string(d.kappa_c) +
                                                                     " exceeds " + std::to_string(kConditionWarning)});
    }
    if (d.charpoly_residual && d.spectrum_residual && *d.charpoly_residual <= 1e-8 && *d.spectrum_residual > 1e-5) {
        d.warnings.push_back({"eigenvalue_sensitivity",
                              "coefficients match but eigenvalues deviate by " + std::to_string(*d.spectrum_residual)});
    }
    for (double kappa : d.kappa_steps) {
        if (kappa > kConditionWarning) {
            d.warnings.push_back({"ill_conditioned_step", "projected controllability condition " +
                                                              std::to_string(kappa)});
            break;
        }
    }
    return d;
}

} // namespace poleplace::verify
