#include "support.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace poleplace;
using testing::Rng;

namespace {

StateSpace double_integrator() { return StateSpace(Matrix{{0, 1}, {0, 0}}, Vector{0, 1}); }

std::vector<Complex> random_points(Rng& rng, std::size_t n) {
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
    return out;
}

} // namespace

TEST_CASE("closed_loop") {
    const StateSpace sys = double_integrator();
    CHECK(verify::closed_loop(sys, Vector{0, 0}) == sys.A());
    CHECK(verify::closed_loop(sys, Vector{-2, -3}) == Matrix{{0, 1}, {-2, -3}});
    CHECK_THROWS_AS(verify::closed_loop(sys, Vector{1, 2, 3}), ValidationError);

    Rng rng(401);
    const StateSpace r = testing::random_controllable(rng, 5);
    const Vector k = testing::random_vector(rng, 5);
    const Matrix diff = verify::closed_loop(r, k) - r.A();
    CHECK(linalg::pivot_rank(diff, 1e-12) <= 1);
}

TEST_CASE("charpoly_residual") {
    const StateSpace sys = double_integrator();
    CHECK(verify::charpoly_residual(sys, Vector{-2, -3}, Spectrum{-1.0, -2.0}) <= 1e-12);
    CHECK(verify::charpoly_residual(sys, Vector{0, 0}, Spectrum{0.0, 0.0}) == 0.0);
    // s^2 against s^2 + 3s + 2: the worst relative coefficient gap is 3/3.
    CHECK(verify::charpoly_residual(sys, Vector{0, 0}, Spectrum{-1.0, -2.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(verify::charpoly_residual(sys, Vector{0, 0}, Spectrum{-1.0}), ValidationError);

    Rng rng(402);
    for (int trial = 0; trial < 20; ++trial) {
        const Spectrum spec = testing::random_separated_spectrum(rng, 5, 0.1, rng.index(3));
        const StateSpace s = testing::controllable_with_spectrum(rng, spec);
        CHECK(verify::charpoly_residual(s, Vector(5), spec) <= 1e-10);
    }
}

TEST_CASE("spectrum_distance") {
    CHECK(verify::spectrum_distance(Spectrum{-1.0, -2.0}, Spectrum{-2.0, -1.0}) == 0.0);
    CHECK(verify::spectrum_distance(Spectrum{-1.0, -2.0}, Spectrum{-1.0, -2.0 + 1e-7}) == doctest::Approx(1e-7));
    CHECK(verify::spectrum_distance(Spectrum{Complex(-1, 1), Complex(-1, -1)},
                                    Spectrum{Complex(-1, -1), Complex(-1, 1)}) == 0.0);
    CHECK(verify::spectrum_distance(Spectrum{}, Spectrum{}) == 0.0);
    CHECK_THROWS_AS(verify::spectrum_distance(Spectrum{-1.0}, Spectrum{-1.0, -2.0}), ValidationError);

    SUBCASE("the bottleneck is not the greedy choice") {
        // Pairing the nearest values 1 and 1.05 first would leave 0 -> 2.
        const std::vector<Complex> a{0.0, 1.0};
        const std::vector<Complex> b{1.05, 2.0};
        CHECK(verify::match_spectra(a, b).distance == doctest::Approx(1.05));
    }

    SUBCASE("agrees with an independent bottleneck oracle") {
        Rng rng(403);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + rng.index(12);
            const auto a = random_points(rng, n);
            const auto b = random_points(rng, n);
            const SpectrumMatch m = verify::match_spectra(a, b);
            CHECK(m.distance == testing::bottleneck(a, b));
            double worst = 0.0;
            std::vector<bool> used(n, false);
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(m.assignment[i] < n);
                CHECK(!used[m.assignment[i]]);
                used[m.assignment[i]] = true;
                worst = std::max(worst, std::abs(a[i] - b[m.assignment[i]]));
            }
            CHECK(worst == m.distance);
        }
    }

    SUBCASE("pseudometric") {
        Rng rng(404);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + rng.index(12);
            const auto a = random_points(rng, n);
            const auto b = random_points(rng, n);
            const auto c = random_points(rng, n);
            const double ab = verify::match_spectra(a, b).distance;
            const double ba = verify::match_spectra(b, a).distance;
            const double bc = verify::match_spectra(b, c).distance;
            const double ac = verify::match_spectra(a, c).distance;
            CHECK(ab == ba);
            CHECK(ac <= ab + bc + 1e-15);
            CHECK(verify::match_spectra(a, a).distance == 0.0);
        }
    }
}

TEST_CASE("adjugate_identity_check") {
    const std::array<double, 3> samples{1.0, 2.0, 5.0};

    SUBCASE("double integrator") {
        const AdjugateCheck c = verify::adjugate_identity_check(double_integrator(), Vector{2, 1}, -1.0, samples);
        CHECK(c.residual <= 1e-10);
        // adj(sI - A)^T b = [0, s] gives (s + 1) s, not (s + 1)(s + 2).
        CHECK(c.transposed_residual > 0.1);
        CHECK(!c.transposed_form_holds);
    }
    SUBCASE("scalar system") {
        const StateSpace sys(Matrix{{0.7}}, Vector{1});
        const AdjugateCheck c = verify::adjugate_identity_check(sys, Vector{1}, -2.0, samples);
        CHECK(c.residual == 0.0);
        CHECK(c.transposed_residual == 0.0);
    }
    SUBCASE("random controllable systems") {
        Rng rng(405);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng.index(5);
            const StateSpace sys = testing::random_controllable(rng, n, 1e6);
            const Spectrum targets = testing::random_targets(rng, n);
            const double lambda = rng.uniform(-3.0, -0.1);
            const Vector gamma = placement::gamma_recursion(poly::monic_from_roots(targets), lambda);
            const Vector omega = placement::omega_vector(sys, gamma);
            // Samples above the spectral radius bound stay away from the eigenvalues.
            const double radius = 1.0 + static_cast<double>(n) * sys.A().max_abs();
            const std::array<double, 3> s{radius + 0.5, radius + 1.5, -radius - 1.0};
            CHECK(verify::adjugate_identity_check(sys, omega, lambda, s).residual <= 1e-8);
        }
    }
    SUBCASE("samples at an eigenvalue are rejected") {
        const std::array<double, 1> bad{0.0};
        CHECK_THROWS_AS(verify::adjugate_identity_check(double_integrator(), Vector{2, 1}, -1.0, bad),
                        ValidationError);
    }
}

TEST_CASE("diagnostics") {
    SUBCASE("well-conditioned system") {
        const StateSpace sys = double_integrator();
        const Spectrum targets{-1.0, -2.0};
        const Gain g = placement::place_ackermann(sys, targets);
        const Diagnostics d = verify::diagnostics(sys, g, targets);
        CHECK(d.warnings.empty());
        REQUIRE(d.charpoly_residual);
        REQUIRE(d.spectrum_residual);
        CHECK(*d.charpoly_residual <= 1e-10);
        CHECK(*d.spectrum_residual <= 1e-10);
        CHECK(d.kappa_c == doctest::Approx(1.0));
    }
    SUBCASE("exact hand gain") {
        const StateSpace sys(Matrix{{1, 0}, {0, 2}}, Vector{1, 1});
        Gain g;
        g.k = Vector{8, -15};
        const Diagnostics d = verify::diagnostics(sys, g, Spectrum{-1.0, -3.0});
        REQUIRE(d.spectrum_residual);
        CHECK(*d.spectrum_residual <= 1e-9);
        CHECK(*d.charpoly_residual == 0.0);
    }
    SUBCASE("ill-conditioned controllability") {
        std::vector<double> diag;
        for (int i = 1; i <= 12; ++i) diag.push_back(i);
        const StateSpace sys(Matrix::diagonal(diag), Vector(12, 1.0));
        Gain g;
        g.k = Vector(12);
        const Diagnostics d = verify::diagnostics(sys, g, linalg::eigenvalues(sys.A()));
        CHECK(d.kappa_c > kConditionWarning);
        CHECK(d.has_warning("ill_conditioned_controllability"));
    }
    SUBCASE("step-level entries are kept and checked") {
        const StateSpace sys = double_integrator();
        Gain g = placement::place_ackermann(sys, Spectrum{-1.0, -2.0});
        g.diagnostics.kappa_steps = {3.0, 1e9};
        g.diagnostics.max_inverted_size = 2;
        const Diagnostics d = verify::diagnostics(sys, g, Spectrum{-1.0, -2.0});
        CHECK(d.kappa_steps == std::vector<double>{3.0, 1e9});
        CHECK(d.max_inverted_size == 2);
        CHECK(d.has_warning("ill_conditioned_step"));
    }
}

TEST_CASE("the two oracles agree on moderately conditioned systems") {
    Rng rng(406);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(6);
        const StateSpace sys = testing::random_controllable(rng, n, 1e6);
        const Spectrum targets = testing::random_separated_spectrum(rng, n, 0.1, rng.index(n / 2 + 1));
        const Gain g = placement::place_ackermann(sys, targets);
        if (verify::closed_loop(sys, g.k).max_abs() > 10.0) continue;
        if (verify::charpoly_residual(sys, g.k, targets) > 1e-8) continue;
        ++compared;
        CHECK(verify::spectrum_distance(linalg::eigenvalues(verify::closed_loop(sys, g.k)), targets) <= 1e-5);
        CHECK(testing::bottleneck(testing::oracle_eigenvalues(verify::closed_loop(sys, g.k)), targets.values()) <=
              1e-5);
    }
    CHECK(compared >= 20);
}
