#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace poleplace;
using testing::Rng;

namespace {

StateSpace double_integrator() { return StateSpace(Matrix{{0, 1}, {0, 0}}, Vector{0, 1}); }
StateSpace diag12() { return StateSpace(Matrix{{1, 0}, {0, 2}}, Vector{1, 1}); }

void check_close(const Vector& got, const Vector& want, double tol) {
    REQUIRE(got.size() == want.size());
    CHECK(max_abs_diff(got, want) <= tol);
}

} // namespace

TEST_CASE("StateSpace validation") {
    CHECK_THROWS_AS(StateSpace(Matrix(2, 3), Vector(2, 1.0)), ValidationError);
    CHECK_THROWS_AS(StateSpace(Matrix(2, 2), Vector(3, 1.0)), ValidationError);
    CHECK_THROWS_AS(StateSpace(Matrix(2, 2), Vector(2, 0.0)), ValidationError);
    CHECK_THROWS_AS(StateSpace(Matrix{{1, std::nan("")}, {0, 1}}, Vector{1, 1}), ValidationError);
    CHECK_THROWS_AS(StateSpace(Matrix(), Vector()), ValidationError);
}

TEST_CASE("controllability_matrix") {
    CHECK(placement::controllability_matrix(double_integrator()) == Matrix{{0, 1}, {1, 0}});
    CHECK(placement::controllability_matrix(diag12()) == Matrix{{1, 1}, {1, 2}});
    CHECK(placement::controllability_matrix(StateSpace(Matrix{{1, 0}, {0, 2}}, Vector{1, 0})) ==
          Matrix{{1, 1}, {0, 0}});
}

TEST_CASE("controller_canonical") {
    SUBCASE("double integrator is already canonical") {
        const CanonicalForm cf = placement::controller_canonical(double_integrator());
        CHECK(cf.Ac == Matrix{{0, 1}, {0, 0}});
        CHECK(cf.bc == Vector{0, 1});
        CHECK(max_abs_diff(cf.T, Matrix::identity(2)) <= 1e-15);
    }
    SUBCASE("diag(1,2)") {
        const CanonicalForm cf = placement::controller_canonical(diag12());
        CHECK(cf.Ac == Matrix{{0, 1}, {-2, 3}});
        CHECK(max_abs_diff(cf.T, Matrix{{-2, 1}, {-1, 1}}) <= 1e-14);
        CHECK(cf.p == Polynomial{2, -3, 1});
    }
    SUBCASE("uncontrollable pair") {
        try {
            placement::controller_canonical(StateSpace(Matrix{{1, 0}, {0, 2}}, Vector{1, 0}));
            FAIL("expected UncontrollableError");
        } catch (const UncontrollableError& e) {
            CHECK(e.rank() == 1);
        }
    }
    SUBCASE("similarity invariants on random pairs") {
        Rng rng(201);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng.index(7);
            const StateSpace sys = testing::random_controllable(rng, n);
            const CanonicalForm cf = placement::controller_canonical(sys);
            const double kappa = linalg::condition_number(cf.C);
            const double tol = 1e-9 * std::max(1.0, sys.A().max_abs()) * kappa;
            CHECK(max_abs_diff(cf.T * cf.Ac, sys.A() * cf.T) <= tol);
            CHECK(max_abs_diff(cf.T * cf.bc, sys.b()) <= tol);
            CHECK(max_abs_diff(cf.T * cf.Cc, cf.C) <= tol);
        }
    }
}

TEST_CASE("gamma vectors") {
    CHECK(placement::gamma_vector(Polynomial{2, 1}, 2) == Vector{2, 1});
    CHECK(placement::gamma_vector(Polynomial{3, 1}, 4) == Vector{3, 1, 0, 0});
    CHECK(placement::gamma_vector(Polynomial{1}, 3) == Vector{1, 0, 0});
    CHECK_THROWS_AS(placement::gamma_vector(Polynomial{1, 2, 1}, 2), ValidationError);
    CHECK_THROWS_AS(placement::gamma_vector(Polynomial{1, 2}, 3), ValidationError); // not monic

    CHECK(placement::gamma_recursion(Polynomial{2, 3, 1}, -1.0) == Vector{2, 1});
    CHECK(placement::gamma_recursion(Polynomial{0, 0, 1}, 0.0) == Vector{0, 1});

    CHECK(placement::gamma_full(Polynomial{0, 0, 1}, Polynomial{2, 3, 1}) == Vector{-2, -3});
    CHECK(placement::gamma_full(Polynomial{2, 3, 1}, Polynomial{2, 3, 1}) == Vector{0, 0});
    CHECK(placement::gamma_full(Polynomial{2, -3, 1}, Polynomial{3, 4, 1}) == Vector{-1, -7});
    CHECK_THROWS_AS(placement::gamma_full(Polynomial{1, 1}, Polynomial{2, 3, 1}), ValidationError);

    SUBCASE("recursion agrees with synthetic division") {
        Rng rng(211);
        for (int trial = 0; trial < 200; ++trial) {
            const double root = rng.uniform(-3.0, 3.0);
            const Polynomial cubic = Polynomial{-root, 1} * Polynomial{rng.uniform(-2, 2), rng.uniform(-2, 2), 1};
            const Vector by_recursion = placement::gamma_recursion(cubic, root);
            const Vector by_deflation = placement::gamma_vector(poly::deflate(cubic, root).quotient, 3);
            CHECK(max_abs_diff(by_recursion, by_deflation) <= 1e-12);
        }
    }
}

TEST_CASE("omega_vector") {
    check_close(placement::omega_vector(double_integrator(), Vector{2, 1}), Vector{2, 1}, 1e-15);

    SUBCASE("gamma_0 gives the last row of the inverse controllability matrix") {
        Rng rng(221);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 2 + rng.index(7);
            const StateSpace sys = testing::random_controllable(rng, n, 1e6);
            const Vector w0 = placement::omega_vector(sys, Vector::unit(n, 0));
            const Matrix c = placement::controllability_matrix(sys);
            // w0^T C = e_n^T.
            CHECK(max_abs_diff(row_times(w0, c), Vector::unit(n, n - 1)) <= 1e-8);
        }
    }
    SUBCASE("degree n-1 monic sources are normalised against b") {
        Rng rng(222);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng.index(7);
            const StateSpace sys = testing::random_controllable(rng, n);
            const Polynomial q = poly::monic_from_roots(testing::random_targets(rng, n - 1));
            const Vector w = placement::omega_vector(sys, placement::gamma_vector(q, n));
            CHECK(std::abs(dot(w, sys.b()) - 1.0) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(placement::omega_vector(StateSpace(Matrix{{1, 0}, {0, 2}}, Vector{1, 0}), Vector{1, 0}),
                    UncontrollableError);
    CHECK_THROWS_AS(placement::omega_vector(double_integrator(), Vector{1, 0, 0}), ValidationError);
}

TEST_CASE("place_eigenpair") {
    SUBCASE("double integrator") {
        const Gain g = placement::place_eigenpair(double_integrator(), Vector{2, 1}, -1.0);
        check_close(g.k, Vector{-2, -3}, 1e-14);
        CHECK(g.method == Method::eigenpair);
        CHECK(poly::char_poly(verify::closed_loop(double_integrator(), g.k)) == Polynomial{2, 3, 1});
    }
    SUBCASE("left eigenvector at its own eigenvalue gives zero") {
        const Gain g = placement::place_eigenpair(diag12(), Vector{0, 1}, 2.0);
        CHECK(g.k.max_abs() == 0.0);
    }
    SUBCASE("Simon-Mitter shift on diag(1,2)") {
        check_close(placement::place_eigenpair(diag12(), Vector{1, 0}, -1.0).k, Vector{-2, 0}, 1e-15);
    }
    SUBCASE("omega orthogonal to b is rejected") {
        CHECK_THROWS_AS(placement::place_eigenpair(diag12(), Vector{1, -1}, -1.0), NumericalError);
    }
    SUBCASE("(lambda1, omega) is a left eigenpair of the closed loop") {
        Rng rng(231);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng.index(7);
            const StateSpace sys = testing::random_controllable(rng, n);
            Vector w = testing::random_vector(rng, n);
            const double lambda1 = rng.uniform(-3.0, 3.0);
            const Gain g = placement::place_eigenpair(sys, w, lambda1);
            w *= 1.0 / dot(w, sys.b());
            const Matrix closed = verify::closed_loop(sys, g.k);
            const Vector residual = row_times(w, closed) - lambda1 * w;
            CHECK(residual.norm() <= 1e-9 * std::max(1.0, closed.max_abs()) * std::max(1.0, w.norm()));
        }
    }
}

TEST_CASE("place_initial follows the gamma recursion") {
    const Gain g = placement::place_initial(double_integrator(), Spectrum{-1.0, -2.0}, -1.0);
    check_close(g.k, Vector{-2, -3}, 1e-14);
    CHECK_THROWS_AS(placement::place_initial(double_integrator(), Spectrum{-1.0, -2.0}, -5.0), ValidationError);

    Rng rng(241);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.index(6);
        const StateSpace sys = testing::random_controllable(rng, n, 1e6);
        Spectrum targets = testing::random_targets(rng, n);
        auto real_it = std::find_if(targets.begin(), targets.end(), [](const Complex& z) { return z.imag() == 0.0; });
        if (real_it == targets.end()) continue;
        const Gain g = placement::place_initial(sys, targets, real_it->real());
        CHECK(verify::charpoly_residual(sys, g.k, targets) <= 1e-6);
    }
}

TEST_CASE("full placement examples") {
    const StateSpace di = double_integrator();
    const Spectrum real_targets{-1.0, -2.0};
    const Spectrum pair_targets{Complex(-1, 1), Complex(-1, -1)};

    check_close(placement::place_bass_gura(di, real_targets).k, Vector{-2, -3}, 1e-12);
    check_close(placement::place_ackermann(di, real_targets).k, Vector{-2, -3}, 1e-12);
    check_close(placement::place_general(di, real_targets, Spectrum{-1.0}).k, Vector{-2, -3}, 1e-12);
    check_close(placement::place_bass_gura(di, pair_targets).k, Vector{-2, -2}, 1e-12);
    check_close(placement::place_ackermann(di, pair_targets).k, Vector{-2, -2}, 1e-12);

    SUBCASE("r = n matches Ackermann, r = 0 delegates to Bass-Gura") {
        const Gain full = placement::place_general(di, real_targets, real_targets);
        check_close(full.k, placement::place_ackermann(di, real_targets).k, 1e-10);
        CHECK(full.pulled == 2);
        const Gain none = placement::place_general(di, real_targets, Spectrum{});
        CHECK(none.k == placement::place_bass_gura(di, real_targets).k);
        CHECK(none.method == Method::general);
        CHECK(none.pulled == 0);
    }
    SUBCASE("targets equal to the open-loop spectrum") {
        const Gain bg = placement::place_bass_gura(diag12(), Spectrum{1.0, 2.0});
        CHECK(bg.k.max_abs() == 0.0);
        const Gain ack = placement::place_ackermann(diag12(), Spectrum{1.0, 2.0});
        CHECK(ack.k.max_abs() <= 1e-8 * std::pow(2.0, 2.0));
    }
    SUBCASE("errors") {
        const StateSpace unc(Matrix{{1, 0}, {0, 2}}, Vector{1, 0});
        CHECK_THROWS_AS(placement::place_bass_gura(unc, real_targets), UncontrollableError);
        CHECK_THROWS_AS(placement::place_ackermann(unc, real_targets), UncontrollableError);
        CHECK_THROWS_AS(placement::place_general(unc, real_targets, Spectrum{-1.0}), UncontrollableError);
        CHECK_THROWS_AS(placement::place_ackermann(di, Spectrum{-1.0}), ValidationError);
        CHECK_THROWS_AS(placement::place_general(di, real_targets, Spectrum{-3.0}), ValidationError);
    }
    SUBCASE("diagnostics are populated") {
        const Gain g = placement::place_ackermann(di, real_targets);
        CHECK(g.diagnostics.kappa_c == doctest::Approx(1.0));
        CHECK(g.diagnostics.max_inverted_size == 2);
        REQUIRE(g.diagnostics.charpoly_residual.has_value());
        CHECK(*g.diagnostics.charpoly_residual <= 1e-12);
        CHECK(g.diagnostics.warnings.empty());
    }
}

TEST_CASE("methods agree on random systems") {
    Rng rng(251);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.index(7);
        const StateSpace sys = testing::random_controllable(rng, n);
        const Spectrum targets = testing::random_targets(rng, n, -3.0, 3.0);
        CAPTURE(trial);
        const Vector ack = placement::place_ackermann(sys, targets).k;
        const Vector bg = placement::place_bass_gura(sys, targets).k;
        CHECK(testing::rel_diff(ack, bg) <= 1e-6);
        CHECK(verify::charpoly_residual(sys, ack, targets) <= 1e-6);
        CHECK(verify::charpoly_residual(sys, bg, targets) <= 1e-6);
        for (const Spectrum& pulled : testing::conjugate_closed_subsets(targets)) {
            const Vector gen = placement::place_general(sys, targets, pulled).k;
            CHECK(testing::rel_diff(gen, ack) <= 1e-6);
        }
    }
}

TEST_CASE("place_general does not depend on how pulled poles are listed") {
    Rng rng(261);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng.index(5);
        const StateSpace sys = testing::random_controllable(rng, n, 1e6);
        const Spectrum targets = testing::random_targets(rng, n);
        const auto subsets = testing::conjugate_closed_subsets(targets);
        const Spectrum& pulled = subsets[rng.index(subsets.size())];
        std::vector<Complex> shuffled = pulled.values();
        std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
        const Vector k1 = placement::place_general(sys, targets, pulled).k;
        const Vector k2 = placement::place_general(sys, targets, Spectrum(shuffled)).k;
        CHECK(testing::rel_diff(k1, k2) <= 1e-8);
        // Exchanging which subset is pulled (same size) changes nothing either.
        for (const Spectrum& other : subsets) {
            if (other.size() != pulled.size()) continue;
            CHECK(testing::rel_diff(placement::place_general(sys, targets, other).k, k1) <= 1e-8);
        }
    }
}

TEST_CASE("ill-conditioned controllability is flagged") {
    // A = diag(1..12), b = ones: Con(A, b) is a Vandermonde matrix.
    std::vector<double> diag(12);
    for (std::size_t i = 0; i < 12; ++i) diag[i] = static_cast<double>(i + 1);
    const StateSpace sys(Matrix::diagonal(diag), Vector(12, 1.0));
    std::vector<double> targets(12);
    for (std::size_t i = 0; i < 12; ++i) targets[i] = -static_cast<double>(i + 1);
    const Gain g = placement::place_ackermann(sys, Spectrum::from_reals(targets));
    CHECK(g.diagnostics.kappa_c > kConditionWarning);
    CHECK(g.diagnostics.has_warning("ill_conditioned_controllability"));
}
