#include "poleplace/subspace.hpp"

#include "poleplace/placement.hpp"
#include "poleplace/poly.hpp"
#include "poleplace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace poleplace {

AssignmentPlan::AssignmentPlan(std::vector<AssignmentGroup> groups) : groups_(std::move(groups)) {
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        if (groups_[i].move.size() != groups_[i].to.size()) {
            throw ValidationError("plan group " + std::to_string(i + 1) + " moves " +
                                  std::to_string(groups_[i].move.size()) + " eigenvalues to " +
                                  std::to_string(groups_[i].to.size()) + " targets");
        }
        if (groups_[i].move.empty()) {
            throw ValidationError("plan group " + std::to_string(i + 1) + " is empty");
        }
    }
}

Spectrum AssignmentPlan::all_moved() const {
    Spectrum out;
    for (const auto& g : groups_) out = out.merged(g.move);
    return out;
}

Spectrum AssignmentPlan::all_targets() const {
    Spectrum out;
    for (const auto& g : groups_) out = out.merged(g.to);
    return out;
}

namespace subspace {

ProjectedRank projected_controllability_rank(const StateSpace& sys, const Matrix& U) {
    if (U.rows() != sys.n()) throw ValidationError("projected_controllability_rank: U must have n rows");
    const std::size_t r = U.cols();
    if (r == 0) return {0, 1.0};
    const Matrix p = U.transposed() * placement::krylov_matrix(sys.A(), sys.b(), r);
    const double threshold = static_cast<double>(r) * kUlp * p.max_abs();
    return {linalg::pivot_rank(p, threshold), linalg::condition_number(p)};
}

ProjectedGain projected_gain(const InvariantSplit& split, const Vector& b, const Spectrum& to) {
    const std::size_t n = b.size();
    const std::size_t r = split.U.cols();
    if (to.size() != r) {
        throw ValidationError("projected_gain: " + std::to_string(to.size()) + " targets for " + std::to_string(r) +
                              " moved eigenvalues");
    }
    ProjectedGain out;
    out.k = Vector(n);
    if (r == 0) return out;

    const Matrix ut = split.U.transposed();
    const Vector ub = ut * b;
    const Matrix cx = placement::krylov_matrix(split.X, ub, r);
    const std::size_t rank = linalg::pivot_rank(cx, static_cast<double>(r) * kUlp * cx.max_abs());
    if (rank < r) {
        throw NumericalError("projected pair (U^T A U, U^T b) is not controllable: rank(U^T [b, Ab, ...]) = " +
                             std::to_string(rank) + " < " + std::to_string(r));
    }
    out.kappa = linalg::condition_number(cx);
    const LuDecomposition lu = [&] {
        try {
            return LuDecomposition(cx);
        } catch (const SingularMatrixError&) {
            throw NumericalError("projected controllability matrix is singular to working precision");
        }
    }();
    out.eta = lu.solve_transposed(Vector::unit(r, r - 1));
    const Matrix m = poly::eval_matrix(poly::monic_from_roots(to), split.X);
    out.k = -1.0 * row_times(row_times(out.eta, m), ut);
    return out;
}

Gain place_partial(const StateSpace& sys, const Spectrum& move, const Spectrum& to) {
    if (move.size() != to.size()) {
        throw ValidationError("place_partial: " + std::to_string(move.size()) + " eigenvalues to move but " +
                              std::to_string(to.size()) + " targets");
    }
    const InvariantSplit split = linalg::invariant_split(sys.A(), move);
    const ProjectedGain pg = projected_gain(split, sys.b(), to);

    Gain g;
    g.k = pg.k;
    g.method = Method::partial;
    g.diagnostics.kappa_steps = {pg.kappa};
    g.diagnostics.max_inverted_size = move.size();
    g.diagnostics = verify::diagnostics(sys, g, split.kept.merged(to));
    return g;
}

Gain place_simon_mitter(const StateSpace& sys, double mu1, double lambda1) {
    if (!std::isfinite(mu1) || !std::isfinite(lambda1)) {
        throw ValidationError("place_simon_mitter: eigenvalues must be finite");
    }
    const InvariantSplit split = linalg::invariant_split(sys.A(), Spectrum{Complex(mu1, 0.0)});
    const Vector u = split.U.column(0);
    const double ub = dot(u, sys.b());
    if (!(std::abs(ub) >= 1e-9 * u.norm() * sys.b().norm())) {
        throw NumericalError("place_simon_mitter: the mode at " + std::to_string(mu1) +
                             " is not controllable (omega^T b = " + std::to_string(ub) + ")");
    }
    const Vector omega = (1.0 / ub) * u;
    const double delta = (lambda1 == mu1) ? 0.0 : lambda1 - split.X(0, 0);

    Gain g;
    g.k = delta * omega;
    g.method = Method::simon_mitter;
    g.diagnostics.kappa_steps = {1.0};
    g.diagnostics.max_inverted_size = 1;
    g.diagnostics = verify::diagnostics(sys, g, split.kept.merged(Spectrum{Complex(lambda1, 0.0)}));
    return g;
}

SequentialResult place_sequential(const StateSpace& sys, const AssignmentPlan& plan) {
    const std::size_t n = sys.n();
    if (plan.size() == 0) throw ValidationError("place_sequential: plan has no groups");

    const Spectrum moved = plan.all_moved();
    if (moved.size() != n) {
        throw ValidationError("place_sequential: plan moves " + std::to_string(moved.size()) +
                              " eigenvalues but the system has " + std::to_string(n));
    }
    // The groups must partition the open-loop spectrum.
    linalg::match_eigenvalues(moved.values(), linalg::eigenvalues(sys.A()).values(),
                              linalg::matching_tolerance(sys.A()));

    SequentialResult result;
    Matrix current = sys.A();
    Vector total(n);
    std::size_t largest = 0;
    for (std::size_t l = 0; l < plan.size(); ++l) {
        const auto& group = plan.groups()[l];
        try {
            const InvariantSplit split = linalg::invariant_split(current, group.move);
            ProjectedGain pg = projected_gain(split, sys.b(), group.to);
            current += outer(sys.b(), pg.k);
            total += pg.k;

            StepRecord rec;
            rec.step = l + 1;
            rec.U = split.U;
            rec.X = split.X;
            rec.eta = std::move(pg.eta);
            rec.k = std::move(pg.k);
            rec.kappa = pg.kappa;
            rec.spectrum_after = linalg::eigenvalues(current);
            result.steps.push_back(std::move(rec));
            largest = std::max(largest, group.move.size());
        } catch (const MatchingError& e) {
            // The plan was matched against Lambda(A) up front, so a later
            // mismatch means earlier steps perturbed the kept eigenvalues.
            const ErrorKind kind = l == 0 ? ErrorKind::validation : ErrorKind::numerical;
            std::string what = "step " + std::to_string(l + 1) + ": " + e.what();
            if (l > 0) what += " (kept eigenvalues drifted during earlier steps)";
            throw SequentialStepError(kind, what, l + 1, result.steps);
        } catch (const Error& e) {
            throw SequentialStepError(e.kind(), "step " + std::to_string(l + 1) + ": " + e.what(), l + 1,
                                      result.steps);
        }
    }

    Gain& g = result.gain;
    g.k = total;
    g.method = Method::sequential;
    for (const auto& s : result.steps) g.diagnostics.kappa_steps.push_back(s.kappa);
    g.diagnostics.max_inverted_size = largest;
    g.diagnostics = verify::diagnostics(sys, g, plan.all_targets());
    return result;
}

} // namespace subspace
} // namespace poleplace
