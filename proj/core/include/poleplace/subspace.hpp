#pragma once

#include "poleplace/linalg.hpp"
#include "poleplace/system.hpp"

#include <vector>

namespace poleplace {

struct AssignmentGroup {
    Spectrum move; // open-loop (or current) eigenvalues to shift
    Spectrum to;   // where they go
};

/// Ordered partition of the open-loop spectrum into groups. Construction
/// checks |move| == |to| per group; coverage of the spectrum is checked
/// against the computed eigenvalues by place_sequential.
class AssignmentPlan {
public:
    AssignmentPlan() = default;
    explicit AssignmentPlan(std::vector<AssignmentGroup> groups);

    const std::vector<AssignmentGroup>& groups() const noexcept { return groups_; }
    std::size_t size() const noexcept { return groups_.size(); }

    Spectrum all_moved() const;
    Spectrum all_targets() const;

private:
    std::vector<AssignmentGroup> groups_;
};

struct StepRecord {
    std::size_t step = 0; // 1-based
    Matrix U;             // basis orthogonal to the kept invariant subspace
    Matrix X;             // compression of the current closed loop onto range(U)
    Vector eta;           // last row of Con(X, U^T b)^{-1}
    Vector k;             // gain contributed by this step
    double kappa = 1.0;   // condition of Con(X, U^T b)
    Spectrum spectrum_after;
};

struct SequentialResult {
    Gain gain;
    std::vector<StepRecord> steps;
};

/// Failure inside place_sequential; keeps the kind of the underlying error.
class SequentialStepError : public Error {
public:
    SequentialStepError(ErrorKind kind, const std::string& what, std::size_t step, std::vector<StepRecord> done)
        : Error(kind, what), step_(step), done_(std::move(done)) {}

    std::size_t step() const noexcept { return step_; }
    const std::vector<StepRecord>& completed() const noexcept { return done_; }

private:
    std::size_t step_;
    std::vector<StepRecord> done_;
};

struct ProjectedRank {
    std::size_t rank = 0;
    double kappa = 1.0;
};

struct ProjectedGain {
    Vector eta;
    Vector k;
    double kappa = 1.0;
};

namespace subspace {

/// Rank and condition of U^T [b, A b, ..., A^(r-1) b], r = U.cols().
ProjectedRank projected_controllability_rank(const StateSpace& sys, const Matrix& U);

/// Ackermann on the projected pair (X, U^T b):
/// k^T = -eta^T m(X) U^T with eta^T = e_r^T Con(X, U^T b)^{-1} and m the
/// monic polynomial of `to`. Throws NumericalError if the projected pair is
/// not controllable.
ProjectedGain projected_gain(const InvariantSplit& split, const Vector& b, const Spectrum& to);

/// Moves `move` (matched against the computed spectrum) to `to`, leaving the
/// remaining eigenvalues of A in place.
Gain place_partial(const StateSpace& sys, const Spectrum& move, const Spectrum& to);

/// Shifts the real eigenvalue mu1 to lambda1 along its left eigenvector.
Gain place_simon_mitter(const StateSpace& sys, double mu1, double lambda1);

SequentialResult place_sequential(const StateSpace& sys, const AssignmentPlan& plan);

} // namespace subspace
} // namespace poleplace
