#pragma once

#include <poleplace/poleplace.hpp>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace poleplace::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_validation = 2,
    exit_numerical = 3,
    exit_non_convergence = 4,
};

int exit_code_for(ErrorKind kind);

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct PlaceOptions {
    std::string system;
    std::string plan;
    std::string method = "ackermann";
    std::string pulled; // comma-separated pole literals, required by `general`
};

struct VerifyOptions {
    std::string system; // optional when `gain` is "-" and the report embeds the system
    std::string plan;   // optional when the report carries its targets
    std::string gain;   // comma-separated numbers, or "-" for a place report on stdin
};

struct GenOptions {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string family = "dense";
};

struct CompareOptions {
    std::string n = "4,8,12"; // comma list, ranges "a:b" allowed
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::string family = "dense";
};

int cmd_place(const PlaceOptions& opt, Streams io);
int cmd_verify(const VerifyOptions& opt, Streams io);
int cmd_gen(const GenOptions& opt, Streams io);
int cmd_compare(const CompareOptions& opt, Streams io);

/// Full command line (argv[0] is the program name). Never throws.
int run(const std::vector<std::string>& args, Streams io);

/// Deterministic uniform source on [-1, 1] built on mt19937_64 with a fixed
/// bit-level mapping, so generated systems do not depend on the standard
/// library's distribution implementations.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed);
    double next();
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct GeneratedSystem {
    StateSpace system;
    std::size_t attempts;
};

/// Entries of A and b uniform in [-1, 1], resampled until cond(Con(A, b)) <= 1e8
/// (at most 100 attempts, then NumericalError).
GeneratedSystem generate_dense(std::size_t n, std::uint64_t seed);

/// Chain of n integrators: ones on the superdiagonal, b = e_n.
StateSpace integrator_chain(std::size_t n);

/// Groups for the sequential method in `compare`: conjugate pairs first, then
/// real eigenvalues by descending modulus, two per group; targets are dealt
/// out so every group stays self-conjugate.
AssignmentPlan compare_plan(const Spectrum& open_loop, const Spectrum& targets);

} // namespace poleplace::cli
