#include "cli.hpp"

#include "io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

namespace poleplace::cli {

namespace {

constexpr std::size_t kMaxGenAttempts = 100;
constexpr double kVerifyTolerance = 1e-6;

std::string kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::non_convergence: return "non_convergence";
    }
    return "error";
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

void report_warnings(const Diagnostics& d, std::ostream& err) {
    for (const auto& w : d.warnings) err << "warning: " << w.tag << ": " << w.message << '\n';
}

const Spectrum& require_poles(const PlanFile& plan, const StateSpace& sys, const std::string& method) {
    if (!plan.poles) throw ValidationError("method '" + method + "' needs a plan with 'poles'");
    if (plan.poles->size() != sys.n()) {
        throw ValidationError("plan lists " + std::to_string(plan.poles->size()) + " poles but the system has " +
                              std::to_string(sys.n()) + " states");
    }
    return *plan.poles;
}

const AssignmentGroup& require_single_group(const PlanFile& plan, const std::string& method) {
    if (!plan.groups) throw ValidationError("method '" + method + "' needs a plan with 'groups'");
    if (plan.groups->size() != 1) {
        throw ValidationError("method '" + method + "' takes exactly one group, the plan has " +
                              std::to_string(plan.groups->size()));
    }
    return plan.groups->groups().front();
}

// Closed-loop targets implied by a plan: the full pole list, or the moved
// eigenvalues replaced by their destinations.
Spectrum plan_targets(const PlanFile& plan, const StateSpace& sys) {
    if (plan.poles) return *plan.poles;
    const Spectrum moved = plan.groups->all_moved();
    if (moved.size() == sys.n()) return plan.groups->all_targets();
    return linalg::invariant_split(sys.A(), moved).kept.merged(plan.groups->all_targets());
}

Vector parse_gain_list(std::string text) {
    std::erase_if(text, [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '[' || c == ']'; });
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty() && item.front() == '+') item.erase(0, 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw ValidationError("gain entry '" + item + "' is not a finite number");
        }
        values.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return Vector(std::move(values));
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    auto parse_one = [&](std::string_view s) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
            throw ValidationError("--n: '" + std::string(s) + "' is not a positive integer");
        }
        return v;
    };
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(parse_one(item));
        } else {
            const std::size_t lo = parse_one(std::string_view(item).substr(0, colon));
            const std::size_t hi = parse_one(std::string_view(item).substr(colon + 1));
            if (hi < lo) throw ValidationError("--n: empty range '" + item + "'");
            for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Placement {
    Gain gain;
    Spectrum targets;
    std::vector<StepRecord> steps;
    std::vector<AssignmentGroup> groups;
};

Placement place(const StateSpace& sys, const PlanFile& plan, const std::string& method, const std::string& pulled) {
    Placement out;
    if (method == "ackermann") {
        out.targets = require_poles(plan, sys, method);
        out.gain = placement::place_ackermann(sys, out.targets);
    } else if (method == "bass-gura") {
        out.targets = require_poles(plan, sys, method);
        out.gain = placement::place_bass_gura(sys, out.targets);
    } else if (method == "general") {
        out.targets = require_poles(plan, sys, method);
        if (pulled.empty()) throw ValidationError("method 'general' requires --pulled");
        Spectrum pulled_set;
        try {
            pulled_set = Spectrum(parse_pole_list(pulled));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("--pulled: ") + e.what());
        }
        out.gain = placement::place_general(sys, out.targets, pulled_set);
    } else if (method == "partial") {
        const auto& g = require_single_group(plan, method);
        out.gain = subspace::place_partial(sys, g.move, g.to);
        out.targets = plan_targets(plan, sys);
        out.groups = {g};
    } else if (method == "simon-mitter") {
        const auto& g = require_single_group(plan, method);
        if (g.move.size() != 1 || g.move[0].imag() != 0.0 || g.to[0].imag() != 0.0) {
            throw ValidationError("method 'simon-mitter' moves one real eigenvalue to one real target");
        }
        out.gain = subspace::place_simon_mitter(sys, g.move[0].real(), g.to[0].real());
        out.targets = plan_targets(plan, sys);
        out.groups = {g};
    } else if (method == "sequential") {
        if (!plan.groups) throw ValidationError("method 'sequential' needs a plan with 'groups'");
        SequentialResult r = subspace::place_sequential(sys, *plan.groups);
        out.gain = std::move(r.gain);
        out.steps = std::move(r.steps);
        out.targets = plan.groups->all_targets();
        out.groups = plan.groups->groups();
    } else {
        throw ValidationError("unknown method '" + method + "'");
    }
    return out;
}

json placement_report(const StateSpace& sys, const Placement& p) {
    json report = {{"method", method_name(p.gain.method)},
                   {"n", sys.n()},
                   {"k", vector_to_json(p.gain.k)},
                   {"targets", spectrum_to_json(p.targets)},
                   {"diagnostics", diagnostics_to_json(p.gain.diagnostics)}};
    if (p.gain.method == Method::general) report["pulled_count"] = p.gain.pulled;
    if (!p.steps.empty()) {
        json steps = json::array();
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            const StepRecord& s = p.steps[i];
            steps.push_back({{"step", s.step},
                             {"move", spectrum_to_json(p.groups[i].move)},
                             {"to", spectrum_to_json(p.groups[i].to)},
                             {"k", vector_to_json(s.k)},
                             {"eta", vector_to_json(s.eta)},
                             {"kappa", number(s.kappa)},
                             {"inverted_size", s.X.rows()},
                             {"spectrum_after", spectrum_to_json(s.spectrum_after)}});
        }
        report["steps"] = steps;
    }
    report["system"] = system_to_json(sys);
    return report;
}

Spectrum random_stable_targets(std::size_t n, UniformSource& src) {
    auto unit = [&] { return 0.5 * (src.next() + 1.0); };
    const std::size_t pairs = static_cast<std::size_t>(src.bits() % (n / 2 + 1));
    std::vector<Complex> values;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double re = -(0.1 + 2.9 * unit());
        const double im = 0.1 + 2.9 * unit();
        values.emplace_back(re, im);
        values.emplace_back(re, -im);
    }
    while (values.size() < n) values.emplace_back(-(0.1 + 2.9 * unit()), 0.0);
    return Spectrum(std::move(values));
}

struct CompareRow {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::string method;
    std::string status;
    double charpoly = std::nan("");
    double distance = std::nan("");
    double kappa_c = std::nan("");
    double max_step_kappa = std::nan("");
    std::size_t max_inverted = 0;
    std::string note;
};

CompareRow compare_one(const StateSpace& sys, const Spectrum& targets, const std::string& method) {
    CompareRow row;
    row.method = method;
    try {
        Gain g;
        if (method == "sequential") {
            g = subspace::place_sequential(sys, compare_plan(linalg::eigenvalues(sys.A()), targets)).gain;
        } else if (method == "bass-gura") {
            g = placement::place_bass_gura(sys, targets);
        } else {
            g = placement::place_ackermann(sys, targets);
        }
        const Diagnostics& d = g.diagnostics;
        row.status = d.warnings.empty() ? "ok" : "warn";
        row.charpoly = d.charpoly_residual.value_or(std::nan(""));
        row.distance = d.spectrum_residual.value_or(std::nan(""));
        row.kappa_c = d.kappa_c;
        row.max_step_kappa =
            d.kappa_steps.empty() ? d.kappa_c : *std::max_element(d.kappa_steps.begin(), d.kappa_steps.end());
        row.max_inverted = d.max_inverted_size;
        for (const auto& w : d.warnings) row.note += (row.note.empty() ? "" : ";") + w.tag;
    } catch (const Error& e) {
        row.status = kind_name(e.kind());
        row.note = e.what();
    }
    return row;
}

std::string csv_number(double x) { return std::isnan(x) ? "nan" : sci(x); }

} // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::validation: return exit_validation;
    case ErrorKind::numerical: return exit_numerical;
    case ErrorKind::non_convergence: return exit_non_convergence;
    }
    return exit_numerical;
}

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() {
    // 53 random bits -> [0, 1) -> [-1, 1).
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

GeneratedSystem generate_dense(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("gen: n must be at least 1");
    UniformSource src(seed);
    double last_kappa = 0.0;
    for (std::size_t attempt = 1; attempt <= kMaxGenAttempts; ++attempt) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = src.next();
        Vector b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = src.next();
        if (b.max_abs() == 0.0) continue;
        StateSpace sys(std::move(a), std::move(b));
        const Matrix c = placement::controllability_matrix(sys);
        last_kappa = linalg::condition_number(c);
        const std::size_t rank = linalg::pivot_rank(c, static_cast<double>(n) * kUlp * c.max_abs());
        if (rank == n && last_kappa <= kConditionWarning) return {std::move(sys), attempt};
    }
    throw NumericalError("gen: no pair with cond(Con(A, b)) <= 1e8 in " + std::to_string(kMaxGenAttempts) +
                         " attempts (last cond = " + sci(last_kappa) + ")");
}

StateSpace integrator_chain(std::size_t n) {
    if (n == 0) throw ValidationError("gen: n must be at least 1");
    Matrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    return StateSpace(std::move(a), Vector::unit(n, n - 1));
}

AssignmentPlan compare_plan(const Spectrum& open_loop, const Spectrum& targets) {
    if (open_loop.size() != targets.size()) throw ValidationError("compare_plan: size mismatch");
    auto split = [](const Spectrum& s, std::vector<Complex>& pairs, std::vector<double>& reals) {
        for (const auto& z : s) {
            if (z.imag() > 0.0) pairs.push_back(z);
            else if (z.imag() == 0.0) reals.push_back(z.real());
        }
        std::stable_sort(reals.begin(), reals.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
    };
    std::vector<Complex> move_pairs, to_pairs;
    std::vector<double> move_reals, to_reals;
    split(open_loop, move_pairs, move_reals);
    split(targets, to_pairs, to_reals);

    std::vector<Spectrum> moves;
    for (const auto& z : move_pairs) moves.push_back(Spectrum{z, std::conj(z)});
    for (std::size_t i = 0; i < move_reals.size(); i += 2) {
        std::vector<double> chunk(move_reals.begin() + i, move_reals.begin() + std::min(i + 2, move_reals.size()));
        moves.push_back(Spectrum::from_reals(chunk));
    }

    // A leftover single real eigenvalue needs a real target; everything else
    // is dealt out two at a time, pairs first.
    std::optional<double> single_target;
    if (moves.back().size() == 1) {
        single_target = to_reals.back();
        to_reals.pop_back();
    }
    std::vector<Spectrum> tos;
    for (const auto& z : to_pairs) tos.push_back(Spectrum{z, std::conj(z)});
    for (std::size_t i = 0; i < to_reals.size(); i += 2) {
        tos.push_back(Spectrum::from_reals(std::vector<double>{to_reals[i], to_reals[i + 1]}));
    }
    if (single_target) tos.push_back(Spectrum::from_reals(std::vector<double>{*single_target}));

    std::vector<AssignmentGroup> groups;
    for (std::size_t i = 0; i < moves.size(); ++i) groups.push_back({moves[i], tos[i]});
    return AssignmentPlan(std::move(groups));
}

int cmd_place(const PlaceOptions& opt, Streams io) {
    if (opt.system == "-" && opt.plan == "-") throw ValidationError("only one of --system and --plan can read stdin");
    const StateSpace sys = system_from_json(read_json(opt.system, io.in));
    const PlanFile plan = plan_from_json(read_json(opt.plan, io.in));
    const Placement p = place(sys, plan, opt.method, opt.pulled);
    io.out << to_text(placement_report(sys, p)) << '\n';
    report_warnings(p.gain.diagnostics, io.err);
    return exit_ok;
}

int cmd_verify(const VerifyOptions& opt, Streams io) {
    std::optional<StateSpace> sys;
    std::optional<Spectrum> targets;
    Vector k;
    if (opt.gain == "-") {
        if (opt.system == "-" || opt.plan == "-") {
            throw ValidationError("--gain - already reads stdin; pass --system and --plan as files");
        }
        const json report = read_json("-", io.in);
        if (!report.is_object() || !report.contains("k")) throw ValidationError("stdin: expected a place report with 'k'");
        k = vector_from_json(report.at("k"), "report.k");
        if (report.contains("system")) sys = system_from_json(report.at("system"));
        if (report.contains("targets")) targets = spectrum_from_json(report.at("targets"), "report.targets");
    } else {
        if (opt.gain.empty()) throw ValidationError("--gain is required");
        k = parse_gain_list(opt.gain);
    }
    if (!opt.system.empty()) sys = system_from_json(read_json(opt.system, io.in));
    if (!sys) throw ValidationError("no system given (--system)");
    if (!opt.plan.empty()) targets = plan_targets(plan_from_json(read_json(opt.plan, io.in)), *sys);
    if (!targets) throw ValidationError("no targets given (--plan)");
    if (k.size() != sys->n()) {
        throw ValidationError("gain has " + std::to_string(k.size()) + " entries but the system has " +
                              std::to_string(sys->n()) + " states");
    }
    if (targets->size() != sys->n()) {
        throw ValidationError("plan implies " + std::to_string(targets->size()) + " closed-loop eigenvalues, expected " +
                              std::to_string(sys->n()));
    }

    const double residual = verify::charpoly_residual(*sys, k, *targets);
    const Spectrum closed = linalg::eigenvalues(verify::closed_loop(*sys, k));
    const SpectrumMatch match = verify::match_spectra(targets->values(), closed.values());
    const double kappa = linalg::condition_number(placement::controllability_matrix(*sys));

    io.out << "charpoly_residual  " << sci(residual) << '\n';
    io.out << "spectrum_distance  " << sci(match.distance) << '\n';
    io.out << "kappa_C            " << sci(kappa) << '\n';
    io.out << "target                                   closed-loop                              |diff|\n";
    for (std::size_t i = 0; i < targets->size(); ++i) {
        const Complex& t = (*targets)[i];
        const Complex& c = closed[match.assignment[i]];
        char line[160];
        std::snprintf(line, sizeof line, "%-40s %-40s %.3e\n", format_complex(t).c_str(), format_complex(c).c_str(),
                      std::abs(t - c));
        io.out << line;
    }
    const bool pass = residual <= kVerifyTolerance;
    io.out << (pass ? "PASS" : "FAIL") << " (charpoly_residual " << (pass ? "<=" : ">") << " 1e-06)\n";
    return pass ? exit_ok : exit_verify_failed;
}

int cmd_gen(const GenOptions& opt, Streams io) {
    if (opt.n == 0) throw ValidationError("gen: --n must be at least 1");
    json out;
    if (opt.family == "integrator-chain") {
        out = system_to_json(integrator_chain(opt.n), opt.seed,
                             "integrator-chain n=" + std::to_string(opt.n));
    } else if (opt.family == "dense") {
        const GeneratedSystem g = generate_dense(opt.n, opt.seed);
        // Self-check before emitting: the pair must factor as controllable.
        (void)placement::controller_canonical(g.system);
        out = system_to_json(g.system, opt.seed,
                             "dense n=" + std::to_string(opt.n) + " seed=" + std::to_string(opt.seed) +
                                 " attempt=" + std::to_string(g.attempts));
    } else {
        throw ValidationError("unknown family '" + opt.family + "'");
    }
    io.out << to_text(out) << '\n';
    return exit_ok;
}

int cmd_compare(const CompareOptions& opt, Streams io) {
    const std::vector<std::size_t> sizes = parse_sizes(opt.n);
    if (opt.family != "dense" && opt.family != "integrator-chain") {
        throw ValidationError("unknown family '" + opt.family + "'");
    }
    static const char* const methods[] = {"ackermann", "bass-gura", "sequential"};

    std::vector<CompareRow> rows;
    for (std::size_t n : sizes) {
        for (std::size_t trial = 0; trial < opt.trials; ++trial) {
            const std::uint64_t trial_seed = splitmix64(opt.seed ^ splitmix64((static_cast<std::uint64_t>(n) << 32) | trial));
            UniformSource target_source(splitmix64(trial_seed));
            const Spectrum targets = random_stable_targets(n, target_source);
            std::optional<StateSpace> sys;
            std::string failure;
            try {
                sys = opt.family == "dense" ? generate_dense(n, trial_seed).system : integrator_chain(n);
            } catch (const Error& e) {
                failure = kind_name(e.kind());
            }
            for (const char* m : methods) {
                CompareRow row;
                if (sys) {
                    row = compare_one(*sys, targets, m);
                } else {
                    row.method = m;
                    row.status = failure;
                    row.note = "system generation failed";
                }
                row.n = n;
                row.trial = trial;
                rows.push_back(std::move(row));
            }
        }
    }

    char line[256];
    std::snprintf(line, sizeof line, "%4s %5s %-11s %-15s %-13s %-13s %-13s %-13s %4s  %s\n", "n", "trial", "method",
                  "status", "charpoly_res", "spectrum_dist", "kappa_C", "max_step_kap", "inv", "notes");
    io.out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%4zu %5zu %-11s %-15s %-13s %-13s %-13s %-13s %4zu  ", r.n, r.trial,
                      r.method.c_str(), r.status.c_str(), csv_number(r.charpoly).c_str(),
                      csv_number(r.distance).c_str(), csv_number(r.kappa_c).c_str(),
                      csv_number(r.max_step_kappa).c_str(), r.max_inverted);
        io.out << line << r.note << '\n';
    }
    io.out << '\n';
    io.out << "n,trial,method,status,charpoly_residual,spectrum_distance,kappa_C,max_step_kappa,max_inverted_size\n";
    for (const auto& r : rows) {
        io.out << r.n << ',' << r.trial << ',' << r.method << ',' << r.status << ',' << csv_number(r.charpoly) << ','
               << csv_number(r.distance) << ',' << csv_number(r.kappa_c) << ',' << csv_number(r.max_step_kappa)
               << ',' << r.max_inverted << '\n';
    }
    return exit_ok;
}

int run(const std::vector<std::string>& args, Streams io) {
    CLI::App app{"Single-input state-feedback pole placement", "poleplace"};
    app.require_subcommand(1);

    PlaceOptions place_opt;
    auto* place_cmd = app.add_subcommand("place", "Compute a feedback gain and print a JSON report");
    place_cmd->add_option("--system", place_opt.system, "System file (JSON, '-' for stdin)")->required();
    place_cmd->add_option("--plan", place_opt.plan, "Plan file with 'poles' or 'groups' ('-' for stdin)")->required();
    place_cmd->add_option("--method", place_opt.method, "Placement method")
        ->check(CLI::IsMember({"bass-gura", "ackermann", "general", "partial", "sequential", "simon-mitter"}))
        ->capture_default_str();
    place_cmd->add_option("--pulled", place_opt.pulled, "Comma-separated poles pulled out (method general)");

    VerifyOptions verify_opt;
    auto* verify_cmd = app.add_subcommand("verify", "Check a gain against target poles");
    verify_cmd->add_option("--system", verify_opt.system, "System file (JSON, '-' for stdin)");
    verify_cmd->add_option("--plan", verify_opt.plan, "Plan file giving the targets");
    verify_cmd->add_option("--gain", verify_opt.gain, "Comma-separated gain, or '-' to read a place report")
        ->required();

    GenOptions gen_opt;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random controllable system");
    gen_cmd->add_option("--n", gen_opt.n, "State dimension")->required();
    gen_cmd->add_option("--seed", gen_opt.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--family", gen_opt.family, "System family")
        ->check(CLI::IsMember({"dense", "integrator-chain"}))
        ->capture_default_str();

    CompareOptions cmp_opt;
    auto* cmp_cmd = app.add_subcommand("compare", "Compare conditioning of ackermann, bass-gura and sequential");
    cmp_cmd->add_option("--n", cmp_opt.n, "Dimensions: comma list, ranges as lo:hi")->capture_default_str();
    cmp_cmd->add_option("--trials", cmp_opt.trials, "Trials per dimension")->capture_default_str();
    cmp_cmd->add_option("--seed", cmp_opt.seed, "Random seed")->capture_default_str();
    cmp_cmd->add_option("--family", cmp_opt.family, "System family")
        ->check(CLI::IsMember({"dense", "integrator-chain"}))
        ->capture_default_str();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, io.out, io.err);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*place_cmd) return cmd_place(place_opt, io);
        if (*verify_cmd) return cmd_verify(verify_opt, io);
        if (*gen_cmd) return cmd_gen(gen_opt, io);
        return cmd_compare(cmp_opt, io);
    } catch (const Error& e) {
        io.err << "error (" << kind_name(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        io.err << "error (validation): " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace poleplace::cli
