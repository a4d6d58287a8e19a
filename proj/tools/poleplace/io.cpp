#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace poleplace::cli {

namespace {

double parse_real(std::string_view s, std::string_view literal) {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first; // from_chars rejects a leading '+'
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ValidationError("malformed pole literal '" + std::string(literal) + "'");
    }
    return value;
}

} // namespace

Complex parse_pole(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ValidationError("empty pole literal");
    if (s.back() == 'j' || s.back() == 'J') {
        throw ValidationError("pole literal '" + std::string(text) + "': use 'i' for the imaginary unit");
    }
    if (s.back() != 'i') return {parse_real(s, text), 0.0};

    // Split at the last sign that is not an exponent sign; the real part
    // lies before it.
    std::size_t cut = std::string::npos;
    for (std::size_t p = s.size() - 1; p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            cut = p;
            break;
        }
    }
    if (cut == std::string::npos) {
        throw ValidationError("pole literal '" + std::string(text) + "' must have the form a, a+bi or a-bi");
    }
    const std::string_view body(s.data(), s.size() - 1);
    const double re = parse_real(body.substr(0, cut), text);
    const std::string_view imag = body.substr(cut);
    if (imag.size() == 1) {
        throw ValidationError("pole literal '" + std::string(text) + "': write the imaginary coefficient (e.g. 1i)");
    }
    return {re, parse_real(imag, text)};
}

std::vector<Complex> parse_pole_list(std::string_view text) {
    std::vector<Complex> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        out.push_back(parse_pole(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Spectrum spectrum_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + " must be an array of pole literals");
    std::vector<Complex> values;
    for (const auto& item : j) {
        if (item.is_number()) values.emplace_back(item.get<double>(), 0.0);
        else if (item.is_string()) values.push_back(parse_pole(item.get<std::string>()));
        else throw ValidationError(what + ": entries must be strings or numbers");
    }
    try {
        return Spectrum(std::move(values));
    } catch (const ValidationError& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

json spectrum_to_json(const Spectrum& s) {
    json out = json::array();
    for (const auto& z : s) out.push_back(format_complex(z));
    return out;
}

PlanFile plan_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("plan must be a JSON object");
    const bool has_poles = j.contains("poles");
    const bool has_groups = j.contains("groups");
    if (has_poles == has_groups) throw ValidationError("plan must contain exactly one of 'poles' or 'groups'");

    PlanFile plan;
    if (has_poles) {
        plan.poles = spectrum_from_json(j.at("poles"), "plan.poles");
        return plan;
    }
    const json& groups = j.at("groups");
    if (!groups.is_array() || groups.empty()) throw ValidationError("plan.groups must be a non-empty array");
    std::vector<AssignmentGroup> parsed;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::string where = "plan.groups[" + std::to_string(i) + "]";
        const json& g = groups[i];
        if (!g.is_object() || !g.contains("move") || !g.contains("to")) {
            throw ValidationError(where + " must be an object with 'move' and 'to'");
        }
        parsed.push_back({spectrum_from_json(g.at("move"), where + ".move"),
                          spectrum_from_json(g.at("to"), where + ".to")});
    }
    plan.groups = AssignmentPlan(std::move(parsed));
    return plan;
}

json plan_to_json(const PlanFile& plan) {
    if (plan.poles) return {{"poles", spectrum_to_json(*plan.poles)}};
    json groups = json::array();
    if (plan.groups) {
        for (const auto& g : plan.groups->groups()) {
            groups.push_back({{"move", spectrum_to_json(g.move)}, {"to", spectrum_to_json(g.to)}});
        }
    }
    return {{"groups", groups}};
}

Vector vector_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + " must be an array of numbers");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ValidationError(what + "[" + std::to_string(i) + "] is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

StateSpace system_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("system must be a JSON object");
    for (const char* key : {"A", "b"}) {
        if (!j.contains(key)) throw ValidationError(std::string("system is missing '") + key + "'");
    }
    const json& rows = j.at("A");
    if (!rows.is_array() || rows.empty()) throw ValidationError("system.A must be a non-empty array of rows");
    const std::size_t n = rows.size();
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer() || j.at("n").get<long long>() != static_cast<long long>(n)) {
            throw ValidationError("system.n does not match the number of rows of A (" + std::to_string(n) + ")");
        }
    }
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = vector_from_json(rows[i], "system.A[" + std::to_string(i) + "]");
        if (row.size() != n) {
            throw ValidationError("system.A[" + std::to_string(i) + "] has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(n));
        }
        for (std::size_t c = 0; c < n; ++c) a(i, c) = row[c];
    }
    return StateSpace(std::move(a), vector_from_json(j.at("b"), "system.b"));
}

json system_to_json(const StateSpace& sys, std::optional<std::uint64_t> seed, const std::string& provenance) {
    json a = json::array();
    for (std::size_t i = 0; i < sys.n(); ++i) a.push_back(vector_to_json(sys.A().row(i)));
    json out = {{"n", sys.n()}, {"A", a}, {"b", vector_to_json(sys.b())}};
    if (seed) out["seed"] = *seed;
    if (!provenance.empty()) out["provenance"] = provenance;
    return out;
}

json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json diagnostics_to_json(const Diagnostics& d) {
    json steps = json::array();
    for (double k : d.kappa_steps) steps.push_back(number(k));
    json warnings = json::array();
    for (const auto& w : d.warnings) warnings.push_back({{"tag", w.tag}, {"message", w.message}});
    json out = {{"kappa_C", number(d.kappa_c)},
                {"kappa_steps", steps},
                {"max_inverted_size", d.max_inverted_size},
                {"warnings", warnings}};
    out["charpoly_residual"] = d.charpoly_residual ? number(*d.charpoly_residual) : json(nullptr);
    out["spectrum_residual"] = d.spectrum_residual ? number(*d.spectrum_residual) : json(nullptr);
    return out;
}

namespace {

bool is_flat(const json& j) {
    return std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
}

void write_text(const json& j, std::ostream& os, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    if (j.is_object() && !j.empty()) {
        os << "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            os << pad << json(it.key()).dump() << ": ";
            write_text(it.value(), os, depth + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << close << '}';
    } else if (j.is_array() && !j.empty() && !is_flat(j)) {
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad;
            write_text(j[i], os, depth + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << close << ']';
    } else if (j.is_array()) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << j[i].dump();
        os << ']';
    } else {
        os << j.dump();
    }
}

} // namespace

std::string to_text(const json& j) {
    std::ostringstream os;
    write_text(j, os, 0);
    return os.str();
}

json read_json(const std::string& path, std::istream& in) {
    std::string text;
    if (path == "-") {
        std::ostringstream os;
        os << in.rdbuf();
        text = os.str();
    } else {
        std::ifstream file(path);
        if (!file) throw ValidationError("cannot open '" + path + "'");
        std::ostringstream os;
        os << file.rdbuf();
        text = os.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError((path == "-" ? std::string("<stdin>") : path) + ": invalid JSON: " + e.what());
    }
}

} // namespace poleplace::cli
