#pragma once

#include <poleplace/poleplace.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poleplace::cli {

using json = nlohmann::json;

/// Parses "a", "a+bi" or "a-bi" (whitespace ignored, 'i' suffix only).
Complex parse_pole(std::string_view text);

/// Comma-separated pole literals. The result is not checked for conjugate
/// closure; wrap it in a Spectrum for that.
std::vector<Complex> parse_pole_list(std::string_view text);

/// Accepts an array whose elements are pole literals or plain numbers.
Spectrum spectrum_from_json(const json& j, const std::string& what);
json spectrum_to_json(const Spectrum& s);

/// Either a full target set ("poles") or an ordered list of groups.
struct PlanFile {
    std::optional<Spectrum> poles;
    std::optional<AssignmentPlan> groups;
};

PlanFile plan_from_json(const json& j);
json plan_to_json(const PlanFile& plan);

StateSpace system_from_json(const json& j);
json system_to_json(const StateSpace& sys, std::optional<std::uint64_t> seed = std::nullopt,
                    const std::string& provenance = {});

Vector vector_from_json(const json& j, const std::string& what);
json vector_to_json(const Vector& v);

/// Finite values as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
json number(double x);

json diagnostics_to_json(const Diagnostics& d);

/// Indented JSON with every array of scalars (vectors, matrix rows, pole
/// lists) kept on one line.
std::string to_text(const json& j);

/// Reads and parses a JSON document; "-" means `in`.
json read_json(const std::string& path, std::istream& in);

} // namespace poleplace::cli
