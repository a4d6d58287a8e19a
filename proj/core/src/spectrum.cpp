#include "poleplace/spectrum.hpp"

#include "poleplace/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

namespace poleplace {

namespace {

using Key = std::pair<double, double>;

std::map<Key, std::size_t> count_values(std::span<const Complex> values) {
    std::map<Key, std::size_t> counts;
    for (const auto& z : values) ++counts[{z.real(), z.imag()}];
    return counts;
}

Complex normalised(Complex z) {
    if (z.imag() == 0.0) return {z.real(), 0.0};
    return z;
}

} // namespace

bool is_self_conjugate(std::span<const Complex> values) {
    for (const auto& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    std::vector<Complex> norm(values.begin(), values.end());
    for (auto& z : norm) z = normalised(z);
    const auto counts = count_values(norm);
    for (const auto& [key, count] : counts) {
        if (key.second == 0.0) continue;
        auto it = counts.find({key.first, -key.second});
        if (it == counts.end() || it->second != count) return false;
    }
    return true;
}

Spectrum::Spectrum(std::vector<Complex> values) : values_(std::move(values)) {
    for (auto& z : values_) z = normalised(z);
    if (!is_self_conjugate(values_)) {
        throw ValidationError("spectrum is not self-conjugate: " + to_string());
    }
}

Spectrum::Spectrum(std::initializer_list<Complex> values)
    : Spectrum(std::vector<Complex>(values)) {}

Spectrum Spectrum::from_reals(std::span<const double> values) {
    std::vector<Complex> out;
    out.reserve(values.size());
    for (double v : values) out.emplace_back(v, 0.0);
    return Spectrum(std::move(out));
}

Spectrum Spectrum::merged(const Spectrum& other) const {
    std::vector<Complex> out = values_;
    out.insert(out.end(), other.values_.begin(), other.values_.end());
    return Spectrum(std::move(out));
}

bool Spectrum::contains(const Spectrum& subset) const {
    auto have = count_values(values_);
    for (const auto& z : subset.values_) {
        auto it = have.find({z.real(), z.imag()});
        if (it == have.end() || it->second == 0) return false;
        --it->second;
    }
    return true;
}

Spectrum Spectrum::without(const Spectrum& subset) const {
    std::vector<Complex> rest = values_;
    for (const auto& z : subset.values_) {
        auto it = std::find(rest.begin(), rest.end(), z);
        if (it == rest.end()) {
            throw ValidationError("value " + format_complex(z) + " is not contained in " + to_string());
        }
        rest.erase(it);
    }
    return Spectrum(std::move(rest));
}

bool Spectrum::same_multiset(const Spectrum& other) const {
    return size() == other.size() && count_values(values_) == count_values(other.values_);
}

std::string Spectrum::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) os << ", ";
        os << format_complex(values_[i]);
    }
    os << '}';
    return os.str();
}

std::string format_complex(const Complex& z) {
    char buf[96];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    } else {
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    }
    return buf;
}

} // namespace poleplace
