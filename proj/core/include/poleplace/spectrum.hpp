#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace poleplace {

using Complex = std::complex<double>;

/// Self-conjugate multiset of complex values.
///
/// Every non-real element must have a partner whose real part is bitwise
/// equal and whose imaginary part is the exact negation. Construction
/// validates this and throws ValidationError otherwise; a signed zero
/// imaginary part is normalised to +0.
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::vector<Complex> values);
    Spectrum(std::initializer_list<Complex> values);

    static Spectrum from_reals(std::span<const double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const std::vector<Complex>& values() const noexcept { return values_; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    /// Multiset union.
    Spectrum merged(const Spectrum& other) const;

    /// Multiset difference with exact element comparison. Throws
    /// ValidationError if `subset` is not contained in *this.
    Spectrum without(const Spectrum& subset) const;

    bool contains(const Spectrum& subset) const;

    /// Exact multiset equality (order-free).
    bool same_multiset(const Spectrum& other) const;

    std::string to_string() const;

private:
    std::vector<Complex> values_;
};

/// True if `values` is closed under conjugation with exact partners.
bool is_self_conjugate(std::span<const Complex> values);

std::string format_complex(const Complex& z);

} // namespace poleplace
