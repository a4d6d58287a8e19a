#include "poleplace/system.hpp"

#include <algorithm>
#include <string>

namespace poleplace {

StateSpace::StateSpace(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (!a_.is_square()) throw ValidationError("state space: A must be square");
    if (a_.rows() == 0) throw ValidationError("state space: dimension must be at least 1");
    if (a_.rows() != b_.size()) {
        throw ValidationError("state space: A is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()) +
                              " but b has length " + std::to_string(b_.size()));
    }
    if (!a_.all_finite() || !b_.all_finite()) throw ValidationError("state space: non-finite entries");
    if (b_.max_abs() == 0.0) throw ValidationError("state space: b must be nonzero");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::eigenpair: return "eigenpair";
    case Method::bass_gura: return "bass-gura";
    case Method::ackermann: return "ackermann";
    case Method::general: return "general";
    case Method::simon_mitter: return "simon-mitter";
    case Method::partial: return "partial";
    case Method::sequential: return "sequential";
    }
    return "unknown";
}

bool Diagnostics::has_warning(const std::string& tag) const {
    return std::any_of(warnings.begin(), warnings.end(), [&](const Warning& w) { return w.tag == tag; });
}

} // namespace poleplace
