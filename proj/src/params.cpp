#include "qdigamma/params.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qdigamma/errors.hpp"

namespace qdigamma {

std::string_view to_string(Family family) noexcept {
    return family == Family::QK ? "qk" : "pq";
}

namespace {

std::string show(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void check_q(double q) {
    if (!(q >= kQMin && q <= kQMax))
        throw DomainError("q must lie in [1e-9, 1 - 1e-9], got " + show(q));
}

}  // namespace

DeformParams DeformParams::qk(double q, double k) {
    check_q(q);
    if (!(k >= kKMin && k <= kKMax))
        throw DomainError("k must lie in [1e-6, 1e6], got " + show(k));
    return DeformParams(Family::QK, q, k, 0);
}

DeformParams DeformParams::pq(long p, double q) {
    check_q(q);
    if (p < 1) throw DomainError("p must be a positive integer, got " + std::to_string(p));
    return DeformParams(Family::PQ, q, 1.0, p);
}

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw DomainError("abs_tol must be a positive finite number");
    if (n_max < 1) throw DomainError("n_max must be at least 1");
}

}  // namespace qdigamma
