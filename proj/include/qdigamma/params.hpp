#pragma once

#include <cstddef>
#include <string_view>

namespace qdigamma {

enum class Family { QK, PQ };

std::string_view to_string(Family family) noexcept;

inline constexpr double kQMin = 1e-9;
inline constexpr double kQMax = 1.0 - 1e-9;
inline constexpr double kKMin = 1e-6;
inline constexpr double kKMax = 1e6;

/// Deformation parameters of one of the two families.
///
/// Instances can only be obtained through the validating factories, so every
/// DeformParams in circulation satisfies q in [kQMin, kQMax], k in [kKMin, kKMax]
/// for the (q,k) family and p >= 1 for the (p,q) family.
class DeformParams {
public:
    static DeformParams qk(double q, double k);
    static DeformParams pq(long p, double q);

    Family family() const noexcept { return family_; }
    double q() const noexcept { return q_; }
    /// Only meaningful for Family::QK; 1 otherwise.
    double k() const noexcept { return k_; }
    /// Only meaningful for Family::PQ; 0 otherwise.
    long p() const noexcept { return p_; }

    friend bool operator==(const DeformParams&, const DeformParams&) = default;

private:
    DeformParams(Family family, double q, double k, long p) : family_(family), q_(q), k_(k), p_(p) {}

    Family family_;
    double q_;
    double k_;
    long p_;
};

/// Truncation target for infinite series.
struct Tolerance {
    double abs_tol = 1e-13;
    std::size_t n_max = 10'000'000;

    /// Throws DomainError unless abs_tol > 0 and n_max >= 1.
    void validate() const;
};

/// A function value with a certified bound on its truncation error.
struct EvalResult {
    double value = 0.0;
    double tail_bound = 0.0;
    std::size_t terms_used = 0;
};

}  // namespace qdigamma
