#include "qdigamma/reference.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qdigamma/errors.hpp"
#include "qdigamma/summation.hpp"

namespace qdigamma::reference {

std::string_view to_string(Method method) noexcept {
    return method == Method::ASYMPTOTIC_SHIFT ? "asymptotic_shift" : "brute_sum";
}

namespace {

// B_{2m} / (2m) for m = 1..6
constexpr std::array<double, 6> kAsymptoticCoeffs = {
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0,
};

constexpr double kShiftThreshold = 10.0;

}  // namespace

OracleValue classical_digamma(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("classical_digamma requires t > 0, got " + std::to_string(t));

    CompensatedSum acc;
    double x = t;
    while (x < kShiftThreshold) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    double series = 0.0;
    for (auto it = kAsymptoticCoeffs.rbegin(); it != kAsymptoticCoeffs.rend(); ++it)
        series = (series + *it) * inv2;
    acc += std::log(x);
    acc -= 0.5 / x;
    acc -= series;
    return {acc.value(), Method::ASYMPTOTIC_SHIFT};
}

OracleValue k_digamma_ref(double t, double k) {
    if (!(k > 0.0)) throw DomainError("k_digamma_ref requires k > 0");
    const OracleValue inner = classical_digamma(t / k);
    return {(std::log(k) + inner.value) / k, Method::ASYMPTOTIC_SHIFT};
}

OracleValue p_digamma_ref(double t, long p) {
    if (!(t > 0.0)) throw DomainError("p_digamma_ref requires t > 0");
    if (p < 1) throw DomainError("p_digamma_ref requires p >= 1");
    CompensatedSum acc;
    acc += std::log(static_cast<double>(p));
    for (long n = 0; n <= p; ++n) acc -= 1.0 / (t + static_cast<double>(n));
    return {acc.value(), Method::BRUTE_SUM};
}

OracleValue pq_series_q_limit(long p) {
    if (p < 1) throw DomainError("pq_series_q_limit requires p >= 1");
    CompensatedSum acc;
    acc += std::log(static_cast<double>(p));
    for (long n = 1; n <= p; ++n) acc -= 1.0 / static_cast<double>(n);
    return {acc.value(), Method::BRUTE_SUM};
}

double brute_force_series(SeriesKind kind, double t, const DeformParams& params, std::size_t terms) {
    if (!(t > 0.0)) throw DomainError("brute_force_series requires t > 0");
    if (terms < 1) throw DomainError("brute_force_series requires N >= 1");
    if (params.family() != Family::QK) throw DomainError("brute_force_series covers the (q,k) family");

    using ld = long double;
    const ld q = params.q();
    const ld k = params.k();
    const ld lt = t;
    const ld lnq = std::log(q);
    ld sum = 0.0L;

    switch (kind) {
        case SeriesKind::PSI_QK:
            for (std::size_t n = 1; n <= terms; ++n) {
                const ld nk = static_cast<ld>(n) * k;
                sum += std::pow(q, nk * lt) / (1.0L - std::pow(q, nk));
            }
            return static_cast<double>(-std::log1p(-q) / k + lnq * sum);
        case SeriesKind::PSI_QK_PRIME:
            for (std::size_t n = 1; n <= terms; ++n) {
                const ld nk = static_cast<ld>(n) * k;
                sum += nk * std::pow(q, nk * lt) / (1.0L - std::pow(q, nk));
            }
            return static_cast<double>(lnq * lnq * sum);
        case SeriesKind::LNGAMMA_QK:
            for (std::size_t n = 0; n < terms; ++n) {
                const ld dn = static_cast<ld>(n);
                sum += std::log1p(-std::pow(q, k * (k + dn))) - std::log1p(-std::pow(q, k * (lt + dn)));
            }
            return static_cast<double>(sum / k - (lt / k - 1.0L) * std::log1p(-q));
    }
    throw DomainError("unknown series kind");
}

}  // namespace qdigamma::reference
