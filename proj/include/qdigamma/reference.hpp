#pragma once

// Independent oracles: the classical digamma, the k- and p-analogue digammas
// used as degeneration targets, and plain fixed-length partial sums of the
// (q,k) series for validating certified tail bounds.

#include <cstddef>
#include <string_view>

#include "qdigamma/params.hpp"

namespace qdigamma::reference {

enum class Method { ASYMPTOTIC_SHIFT, BRUTE_SUM };

std::string_view to_string(Method method) noexcept;

struct OracleValue {
    double value = 0.0;
    Method method = Method::ASYMPTOTIC_SHIFT;
};

/// psi(t) for t > 0: upward recurrence to t >= 10, then the asymptotic
/// expansion through the B_12 term.
OracleValue classical_digamma(double t);

/// (ln k + psi(t/k)) / k, the logarithmic derivative of k^{t/k-1} Gamma(t/k).
OracleValue k_digamma_ref(double t, double k);

/// ln p - sum_{n=0}^{p} 1/(t+n), the logarithmic derivative of
/// p! p^t / (t(t+1)...(t+p)).
OracleValue p_digamma_ref(double t, long p);

/// ln p - sum_{n=1}^{p} 1/n: the q -> 1- limit of the finite (p,q) series,
/// obtained termwise from ln q / (1 - q^n) -> -1/n. Independent of t.
OracleValue pq_series_q_limit(long p);

enum class SeriesKind { PSI_QK, PSI_QK_PRIME, LNGAMMA_QK };

/// Partial sum (or log-product) of the (q,k) series to exactly N terms with
/// no early stopping, accumulated in extended precision with powl.
/// LNGAMMA_QK uses factors n = 0..N-1; the digamma series use n = 1..N.
double brute_force_series(SeriesKind kind, double t, const DeformParams& params, std::size_t terms);

}  // namespace qdigamma::reference
