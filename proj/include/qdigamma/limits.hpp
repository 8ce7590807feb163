#pragma once

// Degeneration scans: the (q,k) and (p,q) digammas against their k = 1,
// q -> 1- and p -> infinity targets.

#include <optional>
#include <string>
#include <vector>

#include "qdigamma/params.hpp"

namespace qdigamma::limits {

/// Per-point tolerance used by the q -> 1- scans; the cost of the (q,k)
/// series grows like 1/(kt(1-q)).
inline constexpr Tolerance kScanTolerance{1e-10, 10'000'000};

struct ConvergencePoint {
    /// Approach parameter: q_j for q-scans, p for the p-scan, j for the combined scan.
    double parameter = 0.0;
    double q = 0.0;
    long p = 0;
    double value = 0.0;
    double gap = 0.0;
    /// Certified upper bound on the gap, where one is known.
    std::optional<double> bound;
    /// Evaluation failure at this point (gap is NaN then).
    std::optional<std::string> error;
};

struct ConvergenceReport {
    std::string target_desc;
    double target_value = 0.0;
    /// The analogue named by the degeneration statement, when it differs from
    /// the empirical limit used as target. Both are reported; the gap is
    /// always measured against target_value.
    std::string stated_target_desc;
    double stated_target_value = 0.0;
    double target_discrepancy = 0.0;

    std::vector<ConvergencePoint> sequence;
    /// Gaps nonincreasing over the final half of the sequence.
    bool monotone_tail = false;
    double final_gap = 0.0;
    double convergence_tol = 0.0;
    /// p-scan only: strictly decreasing gaps, each within its certified bound.
    std::optional<bool> strictly_decreasing;
    std::optional<bool> within_bound;
    bool converged = false;
};

/// psi_{q,k} at k = 1 against an independent fixed-length sum of
/// -ln(1-q) + ln q sum q^{nt}/(1-q^n). k = 1 is admissible, so this is an
/// identity check, not a limit.
struct KSubstitutionCheck {
    double t = 0.0;
    double q = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    std::size_t terms_used = 0;
    double oracle_value = 0.0;
    std::size_t oracle_terms = 0;
    double gap = 0.0;
    /// 2 x tail_bound plus a few ulps of rounding.
    double allowed = 0.0;
    bool holds = false;
};

KSubstitutionCheck limit_k_to_1(double t, double q, const Tolerance& tol = {});

/// psi_{q_j,k}(t) for q_j = 1 - 10^{-j}, j = 1..j_max (q capped at kQMax),
/// against the q -> 1- limit (ln k + psi(t))/k. The k-digamma
/// (ln k + psi(t/k))/k is reported as the stated target; they coincide at k = 1.
ConvergenceReport limit_q_to_1_qk(double t, double k, int j_max = 5, double convergence_tol = 1e-2,
                                  const Tolerance& tol = kScanTolerance);

/// psi_{p,q_j}(t) against the q -> 1- limit of the finite series,
/// ln p - sum_{n=1}^{p} 1/n. The p-digamma ln p - sum_{n=0}^{p} 1/(t+n) is
/// reported as the stated target.
ConvergenceReport limit_q_to_1_pq(double t, long p, int j_max = 5, double convergence_tol = 1e-2);

/// |psi_{p,q}(t) - psi_{q,1}(t)| along an increasing p_list, each against
/// |ln(1 - q^p)| + |ln q| q^{(p+1)t} / ((1-q)(1-q^t)).
ConvergenceReport limit_p_to_inf(double t, double q, const std::vector<long>& p_list, const Tolerance& tol = {});

enum class CombinedPath {
    /// p_j = 10^j. Keeps p(1-q) = 1, so q^{pt} does not vanish; the scan
    /// reaches psi(t) only at t = 1.
    Decade,
    /// Smallest p_j with q_j^{p_j min(t,1)} <= 10^{-j} e^{-10}, so both
    /// ln(1 - q^p) and the dropped part of the q-series vanish along the path.
    TailControlled,
};

/// p and q = 1 - 10^{-j} increased together, against the classical psi(t).
ConvergenceReport limit_pq_combined(double t, int j_max = 5, double convergence_tol = 1e-2,
                                    CombinedPath path = CombinedPath::TailControlled);

/// Gaps nonincreasing from index size/2 to the end; false if any gap there is NaN.
bool monotone_tail(const std::vector<ConvergencePoint>& sequence);

}  // namespace qdigamma::limits
