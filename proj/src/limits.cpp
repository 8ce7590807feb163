#include "qdigamma/limits.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "qdigamma/errors.hpp"
#include "qdigamma/qcore.hpp"
#include "qdigamma/reference.hpp"

namespace qdigamma::limits {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

double q_schedule(int j) { return std::min(1.0 - std::pow(10.0, -j), kQMax); }

std::string describe(const char* what, double x) {
    std::ostringstream os;
    os.precision(17);
    os << what << x;
    return os.str();
}

void finish(ConvergenceReport& r) {
    r.monotone_tail = monotone_tail(r.sequence);
    r.final_gap = r.sequence.empty() ? kNaN : r.sequence.back().gap;
    r.target_discrepancy = std::fabs(r.target_value - r.stated_target_value);
    r.converged = r.monotone_tail && r.final_gap < r.convergence_tol;
}

template <typename Eval>
void scan_point(ConvergenceReport& r, ConvergencePoint pt, Eval&& eval) {
    try {
        pt.value = eval();
        pt.gap = std::fabs(pt.value - r.target_value);
    } catch (const std::exception& e) {
        pt.value = kNaN;
        pt.gap = kNaN;
        pt.error = e.what();
    }
    r.sequence.push_back(std::move(pt));
}

void check_j_max(int j_max) {
    if (j_max < 3) throw DomainError("j_max must be at least 3");
}

}  // namespace

bool monotone_tail(const std::vector<ConvergencePoint>& sequence) {
    if (sequence.empty()) return false;
    for (std::size_t i = sequence.size() / 2; i < sequence.size(); ++i) {
        if (std::isnan(sequence[i].gap)) return false;
        if (i > sequence.size() / 2 && sequence[i].gap > sequence[i - 1].gap) return false;
    }
    return true;
}

KSubstitutionCheck limit_k_to_1(double t, double q, const Tolerance& tol) {
    const DeformParams params = DeformParams::qk(q, 1.0);
    const EvalResult r = psi_qk(t, params, tol);
    KSubstitutionCheck c;
    c.t = t;
    c.q = q;
    c.value = r.value;
    c.tail_bound = r.tail_bound;
    c.terms_used = r.terms_used;
    // Four times as many terms: the oracle's own remainder is then far below the bound.
    c.oracle_terms = 4 * std::max<std::size_t>(r.terms_used, 16);
    c.oracle_value = reference::brute_force_series(reference::SeriesKind::PSI_QK, t, params, c.oracle_terms);
    c.gap = std::fabs(c.value - c.oracle_value);
    c.allowed = 2.0 * r.tail_bound + 8.0 * kEps * std::max(1.0, std::fabs(c.value));
    c.holds = c.gap <= c.allowed;
    return c;
}

ConvergenceReport limit_q_to_1_qk(double t, double k, int j_max, double convergence_tol, const Tolerance& tol) {
    check_j_max(j_max);
    ConvergenceReport r;
    r.convergence_tol = convergence_tol;
    r.target_value = reference::k_digamma_ref(k * t, k).value;
    r.target_desc = describe("(ln k + psi(t))/k, q->1- limit of the (q,k) series, k = ", k);
    r.stated_target_value = reference::k_digamma_ref(t, k).value;
    r.stated_target_desc = k == 1.0 ? "classical psi(t)" : describe("k-digamma (ln k + psi(t/k))/k, k = ", k);
    for (int j = 1; j <= j_max; ++j) {
        const double q = q_schedule(j);
        ConvergencePoint pt;
        pt.parameter = q;
        pt.q = q;
        scan_point(r, pt, [&] { return psi_qk(t, DeformParams::qk(q, k), tol).value; });
    }
    finish(r);
    return r;
}

ConvergenceReport limit_q_to_1_pq(double t, long p, int j_max, double convergence_tol) {
    check_j_max(j_max);
    ConvergenceReport r;
    r.convergence_tol = convergence_tol;
    r.target_value = reference::pq_series_q_limit(p).value;
    r.target_desc = describe("ln p - H_p, q->1- limit of the finite (p,q) series, p = ", static_cast<double>(p));
    r.stated_target_value = reference::p_digamma_ref(t, p).value;
    r.stated_target_desc = describe("p-digamma ln p - sum_{n=0}^{p} 1/(t+n), p = ", static_cast<double>(p));
    for (int j = 1; j <= j_max; ++j) {
        const double q = q_schedule(j);
        ConvergencePoint pt;
        pt.parameter = q;
        pt.q = q;
        pt.p = p;
        scan_point(r, pt, [&] { return psi_pq(t, DeformParams::pq(p, q)).value; });
    }
    finish(r);
    return r;
}

ConvergenceReport limit_p_to_inf(double t, double q, const std::vector<long>& p_list, const Tolerance& tol) {
    if (p_list.empty()) throw DomainError("p_list must not be empty");
    for (std::size_t i = 1; i < p_list.size(); ++i)
        if (p_list[i] <= p_list[i - 1]) throw DomainError("p_list must be strictly increasing");

    const EvalResult limit = psi_qk(t, DeformParams::qk(q, 1.0), tol);
    ConvergenceReport r;
    r.convergence_tol = 0.0;
    r.target_value = limit.value;
    r.target_desc = describe("q-digamma psi_{q,1}(t), q = ", q);
    r.stated_target_value = limit.value;
    r.stated_target_desc = r.target_desc;

    const double lnq = std::log(q);
    const double one_minus_qt = -std::expm1(t * lnq);
    bool within = true;
    for (long p : p_list) {
        ConvergencePoint pt;
        pt.parameter = static_cast<double>(p);
        pt.q = q;
        pt.p = p;
        const double dp = static_cast<double>(p);
        // |ln [p]_q + ln(1-q)| = |ln(1 - q^p)| plus the series remainder beyond p
        const double bound = std::fabs(std::log1p(-std::exp(dp * lnq))) +
                             std::fabs(lnq) * std::exp((dp + 1.0) * t * lnq) / ((1.0 - q) * one_minus_qt);
        pt.bound = bound;
        scan_point(r, pt, [&] { return psi_pq(t, DeformParams::pq(p, q)).value; });
        // the target carries its own certified truncation error plus rounding
        const double slack = limit.tail_bound + 8.0 * kEps * std::max(1.0, std::fabs(limit.value));
        if (!(r.sequence.back().gap <= bound + slack)) within = false;
    }
    bool strictly = true;
    for (std::size_t i = 1; i < r.sequence.size(); ++i)
        if (!(r.sequence[i].gap < r.sequence[i - 1].gap)) strictly = false;
    finish(r);
    r.strictly_decreasing = strictly;
    r.within_bound = within;
    r.converged = strictly && within;
    return r;
}

ConvergenceReport limit_pq_combined(double t, int j_max, double convergence_tol, CombinedPath path) {
    check_j_max(j_max);
    if (j_max > 7) throw DomainError("combined scan supports j_max <= 7");
    ConvergenceReport r;
    r.convergence_tol = convergence_tol;
    r.target_value = reference::classical_digamma(t).value;
    r.target_desc = "classical psi(t)";
    r.stated_target_value = r.target_value;
    r.stated_target_desc = r.target_desc;
    for (int j = 1; j <= j_max; ++j) {
        const double q = q_schedule(j);
        const double p_real = path == CombinedPath::Decade
                                  ? std::pow(10.0, j)
                                  : std::ceil((j * std::log(10.0) + 10.0) / (std::min(t, 1.0) * -std::log(q)));
        if (!(p_real <= 1e9)) throw DomainError("combined scan needs more than 1e9 terms at this t");
        const long p = static_cast<long>(p_real);
        ConvergencePoint pt;
        pt.parameter = j;
        pt.q = q;
        pt.p = p;
        scan_point(r, pt, [&] { return psi_pq(t, DeformParams::pq(p, q)).value; });
    }
    finish(r);
    return r;
}

}  // namespace qdigamma::limits
