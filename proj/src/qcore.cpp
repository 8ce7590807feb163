#include "qdigamma/qcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qdigamma/summation.hpp"

namespace qdigamma {

namespace {

void check_argument(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "argument t must be positive and finite, got " << t;
        throw DomainError(msg.str());
    }
}

void require_family(const DeformParams& params, Family family, const char* op) {
    if (params.family() != family)
        throw DomainError(std::string(op) + " requires the " + std::string(to_string(family)) +
                          " family");
}

// ln(1 - e^a) for a < 0 without cancellation in either regime.
double log1mexp(double a) {
    return a > -M_LN2 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

// 1 - e^a for a < 0.
double one_minus_exp(double a) { return -std::expm1(a); }

// Smallest N in [0, n_max] with bound(N) <= tol, for a bound nonincreasing in N.
template <typename Bound>
std::size_t first_certified_terms(Bound&& bound, const Tolerance& tol, const char* op) {
    if (bound(0) <= tol.abs_tol) return 0;
    std::size_t lo = 0;  // bound(lo) > tol
    std::size_t hi = 1;
    while (bound(hi) > tol.abs_tol) {
        if (hi >= tol.n_max) {
            const double best = bound(tol.n_max);
            std::ostringstream msg;
            msg << op << ": certified tail bound " << best << " exceeds abs_tol " << tol.abs_tol
                << " at the term cap N_max = " << tol.n_max;
            throw TruncationNotConverged(msg.str(), best, tol.n_max);
        }
        lo = hi;
        hi = hi > tol.n_max / 2 ? tol.n_max : 2 * hi;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (bound(mid) <= tol.abs_tol)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

struct QkSeries {
    double lnq;
    double k;
    double t;

    QkSeries(double t_, const DeformParams& params) : lnq(std::log(params.q())), k(params.k()), t(t_) {}

    // sum_{n>N} q^{nkt} / (1 - q^{nk}) <= q^{(N+1)kt} / ((1 - q^k)(1 - q^{kt}))
    double majorant(std::size_t terms) const {
        const double a = k * t * lnq;
        return std::exp(static_cast<double>(terms + 1) * a) /
               (one_minus_exp(k * lnq) * one_minus_exp(a));
    }

    // sum_{n>N} n r^n = r^{N+1}((N+1)(1-r) + r) / (1-r)^2 with r = q^{kt}
    double weighted_majorant(std::size_t terms) const {
        const double a = k * t * lnq;
        const double r = std::exp(a);
        const double one_minus_r = one_minus_exp(a);
        const double n1 = static_cast<double>(terms + 1);
        return std::exp(n1 * a) * (n1 * one_minus_r + r) / (one_minus_r * one_minus_r) /
               one_minus_exp(k * lnq);
    }

    // Sum over n >= N of |ln(1 - x_n)| with x_n = q^{k(c+n)}: each term is at
    // most x_n/(1 - x_n) and x_{n+1} = q^k x_n.
    double log_product_majorant(double c, std::size_t terms) const {
        const double a = k * (c + static_cast<double>(terms)) * lnq;
        return std::exp(a) / (one_minus_exp(a) * one_minus_exp(k * lnq));
    }
};

}  // namespace

double q_bracket(long p, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q_bracket requires q in (0, 1)");
    if (p < 1) throw DomainError("q_bracket requires p >= 1");
    const double lnq = std::log(q);
    return one_minus_exp(static_cast<double>(p) * lnq) / one_minus_exp(lnq);
}

double ln_q_bracket(double x, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("ln_q_bracket requires q in (0, 1)");
    if (!(x > 0.0)) throw DomainError("ln_q_bracket requires x > 0");
    const double lnq = std::log(q);
    return log1mexp(x * lnq) - std::log1p(-q);
}

double psi_qk_tail_bound(double t, const DeformParams& params, std::size_t terms) {
    check_argument(t);
    require_family(params, Family::QK, "psi_qk_tail_bound");
    const QkSeries s(t, params);
    return std::fabs(s.lnq) * s.majorant(terms);
}

double psi_qk_prime_tail_bound(double t, const DeformParams& params, std::size_t terms) {
    check_argument(t);
    require_family(params, Family::QK, "psi_qk_prime_tail_bound");
    const QkSeries s(t, params);
    return s.k * s.lnq * s.lnq * s.weighted_majorant(terms);
}

double ln_gamma_qk_tail_bound(double t, const DeformParams& params, std::size_t terms) {
    check_argument(t);
    require_family(params, Family::QK, "ln_gamma_qk_tail_bound");
    const QkSeries s(t, params);
    return (s.log_product_majorant(s.k, terms) + s.log_product_majorant(t, terms)) / s.k;
}

EvalResult psi_qk(double t, const DeformParams& params, const Tolerance& tol) {
    check_argument(t);
    require_family(params, Family::QK, "psi_qk");
    tol.validate();
    const QkSeries s(t, params);
    const double abs_lnq = std::fabs(s.lnq);
    const std::size_t terms = first_certified_terms(
        [&](std::size_t n) { return abs_lnq * s.majorant(n); }, tol, "psi_qk");

    const double a = s.k * t * s.lnq;
    const double b = s.k * s.lnq;
    CompensatedSum sum;
    for (std::size_t n = 1; n <= terms; ++n) {
        const double dn = static_cast<double>(n);
        sum += std::exp(dn * a) / one_minus_exp(dn * b);
    }
    return {-std::log1p(-params.q()) / s.k + s.lnq * sum.value(), abs_lnq * s.majorant(terms), terms};
}

EvalResult psi_qk_prime(double t, const DeformParams& params, const Tolerance& tol) {
    check_argument(t);
    require_family(params, Family::QK, "psi_qk_prime");
    tol.validate();
    const QkSeries s(t, params);
    const double scale = s.k * s.lnq * s.lnq;
    const std::size_t terms = first_certified_terms(
        [&](std::size_t n) { return scale * s.weighted_majorant(n); }, tol, "psi_qk_prime");

    const double a = s.k * t * s.lnq;
    const double b = s.k * s.lnq;
    CompensatedSum sum;
    for (std::size_t n = 1; n <= terms; ++n) {
        const double dn = static_cast<double>(n);
        sum += dn * std::exp(dn * a) / one_minus_exp(dn * b);
    }
    return {scale * sum.value(), scale * s.weighted_majorant(terms), terms};
}

EvalResult ln_gamma_qk(double t, const DeformParams& params, const Tolerance& tol) {
    check_argument(t);
    require_family(params, Family::QK, "ln_gamma_qk");
    tol.validate();
    const QkSeries s(t, params);
    auto bound = [&](std::size_t n) {
        return (s.log_product_majorant(s.k, n) + s.log_product_majorant(t, n)) / s.k;
    };
    const std::size_t terms = first_certified_terms(bound, tol, "ln_gamma_qk");

    CompensatedSum sum;
    for (std::size_t n = 0; n < terms; ++n) {
        const double dn = static_cast<double>(n);
        sum += log1mexp(s.k * (s.k + dn) * s.lnq) / s.k;
        sum -= log1mexp(s.k * (t + dn) * s.lnq) / s.k;
    }
    sum -= (t / s.k - 1.0) * std::log1p(-params.q());
    return {sum.value(), bound(terms), terms};
}

EvalResult psi_pq(double t, const DeformParams& params) {
    check_argument(t);
    require_family(params, Family::PQ, "psi_pq");
    const double lnq = std::log(params.q());
    CompensatedSum sum;
    for (long n = 1; n <= params.p(); ++n) {
        const double dn = static_cast<double>(n);
        sum += std::exp(dn * t * lnq) / one_minus_exp(dn * lnq);
    }
    const double ln_bracket = log1mexp(static_cast<double>(params.p()) * lnq) - std::log1p(-params.q());
    return {ln_bracket + lnq * sum.value(), 0.0, static_cast<std::size_t>(params.p())};
}

EvalResult psi_pq_prime(double t, const DeformParams& params) {
    check_argument(t);
    require_family(params, Family::PQ, "psi_pq_prime");
    const double lnq = std::log(params.q());
    CompensatedSum sum;
    for (long n = 1; n <= params.p(); ++n) {
        const double dn = static_cast<double>(n);
        sum += dn * std::exp(dn * t * lnq) / one_minus_exp(dn * lnq);
    }
    return {lnq * lnq * sum.value(), 0.0, static_cast<std::size_t>(params.p())};
}

EvalResult ln_gamma_pq(double t, const DeformParams& params) {
    check_argument(t);
    require_family(params, Family::PQ, "ln_gamma_pq");
    const double q = params.q();
    const double lnq = std::log(q);
    const double ln1mq = std::log1p(-q);
    auto ln_bracket = [&](double x) { return log1mexp(x * lnq) - ln1mq; };

    const long p = params.p();
    CompensatedSum sum;
    sum += t * ln_bracket(static_cast<double>(p));
    for (long n = 1; n <= p; ++n) sum += ln_bracket(static_cast<double>(n));
    for (long n = 0; n <= p; ++n) sum -= ln_bracket(t + static_cast<double>(n));
    return {sum.value(), 0.0, static_cast<std::size_t>(p)};
}

EvalResult psi(double t, const DeformParams& params, const Tolerance& tol) {
    return params.family() == Family::QK ? psi_qk(t, params, tol) : psi_pq(t, params);
}

EvalResult psi_prime(double t, const DeformParams& params, const Tolerance& tol) {
    return params.family() == Family::QK ? psi_qk_prime(t, params, tol) : psi_pq_prime(t, params);
}

EvalResult ln_gamma(double t, const DeformParams& params, const Tolerance& tol) {
    return params.family() == Family::QK ? ln_gamma_qk(t, params, tol) : ln_gamma_pq(t, params);
}

}  // namespace qdigamma
