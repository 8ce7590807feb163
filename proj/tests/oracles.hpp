#pragma once

// Test-only oracles. Nothing here calls into the evaluation paths it checks,
// except through the function objects handed to the finite-difference helpers.

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

inline double central_diff(const std::function<double(double)>& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// -ln(1-q)/k + ln q sum_{n=1}^{N} q^{nkt}/(1-q^{nk}) in long double via powl.
/// Terms decrease in n, so the loop stops once one underflows to zero.
inline long double psi_qk_sum(long double t, long double q, long double k, std::size_t terms) {
    long double s = 0.0L;
    for (std::size_t n = 1; n <= terms; ++n) {
        const long double nk = static_cast<long double>(n) * k;
        const long double term = std::pow(q, nk * t) / (1.0L - std::pow(q, nk));
        if (term == 0.0L) break;
        s += term;
    }
    return -std::log1p(-q) / k + std::log(q) * s;
}

/// Slope at t, central where t - h >= 0 and the second-order forward
/// difference otherwise.
inline double slope(const std::function<double(double)>& f, double t, double h) {
    if (t - h >= 0.0) return central_diff(f, t, h);
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
}

/// ln[p]_q + ln q sum_{n=1}^{p} q^{nt}/(1-q^n), directly.
inline long double psi_pq_sum(long double t, long p, long double q) {
    long double s = 0.0L;
    for (long n = 1; n <= p; ++n) s += std::pow(q, n * t) / (1.0L - std::pow(q, static_cast<long double>(n)));
    return std::log((1.0L - std::pow(q, static_cast<long double>(p))) / (1.0L - q)) + std::log(q) * s;
}

/// d/dt of ln([p]_q^t [p]_q! / ([t]_q ... [t+p]_q)), termwise.
inline long double pq_product_log_derivative(long double t, long p, long double q) {
    long double s = 0.0L;
    for (long n = 0; n <= p; ++n) {
        const long double x = std::pow(q, t + n);
        s += x / (1.0L - x);
    }
    return std::log((1.0L - std::pow(q, static_cast<long double>(p))) / (1.0L - q)) + std::log(q) * s;
}

/// Plain bisection on a nondecreasing function, to argument width 1e-15.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
