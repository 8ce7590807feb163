#pragma once

#include <cstddef>

#include "qdigamma/errors.hpp"
#include "qdigamma/params.hpp"

namespace qdigamma {

/// q-analogue of the integer p: (1 - q^p) / (1 - q).
double q_bracket(long p, double q);

/// ln [x]_q for real x > 0.
double ln_q_bracket(double x, double q);

// ---------------------------------------------------------------------------
// (q,k) family. The series
//
//   psi_{q,k}(t) = -ln(1-q)/k + ln q * sum_{n>=1} q^{nkt} / (1 - q^{nk})
//
// is truncated at the first N whose geometric majorant of the remainder is
// below tol.abs_tol; the majorant is reported as tail_bound. Evaluations
// throw TruncationNotConverged when N would exceed tol.n_max.
// ---------------------------------------------------------------------------

EvalResult psi_qk(double t, const DeformParams& params, const Tolerance& tol = {});

/// (ln q)^2 * sum_{n>=1} nk q^{nkt} / (1 - q^{nk}); always >= 0.
EvalResult psi_qk_prime(double t, const DeformParams& params, const Tolerance& tol = {});

/// Log of the (q,k)-gamma function whose logarithmic derivative is psi_qk:
///
///   (1/k) sum_{n>=0} [ln(1 - q^{k(k+n)}) - ln(1 - q^{k(t+n)})] - (t/k - 1) ln(1 - q)
///
/// normalised so that ln Gamma_{q,k}(k) = 0. For k = 1 this is the usual
/// Jackson q-gamma product. Summed entirely in log space.
EvalResult ln_gamma_qk(double t, const DeformParams& params, const Tolerance& tol = {});

/// Certified bounds on the remainder after N terms. These are the quantities
/// the tolerance-driven evaluations above compare against abs_tol.
double psi_qk_tail_bound(double t, const DeformParams& params, std::size_t terms);
double psi_qk_prime_tail_bound(double t, const DeformParams& params, std::size_t terms);
double ln_gamma_qk_tail_bound(double t, const DeformParams& params, std::size_t terms);

// ---------------------------------------------------------------------------
// (p,q) family: finite sums, tail_bound is always 0 and terms_used = p.
// ---------------------------------------------------------------------------

/// ln [p]_q + ln q * sum_{n=1}^{p} q^{nt} / (1 - q^n)
EvalResult psi_pq(double t, const DeformParams& params);

/// (ln q)^2 * sum_{n=1}^{p} n q^{nt} / (1 - q^n)
EvalResult psi_pq_prime(double t, const DeformParams& params);

/// t ln[p]_q + sum_{n=1}^{p} ln[n]_q - sum_{n=0}^{p} ln[t+n]_q
EvalResult ln_gamma_pq(double t, const DeformParams& params);

// Family dispatch. The tolerance is ignored for Family::PQ.
EvalResult psi(double t, const DeformParams& params, const Tolerance& tol = {});
EvalResult psi_prime(double t, const DeformParams& params, const Tolerance& tol = {});
EvalResult ln_gamma(double t, const DeformParams& params, const Tolerance& tol = {});

}  // namespace qdigamma
