#include "qdigamma/inequalities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "qdigamma/errors.hpp"
#include "qdigamma/qcore.hpp"

namespace qdigamma {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

struct PsiPair {
    EvalResult at_a;
    EvalResult at_c;
};

PsiPair positive_psi_pair(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol) {
    PsiPair r{psi(spec.a + spec.b * t, params, tol), psi(spec.c + spec.d * t, params, tol)};
    if (r.at_a.value - r.at_a.tail_bound <= 0.0)
        throw PositivityViolated("psi(a + b t) = " + fmt(r.at_a.value) + " is not certifiably positive at t = " +
                                 fmt(t));
    if (r.at_c.value - r.at_c.tail_bound <= 0.0)
        throw PositivityViolated("psi(c + d t) = " + fmt(r.at_c.value) + " is not certifiably positive at t = " +
                                 fmt(t));
    return r;
}

}  // namespace

std::vector<std::string> RatioSpec::structural_violations() const {
    std::vector<std::string> out;
    const std::pair<const char*, double> fields[] = {{"a", a}, {"b", b},         {"c", c},
                                                     {"d", d}, {"alpha", alpha}, {"beta", beta}};
    for (const auto& [name, v] : fields)
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be positive");
    if (a > c) out.push_back("a <= c violated");
    if (a + b > c + d) out.push_back("a + b <= c + d violated");
    if (beta * d > alpha * b) out.push_back("beta d <= alpha b violated");
    return out;
}

SpecValidity validate_spec(const RatioSpec& spec, const DeformParams& params, double t_min, double t_max,
                           const Tolerance& tol) {
    SpecValidity v;
    v.reasons = spec.structural_violations();
    if (!(t_min >= 0.0) || !(t_max >= t_min)) v.reasons.push_back("t range must satisfy 0 <= t_min <= t_max");
    for (double t : {t_min, t_max}) {
        if (spec.a + spec.b * t > spec.c + spec.d * t)
            v.reasons.push_back("a + b t <= c + d t violated at t = " + fmt(t));
    }
    if (v.reasons.empty()) {
        const std::pair<const char*, double> args[] = {{"a + b t_min", spec.a + spec.b * t_min},
                                                       {"c + d t_min", spec.c + spec.d * t_min}};
        for (const auto& [name, x] : args) {
            try {
                const EvalResult r = psi(x, params, tol);
                if (!(r.value > r.tail_bound))
                    v.reasons.push_back(std::string("psi(") + name + ") = " + fmt(r.value) +
                                        " is not above its tail bound");
            } catch (const std::exception& e) {
                v.reasons.push_back(std::string("psi(") + name + ") failed: " + e.what());
            }
        }
    }
    v.valid = v.reasons.empty();
    return v;
}

EvalResult ratio(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol) {
    if (!(t >= 0.0)) throw DomainError("ratio functions are defined for t >= 0");
    const PsiPair p = positive_psi_pair(spec, t, params, tol);
    const double log_ratio = spec.alpha * std::log(p.at_a.value) - spec.beta * std::log(p.at_c.value);
    const double value = std::exp(log_ratio);
    // |ln x - ln y| <= |x - y| / min(x, y)
    const double log_err = spec.alpha * p.at_a.tail_bound / (p.at_a.value - p.at_a.tail_bound) +
                           spec.beta * p.at_c.tail_bound / (p.at_c.value - p.at_c.tail_bound);
    return {value, value * std::expm1(log_err), p.at_a.terms_used + p.at_c.terms_used};
}

EvalResult ratio_G(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol) {
    if (params.family() != Family::QK) throw DomainError("ratio_G requires the qk family");
    return ratio(spec, t, params, tol);
}

EvalResult ratio_H(const RatioSpec& spec, double t, const DeformParams& params) {
    if (params.family() != Family::PQ) throw DomainError("ratio_H requires the pq family");
    return ratio(spec, t, params);
}

CrossMargin check_lemma_cross(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol) {
    if (!(t >= 0.0)) throw DomainError("check_lemma_cross is defined for t >= 0");
    const PsiPair p = positive_psi_pair(spec, t, params, tol);
    const EvalResult dpa = psi_prime(spec.a + spec.b * t, params, tol);
    const EvalResult dpc = psi_prime(spec.c + spec.d * t, params, tol);

    const double lhs = spec.alpha * spec.b * p.at_c.value * dpa.value;
    const double rhs = spec.beta * spec.d * p.at_a.value * dpc.value;
    const double ea = p.at_a.tail_bound;
    const double ec = p.at_c.tail_bound;
    const double err = spec.alpha * spec.b * (ec * dpa.value + p.at_c.value * dpa.tail_bound + ec * dpa.tail_bound) +
                       spec.beta * spec.d * (ea * dpc.value + p.at_a.value * dpc.tail_bound + ea * dpc.tail_bound);
    return {lhs - rhs, err};
}

Threshold find_positive_threshold(const DeformParams& params, const Tolerance& tol) {
    if (params.family() == Family::PQ && params.p() < 2)
        throw NoPositiveRegion("psi_{p,q} with p = 1 is ln q * q^t / (1 - q) < 0 for every t > 0");

    Threshold best;
    double best_abs = std::numeric_limits<double>::infinity();
    auto eval = [&](double t) {
        const EvalResult r = psi(t, params, tol);
        ++best.iterations;
        if (std::fabs(r.value) < best_abs) {
            best_abs = std::fabs(r.value);
            best.t0 = t;
            best.psi_value = r.value;
            best.psi_tail_bound = r.tail_bound;
        }
        return r.value;
    };

    double lo = 1.0;
    double hi = 1.0;
    const double v1 = eval(1.0);
    if (v1 == 0.0) return best;
    if (v1 < 0.0) {
        hi = 2.0;
        while (eval(hi) <= 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw NoPositiveRegion("psi stays nonpositive on the whole searched range");
        }
    } else {
        lo = 0.5;
        while (eval(lo) >= 0.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < kThresholdFloor)
                throw NoRootInBracket("psi is already positive at the argument floor", kThresholdFloor);
        }
    }

    const double target = 10.0 * tol.abs_tol;
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = eval(mid);
        if (v < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 && best_abs <= target) break;
    }
    return best;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Suite suite) noexcept {
    switch (suite) {
        case Suite::QK_THEOREM: return "qk-theorem";
        case Suite::QK_COROLLARY: return "qk-corollary";
        case Suite::PQ_THEOREM: return "pq-theorem";
        case Suite::PQ_COROLLARY: return "pq-corollary";
        case Suite::LEMMA_CROSS: return "lemma-cross";
        case Suite::MONOTONE_PSI: return "monotone-psi";
        case Suite::MONOTONE_PSI_PRIME: return "monotone-psi-prime";
    }
    return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) noexcept {
    for (Suite s : {Suite::QK_THEOREM, Suite::QK_COROLLARY, Suite::PQ_THEOREM, Suite::PQ_COROLLARY,
                    Suite::LEMMA_CROSS, Suite::MONOTONE_PSI, Suite::MONOTONE_PSI_PRIME})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::vector<double> GridSpec::t_points() const {
    std::vector<double> out;
    if (t_count < 1) return out;
    if (t_count == 1) return {t_min};
    out.reserve(static_cast<std::size_t>(t_count));
    for (int i = 0; i < t_count; ++i)
        out.push_back(i == t_count - 1 ? t_max : t_min + (t_max - t_min) * i / (t_count - 1));
    return out;
}

double inequality_slack(double propagated_bound) noexcept { return std::max(1e-9, propagated_bound); }

namespace {

struct Candidate {
    double margin = 0.0;
    double epsilon = 0.0;
    double t = 0.0;
    std::optional<double> s;
};

struct SampleOutcome {
    bool skipped = false;
    std::string skip_reason;
    std::size_t checks = 0;
    std::optional<Candidate> worst;
    std::vector<PointFailure> failures;

    void record(const Candidate& c) {
        ++checks;
        if (!worst || c.margin + c.epsilon < worst->margin + worst->epsilon) worst = c;
    }
};

bool is_pairwise(Suite suite) { return suite == Suite::MONOTONE_PSI || suite == Suite::MONOTONE_PSI_PRIME; }

std::optional<Family> required_family(Suite suite) {
    switch (suite) {
        case Suite::QK_THEOREM:
        case Suite::QK_COROLLARY: return Family::QK;
        case Suite::PQ_THEOREM:
        case Suite::PQ_COROLLARY: return Family::PQ;
        default: return std::nullopt;
    }
}

bool is_corollary(Suite suite) { return suite == Suite::QK_COROLLARY || suite == Suite::PQ_COROLLARY; }
bool is_theorem(Suite suite) { return suite == Suite::QK_THEOREM || suite == Suite::PQ_THEOREM; }

// Range over which the preconditions must hold for the suite's comparisons.
std::pair<double, double> validation_range(Suite suite, const GridSpec& grid) {
    if (is_theorem(suite)) return {std::min(0.0, grid.t_min), std::max(1.0, grid.t_max)};
    if (is_corollary(suite)) return {std::min(1.0, grid.t_min), std::max(1.0, grid.t_max)};
    return {grid.t_min, grid.t_max};
}

template <typename Fn>
void guarded(SampleOutcome& out, std::size_t index, double t, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        out.failures.push_back({index, t, e.what()});
    }
}

SampleOutcome run_sample(Suite suite, const GridSpec& grid, std::size_t index, const std::vector<double>& ts,
                         const Tolerance& tol) {
    const ParamSample& sample = grid.samples[index];
    const DeformParams& params = sample.params;
    SampleOutcome out;

    if (auto fam = required_family(suite); fam && *fam != params.family()) {
        out.skipped = true;
        out.skip_reason = "sample " + std::to_string(index) + ": family " + std::string(to_string(params.family())) +
                          " does not match suite";
        return out;
    }

    if (is_pairwise(suite)) {
        // Pair stream depends on the grid seed and the sample index only.
        SeededUniform rng(grid.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
        const bool use_prime = suite == Suite::MONOTONE_PSI_PRIME;
        for (int i = 0; i < grid.t_count; ++i) {
            double s = rng.next(grid.t_min, grid.t_max);
            double t = rng.next(grid.t_min, grid.t_max);
            if (s > t) std::swap(s, t);
            guarded(out, index, t, [&] {
                const EvalResult fs = use_prime ? psi_prime(s, params, tol) : psi(s, params, tol);
                const EvalResult ft = use_prime ? psi_prime(t, params, tol) : psi(t, params, tol);
                // psi nondecreasing, psi' nonincreasing
                const double margin = use_prime ? fs.value - ft.value : ft.value - fs.value;
                out.record({margin, 2.0 * (fs.tail_bound + ft.tail_bound), t, s});
            });
        }
        return out;
    }

    const auto [lo, hi] = validation_range(suite, grid);
    const SpecValidity validity = validate_spec(sample.spec, params, lo, hi, tol);
    if (!validity.valid) {
        out.skipped = true;
        std::string reason = "sample " + std::to_string(index) + ":";
        for (const auto& r : validity.reasons) reason += " " + r + ";";
        out.skip_reason = reason;
        return out;
    }

    if (suite == Suite::LEMMA_CROSS) {
        for (double t : ts)
            guarded(out, index, t, [&] {
                const CrossMargin m = check_lemma_cross(sample.spec, t, params, tol);
                out.record({m.margin, inequality_slack(m.error_bound), t, std::nullopt});
            });
        return out;
    }

    std::optional<EvalResult> g0, g1;
    guarded(out, index, 0.0, [&] { g0 = ratio(sample.spec, 0.0, params, tol); });
    guarded(out, index, 1.0, [&] { g1 = ratio(sample.spec, 1.0, params, tol); });
    if (!g0 || !g1) return out;

    for (double t : ts)
        guarded(out, index, t, [&] {
            const EvalResult g = ratio(sample.spec, t, params, tol);
            if (is_theorem(suite)) {
                out.record({g.value - g0->value, inequality_slack(g.tail_bound + g0->tail_bound), t, std::nullopt});
                out.record({g1->value - g.value, inequality_slack(g.tail_bound + g1->tail_bound), t, std::nullopt});
            } else {
                out.record({g.value - g1->value, inequality_slack(g.tail_bound + g1->tail_bound), t, std::nullopt});
            }
        });
    return out;
}

}  // namespace

VerificationReport verify_bounds(Suite suite, const GridSpec& grid, const Tolerance& tol) {
    tol.validate();
    if (grid.t_count < 2) throw DomainError("grid t_count must be at least 2");
    if (grid.samples.empty()) throw DomainError("grid has no parameter samples");

    const std::vector<double> ts = grid.t_points();
    std::vector<SampleOutcome> outcomes(grid.samples.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < outcomes.size(); i = next++) {
            try {
                outcomes[i] = run_sample(suite, grid, i, ts, tol);
            } catch (const std::exception& e) {
                outcomes[i].failures.push_back({i, 0.0, e.what()});
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(outcomes.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();

    VerificationReport report;
    report.suite = suite;
    report.grid = grid;
    std::optional<Candidate> worst;
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        SampleOutcome& o = outcomes[i];
        if (o.skipped) {
            ++report.skipped;
            report.skip_reasons.push_back(std::move(o.skip_reason));
            continue;
        }
        report.checks_run += o.checks;
        for (auto& f : o.failures) report.failures.push_back(std::move(f));
        if (o.worst && (!worst || o.worst->margin + o.worst->epsilon < worst->margin + worst->epsilon)) {
            worst = o.worst;
            worst_index = i;
        }
    }
    if (worst) {
        report.worst_violation = worst->margin;
        report.epsilon = worst->epsilon;
        report.worst_point =
            WorstPoint{worst_index, grid.samples[worst_index].params, grid.samples[worst_index].spec, worst->t, worst->s};
    }
    report.passed = report.checks_run > 0 && report.failures.empty() &&
                    (!worst || worst->margin >= -worst->epsilon);
    return report;
}

std::vector<ParamSample> random_samples(Family family, int count, double t_span, std::uint64_t seed,
                                        const Tolerance& tol) {
    if (count < 1) throw DomainError("random_samples requires count >= 1");
    const double span = std::max(1.0, t_span);
    SeededUniform rng(seed);
    std::vector<ParamSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double q = rng.next(0.05, 0.95);
        const DeformParams params =
            family == Family::QK ? DeformParams::qk(q, rng.next(0.25, 4.0))
                                 : DeformParams::pq(2 + static_cast<long>(rng.next() * 19.0), q);
        double t0 = kThresholdFloor;
        try {
            t0 = find_positive_threshold(params, tol).t0;
        } catch (const NoRootInBracket& e) {
            t0 = e.floor();
        }

        RatioSpec spec;
        spec.a = rng.next(t0 + 0.1, t0 + 5.0);
        spec.alpha = rng.next(0.25, 3.0);
        spec.beta = rng.next(0.25, 3.0);
        spec.b = 3.0 * (1.0 - rng.next());
        const double d_max = spec.b * spec.alpha / spec.beta;
        spec.d = d_max * (1.0 - rng.next());
        double gap = rng.next(0.0, 2.0);

        if (i % 10 == 3) spec.d = d_max;
        if (i % 10 == 6) gap = 0.0;
        spec.c = spec.a + std::max(0.0, spec.b - spec.d) * span + gap;
        if (i % 20 == 9) {
            spec.c = spec.a;
            spec.d = spec.b;
            spec.beta = spec.alpha;
        }
        // keep boundary samples on the admissible side after rounding
        while (spec.beta * spec.d > spec.alpha * spec.b) spec.d = std::nextafter(spec.d, 0.0);
        while (spec.a + spec.b * span > spec.c + spec.d * span ||
               spec.a + spec.b > spec.c + spec.d)
            spec.c = std::nextafter(spec.c, std::numeric_limits<double>::infinity());
        out.push_back({params, spec});
    }
    return out;
}

}  // namespace qdigamma
