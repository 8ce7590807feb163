#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qdigamma/params.hpp"

namespace qdigamma {

/// Constants of the power ratio [psi(a + b t)]^alpha / [psi(c + d t)]^beta.
struct RatioSpec {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    /// Structural conditions: all six positive, a <= c, a + b <= c + d and
    /// beta d <= alpha b. Returns one message per violated condition.
    std::vector<std::string> structural_violations() const;

    friend bool operator==(const RatioSpec&, const RatioSpec&) = default;
};

struct SpecValidity {
    bool valid = true;
    std::vector<std::string> reasons;
};

/// Checks the theorem preconditions on [t_min, t_max]: the structural
/// conditions, a + b t <= c + d t at both endpoints, and positivity of psi at
/// the left-endpoint arguments (sufficient because psi is nondecreasing).
SpecValidity validate_spec(const RatioSpec& spec, const DeformParams& params, double t_min, double t_max,
                           const Tolerance& tol = {});

/// G(t) for the (q,k) family, computed as exp(alpha ln psi(a+bt) - beta ln psi(c+dt)).
/// tail_bound is a first-order bound propagated from both psi tail bounds.
EvalResult ratio_G(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol = {});

/// H(t), the (p,q) counterpart of ratio_G.
EvalResult ratio_H(const RatioSpec& spec, double t, const DeformParams& params);

/// ratio_G or ratio_H by family.
EvalResult ratio(const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol = {});

struct CrossMargin {
    /// alpha b psi(c+dt) psi'(a+bt) - beta d psi(a+bt) psi'(c+dt); >= 0 under the preconditions.
    double margin = 0.0;
    /// Bound on the error in margin induced by the series tail bounds.
    double error_bound = 0.0;
};

CrossMargin check_lemma_cross(const RatioSpec& spec, double t, const DeformParams& params,
                              const Tolerance& tol = {});

struct Threshold {
    double t0 = 0.0;
    double psi_value = 0.0;
    double psi_tail_bound = 0.0;
    int iterations = 0;
};

/// Lowest argument floor explored when bracketing the root from below.
inline constexpr double kThresholdFloor = 1e-9;

/// Root t0 of the nondecreasing psi of either family, by bracketing then
/// bisection. Throws NoPositiveRegion when psi is never positive and
/// NoRootInBracket when psi is already positive at kThresholdFloor.
Threshold find_positive_threshold(const DeformParams& params, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

enum class Suite {
    QK_THEOREM,
    QK_COROLLARY,
    PQ_THEOREM,
    PQ_COROLLARY,
    LEMMA_CROSS,
    MONOTONE_PSI,
    MONOTONE_PSI_PRIME,
};

std::string_view to_string(Suite suite) noexcept;
std::optional<Suite> parse_suite(std::string_view name) noexcept;

struct ParamSample {
    DeformParams params;
    RatioSpec spec;
};

struct GridSpec {
    double t_min = 0.0;
    double t_max = 1.0;
    int t_count = 50;
    std::vector<ParamSample> samples;
    std::uint64_t seed = 0;

    /// t_count points spaced evenly over [t_min, t_max].
    std::vector<double> t_points() const;
};

struct WorstPoint {
    std::size_t sample_index = 0;
    DeformParams params = DeformParams::qk(0.5, 1.0);
    RatioSpec spec;
    double t = 0.0;
    /// Second argument for pairwise suites (s <= t); absent otherwise.
    std::optional<double> s;
};

struct PointFailure {
    std::size_t sample_index = 0;
    double t = 0.0;
    std::string message;
};

struct VerificationReport {
    Suite suite = Suite::QK_THEOREM;
    GridSpec grid;
    bool passed = false;
    /// Signed margin at the point closest to violation (margin + epsilon minimal).
    double worst_violation = 0.0;
    /// Slack applied at that point.
    double epsilon = 0.0;
    std::optional<WorstPoint> worst_point;
    std::size_t checks_run = 0;
    std::size_t skipped = 0;
    std::vector<std::string> skip_reasons;
    std::vector<PointFailure> failures;
};

/// Evaluates the selected inequality at every grid point (margin >= 0 means it
/// holds). Samples failing validate_spec, or of the wrong family for the
/// suite, are skipped. Samples are evaluated concurrently; the report is
/// assembled in sample order so it depends only on grid and tol.
VerificationReport verify_bounds(Suite suite, const GridSpec& grid, const Tolerance& tol = {});

/// Slack for ratio and cross-margin comparisons: max(1e-9, propagated bounds).
double inequality_slack(double propagated_bound) noexcept;

/// Seeded generator of parameter/spec samples satisfying the theorem
/// preconditions on [0, max(1, t_span)] by construction. Samples with
/// index % 10 == 3 sit on beta d = alpha b, index % 10 == 6 on equality of the
/// arguments at one endpoint, and index % 20 == 9 are degenerate
/// (a = c, b = d, alpha = beta).
std::vector<ParamSample> random_samples(Family family, int count, double t_span, std::uint64_t seed,
                                        const Tolerance& tol = {});

/// Seeded uniform draws on top of std::mt19937_64. The engine output is mapped
/// to [0, 1) directly so draws do not depend on the standard library vendor.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, 1).
    double next() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) noexcept { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace qdigamma
