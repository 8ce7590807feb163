// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "qdigamma/inequalities.hpp"
#include "qdigamma/limits.hpp"
#include "qdigamma/qcore.hpp"
#include "qdigamma/reference.hpp"

using namespace qdigamma;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

GridSpec make_grid(Family family, int specs, double t_min, double t_max, int t_count, std::uint64_t seed) {
    GridSpec g;
    g.t_min = t_min;
    g.t_max = t_max;
    g.t_count = t_count;
    g.seed = seed;
    g.samples = random_samples(family, specs, std::max(1.0, t_max), seed);
    return g;
}

struct RandomPoint {
    DeformParams params;
    double t;
};

std::vector<RandomPoint> random_points(Family family, int count, std::uint64_t seed) {
    SeededUniform u(seed);
    std::vector<RandomPoint> out;
    for (int i = 0; i < count; ++i) {
        const double q = u.next(0.05, 0.95);
        const double t = u.next(0.2, 5.0);
        if (family == Family::QK)
            out.push_back({DeformParams::qk(q, u.next(0.25, 4.0)), t});
        else
            out.push_back({DeformParams::pq(1 + static_cast<long>(u.next() * 20), q), t});
    }
    return out;
}

void report_suite(Outcome& o, const char* label, const VerificationReport& r) {
    o.detail << " " << label << ": checks=" << r.checks_run << " skipped=" << r.skipped
             << " worst=" << r.worst_violation << ";";
    o.require(r.passed && r.failures.empty() && r.skipped == 0, label);
}

// 1. psi nondecreasing, psi' nonincreasing on random ordered pairs.
void criterion_1(Outcome& o) {
    const GridSpec qk = make_grid(Family::QK, 200, 0.1, 10.0, 50, kSeed);
    const GridSpec pq = make_grid(Family::PQ, 200, 0.1, 10.0, 50, kSeed + 1);
    report_suite(o, "qk psi", verify_bounds(Suite::MONOTONE_PSI, qk));
    report_suite(o, "qk psi'", verify_bounds(Suite::MONOTONE_PSI_PRIME, qk));
    const VerificationReport p1 = verify_bounds(Suite::MONOTONE_PSI, pq);
    const VerificationReport p2 = verify_bounds(Suite::MONOTONE_PSI_PRIME, pq);
    report_suite(o, "pq psi", p1);
    report_suite(o, "pq psi'", p2);
    o.require(p1.epsilon == 0.0 && p2.epsilon == 0.0, "pq slack must be zero");
}

// 2. Theorem and corollary bounds on the ratio functions.
void criterion_2(Outcome& o) {
    report_suite(o, "qk theorem", verify_bounds(Suite::QK_THEOREM, make_grid(Family::QK, 100, 0.0, 1.0, 50, kSeed + 2)));
    report_suite(o, "pq theorem", verify_bounds(Suite::PQ_THEOREM, make_grid(Family::PQ, 100, 0.0, 1.0, 50, kSeed + 3)));
    // 20 points spaced 0.2 apart: 1.2, 1.4, ..., 5
    report_suite(o, "qk corollary", verify_bounds(Suite::QK_COROLLARY, make_grid(Family::QK, 100, 1.2, 5.0, 20, kSeed + 4)));
    report_suite(o, "pq corollary", verify_bounds(Suite::PQ_COROLLARY, make_grid(Family::PQ, 100, 1.2, 5.0, 20, kSeed + 5)));
}

// 3. Cross margin on criterion 2's grids, with the sign of (ln G)'.
void criterion_3(Outcome& o) {
    const std::array<GridSpec, 4> grids = {
        make_grid(Family::QK, 100, 0.0, 1.0, 50, kSeed + 2), make_grid(Family::PQ, 100, 0.0, 1.0, 50, kSeed + 3),
        make_grid(Family::QK, 100, 1.2, 5.0, 20, kSeed + 4), make_grid(Family::PQ, 100, 1.2, 5.0, 20, kSeed + 5)};
    std::size_t points = 0, sign_checked = 0, sign_mismatch = 0, below = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const GridSpec& g : grids) {
        const VerificationReport r = verify_bounds(Suite::LEMMA_CROSS, g);
        o.require(r.passed && r.skipped == 0, "lemma-cross suite");
        for (const ParamSample& s : g.samples)
            for (double t : g.t_points()) {
                ++points;
                const CrossMargin m = check_lemma_cross(s.spec, t, s.params);
                worst = std::min(worst, m.margin);
                if (m.margin < -inequality_slack(m.error_bound)) ++below;
                if (std::fabs(m.margin) <= 1e-6) continue;
                ++sign_checked;
                const double slope = oracle::slope(
                    [&](double x) { return std::log(ratio(s.spec, x, s.params).value); }, t, 1e-5);
                if ((slope > 0.0) != (m.margin > 0.0)) ++sign_mismatch;
            }
    }
    o.detail << " points=" << points << " min_margin=" << worst << " sign_checked=" << sign_checked
             << " sign_mismatch=" << sign_mismatch;
    o.require(below == 0, "margin below -epsilon");
    o.require(sign_mismatch == 0, "sign disagreement");
    o.require(sign_checked > points / 2, "too few sign checks");
}

// 4. psi' against central differences of psi, and second-order decay.
void criterion_4(Outcome& o) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kOrderH = 1e-2;
    for (Family family : {Family::QK, Family::PQ}) {
        double worst = 0.0, ratio_lo = INFINITY, ratio_hi = 0.0;
        int order_checked = 0, order_bad = 0, order_floor = 0;
        for (const RandomPoint& pt : random_points(family, 100, kSeed + 6 + static_cast<int>(family))) {
            const auto f = [&](double x) { return psi(x, pt.params).value; };
            const double d = psi_prime(pt.t, pt.params).value;
            worst = std::max(worst, std::fabs(d - oracle::central_diff(f, pt.t, 1e-5)));

            const double e1 = std::fabs(d - oracle::central_diff(f, pt.t, kOrderH));
            const double e2 = std::fabs(d - oracle::central_diff(f, pt.t, kOrderH / 2));
            const double floor = 8.0 * kEps * std::max(1.0, std::fabs(f(pt.t))) / (kOrderH / 2);
            if (e2 < 1e3 * floor) {
                ++order_floor;
                continue;
            }
            ++order_checked;
            const double r = e1 / e2;
            ratio_lo = std::min(ratio_lo, r);
            ratio_hi = std::max(ratio_hi, r);
            if (!(r >= 3.0 && r <= 5.0)) ++order_bad;
        }
        const char* name = family == Family::QK ? "qk" : "pq";
        o.detail << " " << name << ": max|psi'-fd|=" << worst << " halving ratio in [" << ratio_lo << ", "
                 << ratio_hi << "] over " << order_checked << " points (" << order_floor
                 << " at rounding floor);";
        o.require(worst <= 1e-6, std::string(name) + " derivative");
        o.require(order_bad == 0 && order_checked >= 50, std::string(name) + " second order");
    }
}

// 5. Log-gamma consistency.
void criterion_5(Outcome& o) {
    double worst_fd = 0.0, worst_norm = 0.0, worst_pq = 0.0;
    for (const RandomPoint& pt : random_points(Family::QK, 100, kSeed + 8)) {
        const double fd = oracle::central_diff([&](double x) { return ln_gamma_qk(x, pt.params).value; }, pt.t, 1e-5);
        worst_fd = std::max(worst_fd, std::fabs(fd - psi_qk(pt.t, pt.params).value));
        const double k = pt.params.k();
        worst_norm = std::max(worst_norm, std::fabs(std::exp(ln_gamma_qk(k, pt.params).value) - 1.0));
    }
    for (long p = 1; p <= 20; ++p)
        for (double q : {0.05, 0.3, 0.5, 0.8, 0.95}) {
            const double expect = q_bracket(p, q) / q_bracket(p + 1, q);
            const double got = std::exp(ln_gamma_pq(1.0, DeformParams::pq(p, q)).value);
            worst_pq = std::max(worst_pq, std::fabs(got - expect));
        }
    o.detail << " max|d lnG - psi|=" << worst_fd << " max|G(k)-1|=" << worst_norm
             << " max|G_pq(1)-[p]/[p+1]|=" << worst_pq;
    o.require(worst_fd <= 1e-6, "ln gamma derivative");
    o.require(worst_norm <= 1e-12, "normalisation");
    o.require(worst_pq <= 1e-12, "(p,q) value at 1");
}

// 6. Tail bounds against partial sums at N and 4N.
void criterion_6(Outcome& o) {
    using reference::SeriesKind;
    int checks = 0, violations = 0;
    double tightest = INFINITY;
    const Tolerance coarse{1e-6, 10'000'000};
    for (const RandomPoint& pt : random_points(Family::QK, 100, kSeed + 9)) {
        const std::array<std::pair<SeriesKind, std::function<double(std::size_t)>>, 2> series = {{
            {SeriesKind::PSI_QK, [&](std::size_t n) { return psi_qk_tail_bound(pt.t, pt.params, n); }},
            {SeriesKind::PSI_QK_PRIME, [&](std::size_t n) { return psi_qk_prime_tail_bound(pt.t, pt.params, n); }},
        }};
        const std::size_t n_auto = std::max<std::size_t>(1, psi_qk(pt.t, pt.params, coarse).terms_used);
        for (const auto& [kind, bound] : series)
            for (std::size_t n : {std::size_t{1}, std::size_t{3}, n_auto}) {
                const double s_n = reference::brute_force_series(kind, pt.t, pt.params, n);
                const double s_4n = reference::brute_force_series(kind, pt.t, pt.params, 4 * n);
                const double diff = std::fabs(s_n - s_4n);
                const double tb = bound(n);
                // the two partial sums are each rounded once to double
                const double rounding = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(s_n), 1.0);
                ++checks;
                if (diff > tb + rounding) ++violations;
                if (diff > rounding) tightest = std::min(tightest, tb / diff);
            }
    }
    o.detail << " checks=" << checks << " violations=" << violations << " min bound/diff=" << tightest;
    o.require(violations == 0, "tail bound exceeded");
}

// 7. Degeneration scans.
void criterion_7(Outcome& o) {
    const auto p_scan = limits::limit_p_to_inf(1.0, 0.5, {1, 2, 5, 10, 20, 50});
    o.detail << " p->inf: strictly_decreasing=" << *p_scan.strictly_decreasing
             << " within_bound=" << *p_scan.within_bound << ";";
    o.require(p_scan.converged, "p -> infinity");

    const auto scan = [&](const char* label, const limits::ConvergenceReport& r) {
        o.detail << " " << label << ": final_gap=" << r.final_gap << " monotone=" << r.monotone_tail
                 << " discrepancy_vs_stated=" << r.target_discrepancy << ";";
        o.require(r.monotone_tail && r.final_gap < 1e-2, label);
    };
    scan("q->1 qk k=1", limits::limit_q_to_1_qk(1.0, 1.0, 5));
    scan("q->1 qk k=2", limits::limit_q_to_1_qk(1.5, 2.0, 5));
    scan("q->1 pq p=3", limits::limit_q_to_1_pq(0.5, 3, 5));
    scan("combined t=2.5", limits::limit_pq_combined(2.5, 5));

    bool k_ok = true;
    for (double q : {0.1, 0.5, 0.9})
        for (double t : {0.5, 1.0, 3.0}) k_ok = k_ok && limits::limit_k_to_1(t, q).holds;
    o.require(k_ok, "k = 1 substitution");

    const double psi1 = reference::classical_digamma(1.0).value;
    o.detail << " psi(1)=" << std::setprecision(12) << psi1 << std::setprecision(3);
    o.require(std::fabs(psi1 + 0.5772156649) <= 1e-9, "classical psi(1)");
}

// 8. Positivity threshold at q = 0.5, k = 1.
void criterion_8(Outcome& o) {
    const auto params = DeformParams::qk(0.5, 1.0);
    const Threshold th = find_positive_threshold(params);
    const double psi_t0 = psi_qk(th.t0, params).value;
    const double brute = oracle::bisect(
        [](double t) { return static_cast<double>(oracle::psi_qk_sum(t, 0.5L, 1.0L, 1'000'000)); }, 1.0, 2.0);
    o.detail << std::setprecision(15) << " t0=" << th.t0 << " brute=" << brute << std::setprecision(3)
             << " psi(t0)=" << psi_t0 << " |t0-brute|=" << std::fabs(th.t0 - brute);
    o.require(th.t0 > 1.0 && th.t0 < 2.0, "t0 in (1, 2)");
    o.require(std::fabs(psi_t0) <= 1e-11, "|psi(t0)|");
    o.require(std::fabs(th.t0 - brute) <= 1e-9, "brute-force bisection");
}

struct Shell {
    int code;
    std::string out;
};

Shell shell(const std::string& args) {
    const std::string cmd = std::string(QDIGAMMA_CLI_PATH) + " " + args + " 2>/dev/null";
    Shell r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// 9. CLI contract.
void criterion_9(Outcome& o) {
    const std::array<std::pair<std::string, int>, 6> cases = {{
        {"eval --t 2", 0},
        {"verify --suite pq-theorem --specs 20 --t-points 10 --seed 3", 0},
        {"root --family pq --p 1", 1},
        {"limits --scan pq-combined --t 2.5 --path decade", 1},
        {"eval --t 2 --q 1.5", 2},
        {"eval --no-such-flag", 2},
    }};
    for (const auto& [args, expect] : cases) {
        const int code = shell(args).code;
        o.require(code == expect, "'" + args + "' exited " + std::to_string(code));
    }
    o.detail << " exit codes checked=" << cases.size() << ";";

    const std::string verify = "verify --suite qk-theorem --specs 40 --t-points 20 --seed 99 --json";
    const Shell a = shell(verify), b = shell(verify);
    o.require(!a.out.empty() && a.out == b.out, "byte determinism");
    o.detail << " deterministic bytes=" << a.out.size() << ";";

    const std::string table = "table --q 0.7 --k 1.3 --t-min 0.1 --t-max 9 --t-count 25";
    const Shell csv = shell(table + " --format csv"), js = shell(table + " --json");
    double worst = 0.0;
    std::size_t rows_checked = 0;
    try {
        const auto rows = nlohmann::json::parse(js.out).at("rows");
        std::istringstream in(csv.out);
        std::string line;
        std::size_t i = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 't') continue;
            std::istringstream row(line);
            std::string t, v, tb;
            std::getline(row, t, ',');
            std::getline(row, v, ',');
            std::getline(row, tb, ',');
            const auto rel = [](double x, double y) { return x == y ? 0.0 : std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y)); };
            worst = std::max({worst, rel(std::stod(t), rows.at(i).at("t").get<double>()),
                              rel(std::stod(v), rows.at(i).at("value").get<double>()),
                              rel(std::stod(tb), rows.at(i).at("tail_bound").get<double>())});
            ++i;
        }
        rows_checked = i;
        o.require(i == rows.size() && i == 25, "row count");
    } catch (const std::exception& e) {
        o.require(false, std::string("round trip: ") + e.what());
    }
    o.detail << " csv/json rows=" << rows_checked << " max rel diff=" << worst;
    o.require(worst <= 1e-15, "csv/json round trip");
}

}  // namespace

int main() {
    const std::array<std::pair<double, std::function<void(Outcome&)>>, 9> criteria = {{
        {10.0, criterion_1}, {60.0, criterion_2}, {0.0, criterion_3}, {0.0, criterion_4}, {0.0, criterion_5},
        {0.0, criterion_6},  {0.0, criterion_7},  {0.0, criterion_8}, {0.0, criterion_9},
    }};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        o.detail.precision(3);
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].first > 0.0) o.require(secs < criteria[i].first, "runtime limit");
        if (!o.pass) ++failed;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << std::fixed
                  << std::setprecision(2) << secs << " s)" << std::defaultfloat << o.detail.str() << "\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
