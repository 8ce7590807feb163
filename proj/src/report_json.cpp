#include "qdigamma/report_json.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace qdigamma::json {

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

void write(std::ostream& os, const Json& j, int indent, int depth) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (pretty) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                os << Json(key).dump() << (pretty ? ": " : ":");
                write(os, value, indent, depth + 1);
            }
            newline(depth);
            os << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                write(os, value, indent, depth + 1);
            }
            newline(depth);
            os << ']';
            return;
        }
        case Json::value_t::number_float:
            os << format_number(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string dump(const Json& doc, int indent) {
    std::ostringstream os;
    write(os, doc, indent, 0);
    return os.str();
}

Json to_json(const DeformParams& params) {
    Json j;
    j["family"] = std::string(to_string(params.family()));
    j["q"] = params.q();
    if (params.family() == Family::QK)
        j["k"] = params.k();
    else
        j["p"] = params.p();
    return j;
}

Json to_json(const RatioSpec& spec) {
    return Json{{"a", spec.a},         {"b", spec.b},       {"c", spec.c},
                {"d", spec.d},         {"alpha", spec.alpha}, {"beta", spec.beta}};
}

Json to_json(const EvalResult& result) {
    return Json{{"value", result.value}, {"tail_bound", result.tail_bound}, {"terms_used", result.terms_used}};
}

Json to_json(const GridSpec& grid) {
    Json samples = Json::array();
    for (const auto& s : grid.samples) samples.push_back(Json{{"params", to_json(s.params)}, {"spec", to_json(s.spec)}});
    return Json{{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"t_count", grid.t_count},
                {"seed", grid.seed},   {"samples", std::move(samples)}};
}

Json to_json(const Threshold& threshold) {
    return Json{{"t0", threshold.t0},
                {"psi_value", threshold.psi_value},
                {"psi_tail_bound", threshold.psi_tail_bound},
                {"iterations", threshold.iterations}};
}

Json to_json(const VerificationReport& report) {
    Json j;
    j["suite"] = std::string(to_string(report.suite));
    j["passed"] = report.passed;
    j["worst_violation"] = report.worst_violation;
    j["epsilon"] = report.epsilon;
    if (report.worst_point) {
        const WorstPoint& w = *report.worst_point;
        j["worst_point"] = Json{{"sample_index", w.sample_index},
                                {"params", to_json(w.params)},
                                {"spec", to_json(w.spec)},
                                {"t", w.t},
                                {"s", optional_number(w.s)}};
    } else {
        j["worst_point"] = nullptr;
    }
    j["checks_run"] = report.checks_run;
    j["skipped"] = report.skipped;
    j["skip_reasons"] = report.skip_reasons;
    Json failures = Json::array();
    for (const auto& f : report.failures)
        failures.push_back(Json{{"sample_index", f.sample_index}, {"t", f.t}, {"message", f.message}});
    j["failures"] = std::move(failures);
    j["grid"] = to_json(report.grid);
    return j;
}

Json to_json(const limits::ConvergenceReport& report) {
    Json j;
    j["target_desc"] = report.target_desc;
    j["target_value"] = report.target_value;
    j["stated_target_desc"] = report.stated_target_desc;
    j["stated_target_value"] = report.stated_target_value;
    j["target_discrepancy"] = report.target_discrepancy;
    Json seq = Json::array();
    for (const auto& pt : report.sequence) {
        Json e{{"parameter", pt.parameter}, {"q", pt.q}, {"p", pt.p},
               {"value", pt.value},         {"gap", pt.gap}, {"bound", optional_number(pt.bound)}};
        e["error"] = pt.error ? Json(*pt.error) : Json(nullptr);
        seq.push_back(std::move(e));
    }
    j["sequence"] = std::move(seq);
    j["monotone_tail"] = report.monotone_tail;
    j["final_gap"] = report.final_gap;
    j["convergence_tol"] = report.convergence_tol;
    j["strictly_decreasing"] = report.strictly_decreasing ? Json(*report.strictly_decreasing) : Json(nullptr);
    j["within_bound"] = report.within_bound ? Json(*report.within_bound) : Json(nullptr);
    j["converged"] = report.converged;
    return j;
}

Json to_json(const limits::KSubstitutionCheck& check) {
    return Json{{"t", check.t},
                {"q", check.q},
                {"value", check.value},
                {"tail_bound", check.tail_bound},
                {"terms_used", check.terms_used},
                {"oracle_value", check.oracle_value},
                {"oracle_terms", check.oracle_terms},
                {"gap", check.gap},
                {"allowed", check.allowed},
                {"holds", check.holds}};
}

Json document(const std::string& kind, const Json& body) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = kind;
    for (const auto& [key, value] : body.items()) doc[key] = value;
    return doc;
}

}  // namespace qdigamma::json
