#include "qdigamma/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdigamma/errors.hpp"
#include "qdigamma/inequalities.hpp"
#include "qdigamma/limits.hpp"
#include "qdigamma/qcore.hpp"
#include "qdigamma/report_json.hpp"

namespace qdigamma::cli {

namespace {

using json::Json;

struct Options {
    std::string command;
    std::string family = "qk";
    double q = 0.5;
    double k = 1.0;
    long p = 2;
    double abs_tol = 1e-13;
    double n_max = 1e7;
    std::string format;
    bool json_flag = false;
    std::uint64_t seed = 0;

    // eval / table
    std::string fn = "psi";
    double t = 1.0;
    double a = 1.0, b = 1.0, c = 1.0, d = 1.0, alpha = 1.0, beta = 1.0;
    std::optional<double> t_min, t_max;
    int t_count = 11;

    // verify
    std::string suite = "qk-theorem";
    int specs = 100;
    int t_points = 50;

    // limits
    std::string scan = "p-inf";
    int j_max = 5;
    std::vector<long> p_list = {1, 2, 5, 10, 20, 50};
    double conv_tol = 1e-2;
    std::string path = "tail";
};

/// Input rejected after parsing (bad combination of otherwise valid options).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Options& o, const std::string& default_format) {
    sub->add_option("--family", o.family, "qk or pq")->check(CLI::IsMember({"qk", "pq"}));
    sub->add_option("--q", o.q, "deformation base in (0,1)");
    sub->add_option("--k", o.k, "k > 0, (q,k) family");
    sub->add_option("--p", o.p, "positive integer p, (p,q) family");
    sub->add_option("--abs-tol", o.abs_tol, "absolute truncation target");
    sub->add_option("--n-max", o.n_max, "series term cap");
    sub->add_option("--format", o.format)
        ->check(CLI::IsMember({"json", "csv", "plain"}))
        ->description("json, csv or plain (default " + default_format + ")");
    sub->add_flag("--json", o.json_flag, "shorthand for --format json");
    sub->add_option("--seed", o.seed, "seed for randomized sampling");
}

void add_spec(CLI::App* sub, Options& o) {
    sub->add_option("--a", o.a);
    sub->add_option("--b", o.b);
    sub->add_option("--c", o.c);
    sub->add_option("--d", o.d);
    sub->add_option("--alpha", o.alpha);
    sub->add_option("--beta", o.beta);
}

std::string config_value(const Json& v) {
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return json::format_number(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (!s.empty()) s += ',';
            s += config_value(e);
        }
        return s;
    }
    throw UsageError("unsupported config value " + v.dump());
}

// Moves --config <file> out of args and splices its keys in as flags right
// after the subcommand, so explicit flags (parsed later) take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a file path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path) return rest;

    std::ifstream in(*path);
    if (!in) throw UsageError("cannot open config file " + *path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back("--" + flag);
            continue;
        }
        injected.push_back("--" + flag);
        injected.push_back(config_value(value));
    }
    if (rest.empty()) return injected;
    std::vector<std::string> out{rest.front()};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

Tolerance make_tolerance(const Options& o) {
    if (!(o.n_max >= 1.0) || std::floor(o.n_max) != o.n_max)
        throw DomainError("--n-max must be a positive integer");
    Tolerance tol{o.abs_tol, static_cast<std::size_t>(o.n_max)};
    tol.validate();
    return tol;
}

DeformParams make_params(const Options& o) {
    return o.family == "qk" ? DeformParams::qk(o.q, o.k) : DeformParams::pq(o.p, o.q);
}

RatioSpec make_spec(const Options& o) { return {o.a, o.b, o.c, o.d, o.alpha, o.beta}; }

Json resolved_config(const Options& o) {
    Json c;
    c["command"] = o.command;
    c["family"] = o.family;
    c["q"] = o.q;
    if (o.family == "qk")
        c["k"] = o.k;
    else
        c["p"] = o.p;
    c["abs_tol"] = o.abs_tol;
    c["n_max"] = static_cast<std::uint64_t>(o.n_max);
    c["format"] = o.format;
    c["seed"] = o.seed;
    if (o.command == "eval" || o.command == "table") {
        c["fn"] = o.fn;
        if (o.command == "eval") c["t"] = o.t;
        if (o.fn == "ratio") c["spec"] = json::to_json(RatioSpec{o.a, o.b, o.c, o.d, o.alpha, o.beta});
    }
    if (o.command == "table") {
        c["t_min"] = *o.t_min;
        c["t_max"] = *o.t_max;
        c["t_count"] = o.t_count;
    }
    if (o.command == "verify") {
        c["suite"] = o.suite;
        c["specs"] = o.specs;
        c["t_points"] = o.t_points;
        c["t_min"] = *o.t_min;
        c["t_max"] = *o.t_max;
    }
    if (o.command == "limits") {
        c["scan"] = o.scan;
        c["t"] = o.t;
        c["j_max"] = o.j_max;
        c["p_list"] = o.p_list;
        c["conv_tol"] = o.conv_tol;
        if (o.scan == "pq-combined") c["path"] = o.path;
    }
    return c;
}

EvalResult evaluate(const Options& o, double t, const DeformParams& params, const Tolerance& tol) {
    if (o.fn == "psi") return psi(t, params, tol);
    if (o.fn == "psi-prime") return psi_prime(t, params, tol);
    if (o.fn == "ln-gamma") return ln_gamma(t, params, tol);
    return ratio(make_spec(o), t, params, tol);
}

std::string config_comment(const Options& o) { return "# config: " + json::dump(resolved_config(o), -1) + "\n"; }

struct Outcome {
    std::string text;
    int code = kSuccess;
};

Outcome cmd_eval(const Options& o) {
    const Tolerance tol = make_tolerance(o);
    const DeformParams params = make_params(o);
    const EvalResult r = evaluate(o, o.t, params, tol);
    std::ostringstream os;
    if (o.format == "json") {
        Json body{{"config", resolved_config(o)}, {"result", json::to_json(r)}};
        os << json::dump(json::document("eval", body)) << "\n";
    } else if (o.format == "csv") {
        os << config_comment(o) << "t,value,tail_bound,terms_used\n"
           << json::format_number(o.t) << ',' << json::format_number(r.value) << ','
           << json::format_number(r.tail_bound) << ',' << r.terms_used << "\n";
    } else {
        os << config_comment(o) << "value      " << json::format_number(r.value) << "\n"
           << "tail_bound " << json::format_number(r.tail_bound) << "\n"
           << "terms_used " << r.terms_used << "\n";
    }
    return {os.str(), kSuccess};
}

Outcome cmd_table(const Options& o) {
    const Tolerance tol = make_tolerance(o);
    const DeformParams params = make_params(o);
    if (o.t_count < 2) throw DomainError("--t-count must be at least 2");
    if (!(*o.t_max > *o.t_min)) throw DomainError("--t-max must exceed --t-min");
    GridSpec grid;
    grid.t_min = *o.t_min;
    grid.t_max = *o.t_max;
    grid.t_count = o.t_count;

    std::vector<std::pair<double, EvalResult>> rows;
    for (double t : grid.t_points()) rows.emplace_back(t, evaluate(o, t, params, tol));

    std::ostringstream os;
    if (o.format == "json") {
        Json table = Json::array();
        for (const auto& [t, r] : rows)
            table.push_back(Json{{"t", t}, {"value", r.value}, {"tail_bound", r.tail_bound}});
        Json body{{"config", resolved_config(o)}, {"rows", std::move(table)}};
        os << json::dump(json::document("table", body)) << "\n";
    } else if (o.format == "csv") {
        os << config_comment(o) << "t,value,tail_bound\n";
        for (const auto& [t, r] : rows)
            os << json::format_number(t) << ',' << json::format_number(r.value) << ','
               << json::format_number(r.tail_bound) << "\n";
    } else {
        os << config_comment(o);
        for (const auto& [t, r] : rows)
            os << std::setw(26) << json::format_number(t) << std::setw(26) << json::format_number(r.value)
               << std::setw(26) << json::format_number(r.tail_bound) << "\n";
    }
    return {os.str(), kSuccess};
}

Outcome cmd_verify(const Options& o) {
    const Tolerance tol = make_tolerance(o);
    const Suite suite = *parse_suite(o.suite);
    if (o.specs < 1) throw DomainError("--specs must be at least 1");
    if (o.t_points < 2) throw DomainError("--t-points must be at least 2");

    Family family = o.family == "qk" ? Family::QK : Family::PQ;
    if (suite == Suite::QK_THEOREM || suite == Suite::QK_COROLLARY) family = Family::QK;
    if (suite == Suite::PQ_THEOREM || suite == Suite::PQ_COROLLARY) family = Family::PQ;

    GridSpec grid;
    grid.t_min = *o.t_min;
    grid.t_max = *o.t_max;
    grid.t_count = o.t_points;
    grid.seed = o.seed;
    grid.samples = random_samples(family, o.specs, std::max(1.0, grid.t_max), o.seed, tol);

    const VerificationReport report = verify_bounds(suite, grid, tol);
    std::ostringstream os;
    if (o.format == "json") {
        Json body = json::to_json(report);
        Json doc{{"config", resolved_config(o)}};
        for (const auto& [key, value] : body.items()) doc[key] = value;
        os << json::dump(json::document("verification_report", doc)) << "\n";
    } else if (o.format == "csv") {
        os << config_comment(o) << "suite,passed,worst_violation,epsilon,checks_run,skipped,failures\n"
           << o.suite << ',' << (report.passed ? "true" : "false") << ','
           << json::format_number(report.worst_violation) << ',' << json::format_number(report.epsilon) << ','
           << report.checks_run << ',' << report.skipped << ',' << report.failures.size() << "\n";
    } else {
        os << config_comment(o) << "suite           " << o.suite << "\n"
           << "passed          " << (report.passed ? "yes" : "no") << "\n"
           << "worst_violation " << json::format_number(report.worst_violation) << "\n"
           << "epsilon         " << json::format_number(report.epsilon) << "\n"
           << "checks_run      " << report.checks_run << "\n"
           << "skipped         " << report.skipped << "\n"
           << "failures        " << report.failures.size() << "\n";
    }
    return {os.str(), report.passed ? kSuccess : kCheckFailed};
}

Outcome render_convergence(const Options& o, const limits::ConvergenceReport& r) {
    std::ostringstream os;
    if (o.format == "json") {
        Json doc{{"config", resolved_config(o)}};
        const Json body = json::to_json(r);
        for (const auto& [key, value] : body.items()) doc[key] = value;
        os << json::dump(json::document("convergence_report", doc)) << "\n";
    } else {
        os << config_comment(o) << "parameter,q,p,value,gap,bound\n";
        for (const auto& pt : r.sequence)
            os << json::format_number(pt.parameter) << ',' << json::format_number(pt.q) << ',' << pt.p << ','
               << json::format_number(pt.value) << ',' << json::format_number(pt.gap) << ','
               << (pt.bound ? json::format_number(*pt.bound) : std::string()) << "\n";
        if (o.format == "plain") {
            os << "target            " << r.target_desc << " = " << json::format_number(r.target_value) << "\n"
               << "stated target     " << r.stated_target_desc << " = "
               << json::format_number(r.stated_target_value) << "\n"
               << "discrepancy       " << json::format_number(r.target_discrepancy) << "\n"
               << "monotone_tail     " << (r.monotone_tail ? "yes" : "no") << "\n"
               << "final_gap         " << json::format_number(r.final_gap) << "\n"
               << "converged         " << (r.converged ? "yes" : "no") << "\n";
        }
    }
    return {os.str(), r.converged ? kSuccess : kCheckFailed};
}

Outcome cmd_limits(const Options& o) {
    const Tolerance tol = make_tolerance(o);
    if (o.scan == "k1") {
        const limits::KSubstitutionCheck c = limits::limit_k_to_1(o.t, o.q, tol);
        std::ostringstream os;
        if (o.format == "json") {
            Json doc{{"config", resolved_config(o)}};
            const Json body = json::to_json(c);
            for (const auto& [key, value] : body.items()) doc[key] = value;
            os << json::dump(json::document("k_substitution_check", doc)) << "\n";
        } else {
            os << config_comment(o) << "t,q,value,oracle_value,gap,allowed,holds\n"
               << json::format_number(c.t) << ',' << json::format_number(c.q) << ','
               << json::format_number(c.value) << ',' << json::format_number(c.oracle_value) << ','
               << json::format_number(c.gap) << ',' << json::format_number(c.allowed) << ','
               << (c.holds ? "true" : "false") << "\n";
        }
        return {os.str(), c.holds ? kSuccess : kCheckFailed};
    }
    if (o.scan == "qk-q1") return render_convergence(o, limits::limit_q_to_1_qk(o.t, o.k, o.j_max, o.conv_tol));
    if (o.scan == "q1") return render_convergence(o, limits::limit_q_to_1_qk(o.t, 1.0, o.j_max, o.conv_tol));
    if (o.scan == "pq-q1") return render_convergence(o, limits::limit_q_to_1_pq(o.t, o.p, o.j_max, o.conv_tol));
    if (o.scan == "p-inf") return render_convergence(o, limits::limit_p_to_inf(o.t, o.q, o.p_list, tol));
    const auto path = o.path == "decade" ? limits::CombinedPath::Decade : limits::CombinedPath::TailControlled;
    return render_convergence(o, limits::limit_pq_combined(o.t, o.j_max, o.conv_tol, path));
}

Outcome cmd_root(const Options& o) {
    const Tolerance tol = make_tolerance(o);
    const Threshold th = find_positive_threshold(make_params(o), tol);
    std::ostringstream os;
    if (o.format == "json") {
        Json body{{"config", resolved_config(o)}, {"result", json::to_json(th)}};
        os << json::dump(json::document("threshold", body)) << "\n";
    } else if (o.format == "csv") {
        os << config_comment(o) << "t0,psi_value,psi_tail_bound\n"
           << json::format_number(th.t0) << ',' << json::format_number(th.psi_value) << ','
           << json::format_number(th.psi_tail_bound) << "\n";
    } else {
        os << config_comment(o) << "t0 " << json::format_number(th.t0) << "\n"
           << "psi(t0) " << json::format_number(th.psi_value) << "\n";
    }
    return {os.str(), kSuccess};
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                  const Json& extra = Json::object()) {
    Json e{{"error", kind}, {"message", message}};
    for (const auto& [key, value] : extra.items()) e[key] = value;
    err << json::dump(e, -1) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Deformed digamma functions: evaluation, ratio inequalities and limit scans", "qdigamma"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1, 1);

    CLI::App* eval = app.add_subcommand("eval", "evaluate one function value");
    add_common(eval, o, "json");
    add_spec(eval, o);
    eval->add_option("--t", o.t, "argument t > 0 (t >= 0 for ratio)")->required();
    eval->add_option("--fn", o.fn)->check(CLI::IsMember({"psi", "psi-prime", "ln-gamma", "ratio"}));

    CLI::App* table = app.add_subcommand("table", "tabulate a function over a t grid");
    add_common(table, o, "csv");
    add_spec(table, o);
    table->add_option("--fn", o.fn)->check(CLI::IsMember({"psi", "psi-prime", "ln-gamma", "ratio"}));
    table->add_option("--t-min", o.t_min);
    table->add_option("--t-max", o.t_max);
    table->add_option("--t-count", o.t_count);

    CLI::App* verify = app.add_subcommand("verify", "run an inequality verification suite");
    add_common(verify, o, "plain");
    verify->add_option("--suite", o.suite)
        ->check(CLI::IsMember({"qk-theorem", "qk-corollary", "pq-theorem", "pq-corollary", "lemma-cross",
                               "monotone-psi", "monotone-psi-prime"}));
    verify->add_option("--specs", o.specs, "number of seeded random parameter/spec samples");
    verify->add_option("--t-points", o.t_points);
    verify->add_option("--t-min", o.t_min);
    verify->add_option("--t-max", o.t_max);

    CLI::App* lim = app.add_subcommand("limits", "run a degeneration scan");
    add_common(lim, o, "plain");
    lim->add_option("--scan", o.scan, "k1, qk-q1, q1, pq-q1, p-inf or pq-combined")
        ->check(CLI::IsMember({"k1", "qk-q1", "q1", "pq-q1", "p-inf", "pq-combined"}));
    lim->add_option("--t", o.t);
    lim->add_option("--j-max", o.j_max);
    lim->add_option("--p-list", o.p_list)->delimiter(',');
    lim->add_option("--conv-tol", o.conv_tol);
    lim->add_option("--path", o.path, "pq-combined path: tail or decade")
        ->check(CLI::IsMember({"tail", "decade"}));

    CLI::App* root = app.add_subcommand("root", "locate the positivity threshold of psi");
    add_common(root, o, "plain");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        report_error(err, "InvalidArguments", e.what());
        return kInvalidInput;
    } catch (const UsageError& e) {
        report_error(err, "InvalidArguments", e.what());
        return kInvalidInput;
    }

    CLI::App* sub = app.get_subcommands().front();
    o.command = sub->get_name();
    if (o.json_flag) o.format = "json";
    if (o.format.empty()) o.format = o.command == "eval" ? "json" : o.command == "table" ? "csv" : "plain";
    if (o.command == "table") {
        if (!o.t_min) o.t_min = 0.5;
        if (!o.t_max) o.t_max = 5.0;
    }
    if (o.command == "verify") {
        const bool corollary = o.suite == "qk-corollary" || o.suite == "pq-corollary";
        const bool monotone = o.suite.rfind("monotone", 0) == 0;
        if (!o.t_min) o.t_min = corollary ? 1.2 : monotone ? 0.1 : 0.0;
        if (!o.t_max) o.t_max = corollary ? 5.0 : monotone ? 10.0 : 1.0;
    }

    try {
        Outcome result;
        if (o.command == "eval")
            result = cmd_eval(o);
        else if (o.command == "table")
            result = cmd_table(o);
        else if (o.command == "verify")
            result = cmd_verify(o);
        else if (o.command == "limits")
            result = cmd_limits(o);
        else
            result = cmd_root(o);
        out << result.text;
        out.flush();
        return result.code;
    } catch (const DomainError& e) {
        report_error(err, "DomainError", e.what());
        return kInvalidInput;
    } catch (const PositivityViolated& e) {
        report_error(err, "PositivityViolated", e.what());
        return kInvalidInput;
    } catch (const TruncationNotConverged& e) {
        report_error(err, "TruncationNotConverged", e.what(),
                     Json{{"best_bound", e.best_bound()}, {"terms", e.terms()}});
        return kNumericalFailure;
    } catch (const NoRootInBracket& e) {
        report_error(err, "NoRootInBracket", e.what(), Json{{"floor", e.floor()}});
        return kCheckFailed;
    } catch (const NoPositiveRegion& e) {
        report_error(err, "NoPositiveRegion", e.what());
        return kCheckFailed;
    } catch (const std::exception& e) {
        report_error(err, "InternalError", e.what());
        return kNumericalFailure;
    }
}

}  // namespace qdigamma::cli
