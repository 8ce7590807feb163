#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qdigamma/report_json.hpp"

using namespace qdigamma;
using qdigamma::json::Json;

TEST_CASE("numbers round-trip exactly") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(mant(rng), expo(rng));
        CHECK(std::stod(json::format_number(x)) == x);
        const Json doc{{"x", x}};
        CHECK(Json::parse(json::dump(doc)).at("x").get<double>() == x);
    }
    CHECK(json::format_number(0.1) == "0.10000000000000001");
    CHECK(json::format_number(2.0) == "2");
}

TEST_CASE("non-finite values become null") {
    CHECK(json::format_number(std::numeric_limits<double>::quiet_NaN()) == "null");
    CHECK(json::format_number(INFINITY) == "null");
    const Json doc{{"gap", std::nan("")}, {"ok", true}};
    const Json back = Json::parse(json::dump(doc, -1));
    CHECK(back.at("gap").is_null());
    CHECK(json::dump(doc, -1) == R"({"gap":null,"ok":true})");
}

TEST_CASE("documents carry schema version and kind first") {
    const Json body = json::to_json(EvalResult{0.25, 1e-14, 7});
    const Json doc = json::document("eval", Json{{"result", body}});
    auto it = doc.begin();
    CHECK(it.key() == "schema_version");
    CHECK(it.value() == json::kSchemaVersion);
    ++it;
    CHECK(it.key() == "kind");
    CHECK(doc.at("result").at("terms_used") == 7);
}

TEST_CASE("params serialise per family") {
    const Json qk = json::to_json(DeformParams::qk(0.5, 2.0));
    CHECK(qk.at("family") == "qk");
    CHECK(qk.contains("k"));
    CHECK_FALSE(qk.contains("p"));
    const Json pq = json::to_json(DeformParams::pq(4, 0.5));
    CHECK(pq.at("p") == 4);
    CHECK_FALSE(pq.contains("k"));
}

TEST_CASE("convergence report with failures") {
    limits::ConvergenceReport r;
    r.target_value = 1.0;
    limits::ConvergencePoint pt;
    pt.value = std::nan("");
    pt.gap = std::nan("");
    pt.error = "truncation";
    r.sequence.push_back(pt);
    const Json j = Json::parse(json::dump(json::to_json(r)));
    CHECK(j.at("sequence")[0].at("gap").is_null());
    CHECK(j.at("sequence")[0].at("error") == "truncation");
    CHECK(j.at("strictly_decreasing").is_null());
}
