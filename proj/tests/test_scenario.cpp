#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "support.hpp"
#include "walkerlab/errors.hpp"
#include "walkerlab/report.hpp"

using namespace walkerlab;

namespace {

const char* kMinimal = R"({
  "id": "T",
  "T": [["0", "1"], ["0", "0"]],
  "phi": [["0", "0"], ["0", "-2"]],
  "h": "x1^2",
  "checks": [{"name": "soliton"}, {"name": "ricci-flat", "expect": "fail"}],
  "sampling": {"seed": 3, "count": 6}
})";

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.what();
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Scenario, ParsesMinimalDocument) {
    const Scenario s = parse_scenario(kMinimal);
    EXPECT_EQ(s.id, "T");
    ASSERT_EQ(s.checks.size(), 2u);
    EXPECT_TRUE(s.checks[0].expect_pass);
    EXPECT_FALSE(s.checks[1].expect_pass);
    EXPECT_EQ(s.sampling.count, 6);
    EXPECT_TRUE(s.t.literally_canonical_nilpotent());
    ASSERT_TRUE(s.h.has_value());
}

TEST(Scenario, ErrorsNameTheJsonPath) {
    EXPECT_NE(error_of(R"({"id": "x", "gama": {}, "checks": []})").find("gama"), std::string::npos);
    EXPECT_NE(error_of(R"({"id": "x", "h": "x1^^2", "checks": []})").find("$.h"), std::string::npos);
    EXPECT_NE(error_of(R"({"id": "x", "checks": [{"name": "bachh-zero"}]})").find("bach-zero"), std::string::npos);
    EXPECT_NE(error_of(R"({"id": "x", "checks": [{"name": "bach-zero", "params": {"zz": 1}}]})").find("zz"),
              std::string::npos);
    EXPECT_FALSE(error_of(R"({"id": "x", "phi": [["x1", "x2"], ["x1", "0"]], "checks": []})").empty());
    EXPECT_FALSE(error_of(R"({"id": "x", "gamma": {"113": "1"}, "checks": []})").empty());
    EXPECT_FALSE(error_of("{\"id\": \"x\", ").empty());
}

TEST(Scenario, FixturesLoad) {
    for (const char* id : {"F0", "F1", "F2", "F3", "F4", "F5"}) {
        const Scenario s = load_scenario(testkit::fixture_path(id));
        EXPECT_EQ(s.id, id);
        EXPECT_FALSE(s.checks.empty());
    }
    EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), Error);
}

TEST(Registry, NamesAndSuggestions) {
    EXPECT_TRUE(is_registered_check("bach-zero"));
    EXPECT_FALSE(is_registered_check("bach"));
    const auto sug = suggest_checks("bach-zer");
    EXPECT_NE(std::find(sug.begin(), sug.end(), "bach-zero"), sug.end());
    for (const auto& n : registered_checks()) EXPECT_GE(default_tolerance(n), 0.0) << n;
}

TEST(Report, RunsChecksInOrder) {
    const ScenarioReport r = run_scenario(parse_scenario(kMinimal));
    ASSERT_EQ(r.checks.size(), 2u);
    EXPECT_EQ(r.checks[0].name, "soliton");
    EXPECT_TRUE(r.checks[0].pass);
    EXPECT_FALSE(r.checks[1].pass);
    EXPECT_TRUE(r.as_expected());
    EXPECT_EQ(r.passed(), 1);
}

TEST(Report, OverridesApply) {
    RunOptions o;
    o.seed = 11;
    o.samples = 3;
    const ScenarioReport r = run_scenario(parse_scenario(kMinimal), o);
    EXPECT_EQ(r.samples, 3);
    EXPECT_EQ(r.sampling.seed, 11u);
}

TEST(Report, JsonIsDeterministic) {
    const Scenario s = parse_scenario(kMinimal);
    const std::string a = format_json(report_json(run_scenario(s)));
    const std::string b = format_json(report_json(run_scenario(s)));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
    EXPECT_NE(format_json(report_json(run_scenario(s), true)).find("wall_seconds"), std::string::npos);
}

TEST(Report, CsvHasOneRowPerCheck) {
    const std::string csv = checks_csv(run_scenario(parse_scenario(kMinimal)));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_EQ(csv.rfind("index,name,verdict,expected,residual,tolerance", 0), 0u);
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "null");
    const std::string j = format_json(Json{{"b", 1}, {"a", {1, 2}}});
    EXPECT_LT(j.find("\"a\""), j.find("\"b\""));
}

TEST(Report, CompletedScenarioHasMatrixPhi) {
    const Scenario s = load_scenario(testkit::fixture_path("F3"));
    const Sampler sampler(s.sampling);
    const ResolvedModel m = resolve(s, sampler);
    EXPECT_TRUE(m.built);
    const Json out = completed_scenario(s, m);
    ASSERT_TRUE(out["phi"].is_array());
    const Scenario again = parse_scenario(out.dump());
    for (const auto& p : sampler.points()) EXPECT_NEAR(again.phi.p22.eval(p), m.phi.p22.eval(p), 1e-12);
}

TEST(Report, CurvatureReportFields) {
    const Scenario s = load_scenario(testkit::fixture_path("F4"));
    const ResolvedModel m = resolve(s, Sampler(s.sampling));
    const Json r = curvature_report(s, m, s.points);
    const Json& pt = r["points"][0];
    for (const char* k : {"metric", "christoffel", "riemann", "ricci", "scalar", "weyl", "bach"})
        EXPECT_TRUE(pt.contains(k)) << k;
}
