#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walkerlab/checks.hpp"
#include "walkerlab/scenario.hpp"

namespace walkerlab {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
};

SamplerConfig effective_sampling(const Scenario& s, const RunOptions& opts);

struct ScenarioReport {
    std::string id;
    SamplerConfig sampling;
    int samples = 0;
    int rejected = 0;
    SymForm2 phi;
    std::vector<CheckResult> checks;

    int passed() const;
    int unexpected() const;
    bool as_expected() const { return unexpected() == 0; }
};

/// Runs the scenario's checks in declaration order.
ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Wall times are left out unless `timing` is set, so reports stay byte-identical.
Json report_json(const ScenarioReport& r, bool timing = false);
std::string checks_csv(const ScenarioReport& r);

/// Full curvature dump at the given points.
Json curvature_report(const Scenario& s, const ResolvedModel& m, const std::vector<Point4>& points);

/// JSON text with sorted keys, 2-space indent and doubles at 17 significant digits.
std::string format_json(const Json& j);
std::string format_number(double v);

} // namespace walkerlab
