#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walkerlab/scenario.hpp"

namespace walkerlab {

struct CheckResult {
    std::string name;
    double residual = 0.0;  // worst over samples
    double tolerance = 0.0;
    bool pass = false;      // residual <= tolerance
    bool expect_pass = true;
    std::optional<Point4> witness;
    Json details = Json::object();
    std::string error;      // set when the check could not be evaluated
    double wall_seconds = 0.0;

    bool as_expected() const { return pass == expect_pass; }
};

struct CheckContext {
    const Scenario& scenario;
    const ResolvedModel& model;
    const Sampler& sampler;
    std::optional<double> tol_override;
};

const std::vector<std::string>& registered_checks();
bool is_registered_check(const std::string& name);
double default_tolerance(const std::string& name);
/// Parameter keys a check accepts.
std::vector<std::string> check_parameters(const std::string& name);

/// Registered names close to `name` (edit distance or shared prefix).
std::vector<std::string> suggest_checks(const std::string& name);

/// Input errors (ScenarioError, ParseError, NormalFormError, RejectedError)
/// propagate; numerical failures are recorded in CheckResult::error.
CheckResult run_check(const CheckSpec& spec, const CheckContext& ctx);

} // namespace walkerlab
