#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkerlab/affine.hpp"
#include "walkerlab/geodesics.hpp"
#include "walkerlab/sampler.hpp"
#include "walkerlab/soliton.hpp"
#include "walkerlab/walker_metric.hpp"

namespace walkerlab {

using Json = nlohmann::json;

struct CheckSpec {
    std::string name;
    Json params = Json::object();
    std::optional<double> tol;
    bool expect_pass = true;
    std::string note;
};

struct PhiBuilderSpec {
    FamilyMode mode = FamilyMode::Soliton;
    Expression p11, p12;
};

struct GeodesicSetup {
    Point4 x0{};
    Point4 v0{};
    double t_end = 2.0;
    double tol = 1e-9;
};

struct Scenario {
    std::string id;
    std::string description;
    AffineSurface surface;
    EndoField t;
    SymForm2 phi;
    std::optional<PhiBuilderSpec> builder;
    std::optional<Expression> h;
    std::vector<CheckSpec> checks;
    SamplerConfig sampling;
    std::vector<Point4> points;
    std::optional<GeodesicSetup> geodesic;
    std::string output_path;
    std::vector<std::string> output_formats;
    std::string source; // file path or "<string>"
    Json raw;
};

/// Parses and validates a scenario document. Unknown keys, malformed
/// expressions and unknown check names raise ScenarioError with a JSON path.
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::string& path);

/// The Walker metric and potential a scenario describes, with builders applied.
struct ResolvedModel {
    SymForm2 phi;
    WalkerMetric metric;
    Expression f; // soliton potential: h when given, else 0
    bool built = false;
};

ResolvedModel resolve(const Scenario& s, const Sampler& sampler);

/// Scenario JSON with phi replaced by the completed matrix.
Json completed_scenario(const Scenario& s, const ResolvedModel& m);

} // namespace walkerlab
