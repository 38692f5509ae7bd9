#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "walkerlab/errors.hpp"
#include "walkerlab/geodesics.hpp"
#include "walkerlab/report.hpp"
#include "walkerlab/scenario.hpp"

namespace fs = std::filesystem;
using namespace walkerlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Flags {
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
    bool json = false;
    bool quiet = false;
    bool timing = false;

    RunOptions run() const { return {seed, samples, tol}; }
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--seed", f.seed, "Sampler seed (overrides the scenario)");
    cmd->add_option("--samples", f.samples, "Number of sample points")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", f.tol, "Tolerance applied to every check")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--json", f.json, "Print the JSON report on stdout");
    cmd->add_flag("--quiet", f.quiet, "Print nothing but errors");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError(path + ": cannot write file");
    out << text;
}

void print_summary(std::ostream& os, const ScenarioReport& r) {
    os << r.id << ": " << r.passed() << "/" << r.checks.size() << " checks pass, " << r.unexpected()
       << " unexpected\n";
    for (const auto& c : r.checks) {
        os << "  " << (c.pass ? "pass" : "FAIL") << (c.as_expected() ? "  " : " !") << " " << c.name
           << "  residual " << c.residual << " (tol " << c.tolerance << ")";
        if (!c.expect_pass) os << " [expected fail]";
        if (!c.pass && c.witness) {
            os << " at (";
            for (int i = 0; i < 4; ++i) os << (i ? ", " : "") << (*c.witness)[i];
            os << ")";
        }
        if (!c.error.empty()) os << " error: " << c.error;
        os << "\n";
    }
}

void write_outputs(const Scenario& s, const ScenarioReport& r, bool timing) {
    if (s.output_path.empty()) return;
    const std::vector<std::string> formats = s.output_formats.empty() ? std::vector<std::string>{"json"}
                                                                      : s.output_formats;
    fs::path base(s.output_path);
    for (const auto& f : formats) {
        fs::path p = base;
        if (f == "json") {
            if (p.extension() != ".json") p.replace_extension(".json");
            write_file(p.string(), format_json(report_json(r, timing)));
        } else {
            p.replace_extension(".csv");
            write_file(p.string(), checks_csv(r));
        }
    }
}

int cmd_check(const std::string& path, const Flags& f) {
    const Scenario s = load_scenario(path);
    const ScenarioReport r = run_scenario(s, f.run());
    write_outputs(s, r, f.timing);
    if (f.json)
        std::cout << format_json(report_json(r, f.timing));
    else if (!f.quiet)
        print_summary(std::cout, r);
    return r.as_expected() ? kExitOk : kExitFail;
}

int cmd_report(const std::string& path, const std::string& out, const Flags& f) {
    const Scenario s = load_scenario(path);
    const Sampler sampler(effective_sampling(s, f.run()));
    const ResolvedModel m = resolve(s, sampler);
    std::vector<Point4> pts = s.points;
    if (pts.empty()) {
        const auto& all = sampler.points();
        pts.assign(all.begin(), all.begin() + std::min<std::size_t>(3, all.size()));
    }
    const std::string text = format_json(curvature_report(s, m, pts));
    if (!out.empty()) write_file(out, text);
    if (f.json || (out.empty() && !f.quiet)) std::cout << text;
    return kExitOk;
}

int cmd_build(const std::string& path, const std::string& out, const Flags& f) {
    const Scenario s = load_scenario(path);
    if (!s.builder) throw ScenarioError(path + ": $.phi: build-soliton needs phi given as {mode, free}");
    const Sampler sampler(effective_sampling(s, f.run()));
    const ResolvedModel m = resolve(s, sampler);
    const std::string text = format_json(completed_scenario(s, m));
    if (!out.empty()) write_file(out, text);
    if (f.json || out.empty()) {
        std::cout << text;
    } else if (!f.quiet) {
        std::cout << "Phi_11 = " << m.phi.p11.str() << "\nPhi_12 = " << m.phi.p12.str()
                  << "\nPhi_22 = " << m.phi.p22.str() << "\nwritten to " << out << "\n";
    }
    return kExitOk;
}

int cmd_geodesics(const std::string& path, const std::string& csv, const Flags& f) {
    const Scenario s = load_scenario(path);
    const Sampler sampler(effective_sampling(s, f.run()));
    const ResolvedModel m = resolve(s, sampler);
    const GeodesicSetup g = s.geodesic.value_or(GeodesicSetup{{0, 0, 0, 1}, {1, 0, 0, 0}, 2.0, 1e-9});
    GeodesicOptions opts;
    opts.tol = f.tol.value_or(g.tol);
    opts.record = !csv.empty();
    GeodesicResult r;
    try {
        r = integrate_geodesic(m.metric, {g.x0, g.v0, 0.0}, g.t_end, opts);
    } catch (const StepUnderflowError& e) {
        std::cerr << "geodesics: " << e.what() << "\n";
        return kExitFail;
    }
    if (!csv.empty()) {
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw ScenarioError(csv + ": cannot write file");
        write_trajectory_csv(out, r);
    }
    if (f.json) {
        Json j;
        j["scenario"] = s.id;
        j["status"] = to_string(r.status);
        j["t_end"] = g.t_end;
        j["t_reached"] = r.last.t;
        j["x"] = Json::array({r.last.x[0], r.last.x[1], r.last.x[2], r.last.x[3]});
        j["v"] = Json::array({r.last.v[0], r.last.v[1], r.last.v[2], r.last.v[3]});
        j["energy0"] = r.energy0;
        j["max_energy_drift"] = r.max_energy_drift;
        j["accepted_steps"] = r.accepted;
        j["rejected_steps"] = r.rejected;
        std::cout << format_json(j);
    } else if (!f.quiet) {
        std::cout << s.id << ": " << to_string(r.status) << " at t = " << format_number(r.last.t)
                  << ", max energy drift " << format_number(r.max_energy_drift) << " (" << r.accepted
                  << " steps)\n";
    }
    return r.status == GeodesicStatus::Reached ? kExitOk : kExitFail;
}

int cmd_selftest(const std::string& dir, const std::string& out, const Flags& f) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    if (files.empty()) throw ScenarioError(dir + ": no fixture files");
    std::sort(files.begin(), files.end());
    Json all;
    bool ok = true;
    for (const auto& p : files) {
        const Scenario s = load_scenario(p.string());
        const ScenarioReport r = run_scenario(s, f.run());
        ok = ok && r.as_expected();
        all[s.id] = report_json(r, f.timing);
        if (!f.quiet && !f.json) print_summary(std::cout, r);
    }
    Json doc{{"fixtures", all}, {"green", ok}};
    if (!out.empty()) write_file(out, format_json(doc));
    if (f.json) std::cout << format_json(doc);
    else if (!f.quiet) std::cout << "selftest: " << (ok ? "green" : "RED") << "\n";
    return ok ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walker metric curvature checker"};
    app.require_subcommand(1);
    Flags flags;
    std::string scenario, out, csv, fixtures = WALKERLAB_FIXTURE_DIR;

    auto* check = app.add_subcommand("check", "Run the checks a scenario declares");
    check->add_option("scenario", scenario, "Scenario JSON file")->required();
    check->add_flag("--timing", flags.timing, "Include wall times in the report");
    add_common(check, flags);

    auto* report = app.add_subcommand("report", "Curvature dump at the scenario's points");
    report->add_option("scenario", scenario, "Scenario JSON file")->required();
    report->add_option("-o,--output", out, "Write the dump to a file");
    add_common(report, flags);

    auto* build = app.add_subcommand("build-soliton", "Complete Phi with the Bach-flat family builder");
    build->add_option("scenario", scenario, "Scenario JSON file")->required();
    build->add_option("-o,--output", out, "Write the completed scenario to a file");
    add_common(build, flags);

    auto* geo = app.add_subcommand("geodesics", "Integrate the scenario's geodesic");
    geo->add_option("scenario", scenario, "Scenario JSON file")->required();
    geo->add_option("--csv", csv, "Write the trajectory as CSV");
    add_common(geo, flags);

    auto* self = app.add_subcommand("selftest", "Run every fixture and compare against expected verdicts");
    self->add_option("--fixtures", fixtures, "Fixture directory");
    self->add_option("-o,--output", out, "Write the combined report to a file");
    add_common(self, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*check) return cmd_check(scenario, flags);
        if (*report) return cmd_report(scenario, out, flags);
        if (*build) return cmd_build(scenario, out, flags);
        if (*geo) return cmd_geodesics(scenario, csv, flags);
        if (*self) return cmd_selftest(fixtures, out, flags);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NormalFormError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const RejectedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
