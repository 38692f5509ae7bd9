#include "walkerlab/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "walkerlab/curvature.hpp"
#include "walkerlab/duality.hpp"

namespace walkerlab {

namespace {

Json point_json(const Point4& p) { return Json::array({p[0], p[1], p[2], p[3]}); }

Json nested(const TensorValue& t) {
    // rank-generic nesting, first index outermost
    std::function<Json(std::size_t, int)> rec = [&](std::size_t base, int depth) -> Json {
        if (depth == t.rank()) return t[base];
        Json a = Json::array();
        std::size_t stride = 1;
        for (int d = depth + 1; d < t.rank(); ++d) stride *= kDim;
        for (int i = 0; i < kDim; ++i) a.push_back(rec(base + static_cast<std::size_t>(i) * stride, depth + 1));
        return a;
    };
    return rec(0, 0);
}

Json invariants_json(const SpectralInvariants& s) { return Json{{"tr", s.tr}, {"tr2", s.tr2}, {"tr3", s.tr3}}; }

void write(std::ostringstream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << inner << Json(it.key()).dump() << ": ";
            write(os, it.value(), indent + 1);
        }
        os << "\n" << pad << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        if (flat) {
            os << "[";
            for (std::size_t n = 0; n < j.size(); ++n) {
                if (n) os << ", ";
                write(os, j[n], indent + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t n = 0; n < j.size(); ++n) {
            if (n) os << ",\n";
            os << inner;
            write(os, j[n], indent + 1);
        }
        os << "\n" << pad << "]";
        return;
    }
    case Json::value_t::number_float:
        os << format_number(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

} // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_json(const Json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << "\n";
    return os.str();
}

SamplerConfig effective_sampling(const Scenario& s, const RunOptions& opts) {
    SamplerConfig cfg = s.sampling;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.samples) cfg.count = *opts.samples;
    return cfg;
}

int ScenarioReport::passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass ? 1 : 0;
    return n;
}

int ScenarioReport::unexpected() const {
    int n = 0;
    for (const auto& c : checks) n += c.as_expected() ? 0 : 1;
    return n;
}

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts) {
    ScenarioReport r;
    r.id = s.id;
    r.sampling = effective_sampling(s, opts);
    const Sampler sampler(r.sampling);
    r.samples = static_cast<int>(sampler.size());
    r.rejected = sampler.rejected();
    const ResolvedModel model = resolve(s, sampler);
    r.phi = model.phi;
    const CheckContext ctx{s, model, sampler, opts.tol};
    for (const auto& spec : s.checks) r.checks.push_back(run_check(spec, ctx));
    return r;
}

Json report_json(const ScenarioReport& r, bool timing) {
    Json j;
    j["scenario"] = r.id;
    Json smp;
    smp["seed"] = r.sampling.seed;
    smp["count"] = r.sampling.count;
    smp["accepted"] = r.samples;
    smp["rejected"] = r.rejected;
    Json box = Json::array();
    for (const auto& b : r.sampling.box) box.push_back(Json::array({b[0], b[1]}));
    smp["box"] = box;
    Json ex = Json::array();
    for (const auto& e : r.sampling.exclusions) ex.push_back(Json{{"expr", e.text}, {"min_abs", e.min_abs}});
    smp["exclusions"] = ex;
    j["sampling"] = smp;
    j["phi"] = Json::array({Json::array({r.phi.p11.str(), r.phi.p12.str()}),
                            Json::array({r.phi.p12.str(), r.phi.p22.str()})});
    Json checks = Json::array();
    for (std::size_t n = 0; n < r.checks.size(); ++n) {
        const auto& c = r.checks[n];
        Json e;
        e["index"] = n;
        e["name"] = c.name;
        e["verdict"] = c.pass ? "pass" : "fail";
        e["expected"] = c.expect_pass ? "pass" : "fail";
        e["as_expected"] = c.as_expected();
        e["residual"] = c.residual;
        e["tolerance"] = c.tolerance;
        e["witness"] = c.witness ? point_json(*c.witness) : Json(nullptr);
        e["details"] = c.details;
        if (!c.error.empty()) e["error"] = c.error;
        if (timing) e["wall_seconds"] = c.wall_seconds;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["summary"] = Json{{"checks", r.checks.size()},
                        {"passed", r.passed()},
                        {"failed", static_cast<int>(r.checks.size()) - r.passed()},
                        {"unexpected", r.unexpected()}};
    return j;
}

std::string checks_csv(const ScenarioReport& r) {
    std::ostringstream os;
    os << "index,name,verdict,expected,residual,tolerance,w1,w2,w3,w4\n";
    for (std::size_t n = 0; n < r.checks.size(); ++n) {
        const auto& c = r.checks[n];
        os << n << ',' << c.name << ',' << (c.pass ? "pass" : "fail") << ',' << (c.expect_pass ? "pass" : "fail")
           << ',' << format_number(c.residual) << ',' << format_number(c.tolerance);
        for (int i = 0; i < 4; ++i) os << ',' << (c.witness ? format_number((*c.witness)[i]) : std::string());
        os << '\n';
    }
    return os.str();
}

Json curvature_report(const Scenario& s, const ResolvedModel& m, const std::vector<Point4>& points) {
    Json j;
    j["scenario"] = s.id;
    j["metric"] = Json{{"a", m.metric.a.str()}, {"b", m.metric.b.str()}, {"c", m.metric.c.str()}};
    Json pts = Json::array();
    for (const auto& p : points) {
        Curvature c(metric_jet(m.metric, p, 4));
        const CurvatureBundle b = c.bundle();
        const BachResult bach = c.bach(std::numeric_limits<double>::infinity());
        Json e;
        e["point"] = point_json(p);
        const MetricAt g = metric_at(m.metric, p);
        Json gm = Json::array();
        for (const auto& row : g.g) gm.push_back(Json::array({row[0], row[1], row[2], row[3]}));
        e["metric"] = gm;
        e["christoffel"] = nested(b.gamma);
        e["riemann"] = nested(b.riemann);
        e["ricci"] = nested(b.ricci);
        e["scalar"] = b.scalar;
        e["schouten"] = nested(b.schouten);
        e["cotton"] = nested(b.cotton);
        e["weyl"] = nested(b.weyl);
        e["bach"] = nested(bach.bach);
        e["bach_formula_discrepancy"] = bach.discrepancy;
        const DualityReport d = weyl_split(c);
        e["wplus"] = Json{{"invariants", invariants_json(d.plus)}, {"max_abs", d.max_plus}};
        e["wminus"] = Json{{"invariants", invariants_json(d.minus)}, {"max_abs", d.max_minus}, {"rank", d.minus_rank}};
        pts.push_back(e);
    }
    j["points"] = pts;
    return j;
}

} // namespace walkerlab
